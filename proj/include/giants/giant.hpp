#pragma once

// The core algorithm. Each reference of a focal paper casts votes for its
// top-n co-cited neighbors in the global network; votes landing on another
// reference of the same paper become undirected edges (reciprocal votes
// collapse). n grows until the reference subnetwork crosses the percolation
// threshold <k_n> > 1, and the node with the largest degree becomes the
// paper's giant. Papers whose references are fully isolated at n = 1 have no
// giant.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "giants/cocite.hpp"
#include "giants/corpus.hpp"

namespace giants {

constexpr uint32_t kNoPaper = UINT32_MAX;

enum class Damping : uint8_t { delta, linear };

// How deep the giant tie-break chain had to go.
enum class TieDepth : uint8_t { degree = 0, weight = 1, year = 2, id = 3 };
const char* tie_depth_name(TieDepth d);

struct VoteEdge {
    uint32_t a, b;    // local indexes into refs, a < b
    uint32_t weight;  // co-citation weight backing the edge
};

struct VoteSubnetwork {
    std::vector<uint32_t> refs;  // corpus indexes, caller order
    uint32_t n = 0;              // vote budget at stop
    bool percolation_reached = false;
    std::vector<VoteEdge> edges;  // sorted by (a, b)
    std::vector<uint32_t> degree; // per local index

    double avg_degree() const {
        return refs.empty() ? 0.0 : 2.0 * static_cast<double>(edges.size()) / static_cast<double>(refs.size());
    }
};

// Set when a paper passes the listed-reference eligibility threshold but
// fewer than five of its references resolve inside the corpus.
constexpr uint8_t kFlagFewResolvedRefs = 1;

struct GiantResult {
    uint32_t focal = kNoPaper;
    bool has_giant = false;
    uint32_t giant = kNoPaper;
    uint32_t stop_n = 1;
    bool percolation_reached = false;
    uint32_t k_max = 0;
    TieDepth tie_depth = TieDepth::degree;
    uint8_t flags = 0;
    std::vector<uint32_t> refs;     // corpus indexes
    std::vector<uint32_t> degrees;  // k_i per ref
    std::vector<uint64_t> weights;  // w_i: summed weight of retained incident edges
};

struct ImportanceScore {
    uint32_t ref = kNoPaper;
    double s = 0.0;
    uint32_t k = 0;
    uint32_t k_max = 0;
    uint64_t w = 0;
    uint64_t w_class_max = 0;  // max w among refs with the same degree
    double f_value = 0.0;
};

struct GiantOptions {
    // Subtract the focal paper's own reference-pair contribution from the
    // weights used for its computation (it applies only when the focal paper
    // is part of the snapshot, i.e. focal year <= snapshot year).
    bool exclude_own_refs = true;
    // Keep references without any co-cited neighbor in the denominator of
    // <k_n> (sensitivity switch; default on).
    bool isolated_in_n = true;
    Damping damping = Damping::delta;
    int workers = 1;
};

// Subnetwork after every reference cast exactly min(n, list length) votes.
// No early stopping; no own-contribution exclusion.
VoteSubnetwork build_vote_subnetwork(CocitSnapshot& snap, const std::vector<uint32_t>& refs, uint32_t n);

// Grows n until <k_n> > 1 (strict). Zero edges at n = 1 stops immediately
// with percolation_reached = false; exhausting every neighbor list without
// crossing also stops with percolation_reached = false but keeps the edges.
VoteSubnetwork find_percolation_n(CocitSnapshot& snap, const std::vector<uint32_t>& refs);

// Selects the giant: max degree, ties by summed incident edge weight, then
// older year, then smaller id. No giant iff the subnetwork has no edges.
GiantResult identify_giant(const VoteSubnetwork& sub, const Corpus& corpus);

// s_i = (k_i / k_max) * (w_i / w_{k_i,max}) * f(i). Delta damping scores 1
// for the selected giant and 0 elsewhere; linear damping uses f = 1.
// Errors when the result has no giant (k_max == 0).
std::vector<ImportanceScore> importance_scores(const GiantResult& res, Damping damping);

// Full per-paper computation (materializes what it needs in snap).
GiantResult compute_giant(CocitSnapshot& snap, uint32_t focal, const GiantOptions& opt);

// One result per eligible focal paper with year in [year_from, year_to]
// (clamped to the corpus range), ordered by (year, id). Snapshots advance
// year by year; output is identical for every worker count.
std::vector<GiantResult> assign_all_giants(const Corpus& corpus, int year_from, int year_to,
                                           const GiantOptions& opt);

// Table export: focal_id, giant_id|NONE, stop_n, percolation_reached, k_max,
// tie_break_depth, flags.
void write_giant_table(std::ostream& out, const std::vector<GiantResult>& results, const Corpus& corpus);

// Compact versioned cache of results (selection outcome only, not the
// per-reference vectors).
void save_giants_cache(const std::string& path, const std::vector<GiantResult>& results, const Corpus& corpus);
std::vector<GiantResult> load_giants_cache(const std::string& path, const Corpus& corpus);

}  // namespace giants
