#pragma once

// Temporal co-citation network: two papers are linked with weight w when w
// distinct citing papers (published up to the snapshot year) list both in
// their references. Weights live in a single pair-keyed map; per-node
// neighbor lists ordered by (weight desc, year asc, id asc) are materialized
// lazily and cached until an advance invalidates the node.

#include <cstdint>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "giants/corpus.hpp"

namespace giants {

struct NeighborEntry {
    uint32_t node;    // corpus index of the neighbor
    uint32_t weight;  // co-citation count
};

class CocitSnapshot {
public:
    CocitSnapshot() = default;

    // Network over all citing papers with year <= year. The corpus must
    // outlive the snapshot. Errors if year lies outside the corpus range.
    static CocitSnapshot build(const Corpus& corpus, int year);

    // Extends the network to to_year in place, processing only citing papers
    // in (as_of_year, to_year]. to_year past the corpus range is allowed and
    // adds nothing. Errors if to_year < as_of_year.
    void advance(int to_year);

    // Test hook: seeds explicit pair weights (a, b, w) instead of counting
    // citing papers. Pairs must be distinct and self-loop free.
    static CocitSnapshot from_pairs(const Corpus& corpus, int year,
                                    const std::vector<std::tuple<uint32_t, uint32_t, uint32_t>>& pairs);

    int as_of_year() const { return as_of_year_; }
    const Corpus& corpus() const { return *corpus_; }

    uint64_t pair_count() const { return pair_w_.size(); }
    uint64_t total_weight() const { return total_weight_; }

    // Co-citation count of (a, b); 0 when never co-cited. Symmetric.
    uint32_t weight(uint32_t a, uint32_t b) const;

    // Number of distinct co-cited neighbors.
    uint32_t degree(uint32_t node) const { return static_cast<uint32_t>(nbrs_[node].size()); }

    // Unordered neighbor ids (no weights); stable content, unspecified order.
    const std::vector<uint32_t>& neighbor_ids(uint32_t node) const { return nbrs_[node]; }

    // Ranked neighbor list, built and cached on first use.
    const std::vector<NeighborEntry>& ranked_neighbors(uint32_t node);

    // Read-only access for parallel phases; the node must have been
    // materialized since the last advance, else throws.
    const std::vector<NeighborEntry>& ranked_neighbors_cached(uint32_t node) const;

    bool is_materialized(uint32_t node) const { return ranked_valid_[node] != 0; }

    // Builds the ranked lists of the given nodes (need not be unique) across
    // workers; afterwards ranked_neighbors_cached is safe for all of them.
    void materialize(const std::vector<uint32_t>& nodes, int workers);

    // First min(n, degree(node)) ranked neighbors.
    std::vector<NeighborEntry> top_n_neighbors(uint32_t node, uint32_t n);

    // Strict total order on (weight, node) entries: heavier first, then older
    // publication year, then lexicographically smaller id.
    bool rank_before(uint32_t w_a, uint32_t node_a, uint32_t w_b, uint32_t node_b) const {
        if (w_a != w_b) return w_a > w_b;
        int ya = corpus_->paper(node_a).year, yb = corpus_->paper(node_b).year;
        if (ya != yb) return ya < yb;
        return corpus_->id_rank(node_a) < corpus_->id_rank(node_b);
    }

    // Every pair as (a, b, w), a < b, sorted by (a, b); for audits and tests.
    std::vector<std::tuple<uint32_t, uint32_t, uint32_t>> sorted_pairs() const;

    // Versioned cache keyed to the corpus content hash.
    void save_cache(const std::string& path) const;
    static CocitSnapshot load_cache(const std::string& path, const Corpus& corpus);

private:
    const Corpus* corpus_ = nullptr;
    int as_of_year_ = 0;
    std::unordered_map<uint64_t, uint32_t> pair_w_;
    std::vector<std::vector<uint32_t>> nbrs_;
    std::vector<std::vector<NeighborEntry>> ranked_;
    std::vector<uint8_t> ranked_valid_;
    uint64_t total_weight_ = 0;

    static uint64_t pair_key(uint32_t a, uint32_t b) {
        uint32_t lo = a < b ? a : b, hi = a < b ? b : a;
        return (static_cast<uint64_t>(lo) << 32) | hi;
    }

    void init(const Corpus& corpus);
    void add_pair(uint32_t a, uint32_t b);
    void ingest_years(int from_year, int to_year);
    void build_ranked(uint32_t node);
};

}  // namespace giants
