#pragma once

// Synthetic citation corpora with controllable structure: preferential-
// attachment citing behaviour, configurable reference-count distributions,
// and optional planted signals (author overlap with references, tightly
// co-cited "giant-rich" blocks with matched controls, and isolated highly
// disruptive papers) with machine-readable ground truth.

#include <cstdint>
#include <string>
#include <vector>

#include "giants/corpus.hpp"

namespace giants {

enum class RefDist : uint8_t { fixed, poisson_shifted };

// Fraction of organically generated papers that copy one author from one of
// their references, guaranteeing first-initial/last-name overlaps.
struct PlantedSelfCites {
    double rate = 0.0;
};

// Each block plants one heavily co-cited "giant" paper plus a citation-count
// matched control published in the same year, field, and venue. Boosters and
// adopters wire the giant into a tight co-citation clique with its
// companions; fillers equalize five-year citation counts; in the ten years
// after the window the giant receives round(base_rate * boost_factor) new
// citers per year versus base_rate for the control.
struct PlantedGiantRich {
    uint32_t blocks = 0;
    double boost_factor = 3.0;
    uint32_t base_rate = 2;
    uint32_t adopters = 15;
    uint32_t target_c5 = 30;
};

// Papers whose references are cited by nobody else: no co-citation support
// (no giant under the default own-contribution exclusion) and maximally
// disruptive citers (they cite the paper but none of its references).
struct PlantedIsolated {
    uint32_t papers = 0;
    uint32_t orphan_refs = 5;
    uint32_t citers = 8;
};

struct GeneratorConfig {
    uint32_t n_papers = 1000;  // organic papers; planted structures add on top
    int year_from = 1960;
    int year_to = 2000;
    double mean_refs = 12.0;
    RefDist ref_dist = RefDist::poisson_shifted;
    double attachment = 1.0;  // citation probability ∝ (indegree + 1)^attachment
    uint16_t field_count = 12;
    uint32_t venue_count = 20;
    uint64_t seed = 1;
    PlantedSelfCites self_cites;
    PlantedGiantRich giant_rich;
    PlantedIsolated isolated;
};

struct SynthResult {
    std::vector<RawPaper> rows;

    struct GiantBlock {
        std::string giant_id;
        std::string control_id;
        std::string field;
        int year = 0;
        std::vector<std::string> companions;
        std::vector<std::string> adopters;
        uint32_t expected_c5 = 0;
        uint32_t boost_per_year = 0;  // giant's citers per boost-window year
        uint32_t base_per_year = 0;   // control's citers per boost-window year
        int boost_year_from = 0;
        int boost_year_to = 0;
    };
    std::vector<GiantBlock> giant_blocks;

    struct SelfCite {
        std::string paper_id;
        std::string ref_id;
        std::string author;
    };
    std::vector<SelfCite> self_cites;

    struct IsolatedPlant {
        std::string paper_id;
        std::vector<std::string> orphan_refs;
        uint32_t citers = 0;
    };
    std::vector<IsolatedPlant> isolated;

    std::string planted_venue;  // set when giant blocks exist
};

// Deterministic under cfg.seed. Throws on infeasible configurations.
SynthResult generate(const GeneratorConfig& cfg);

uint64_t generator_config_hash(const GeneratorConfig& cfg);

// Writes rows as JSON-lines to path (one object per paper).
void write_corpus_jsonl(const std::vector<RawPaper>& rows, const std::string& path);

// Writes corpus.jsonl and manifest.json (config echo, hash, ground truth)
// under out_dir, creating it if needed.
void write_synth_corpus(const SynthResult& res, const GeneratorConfig& cfg, const std::string& out_dir);

}  // namespace giants
