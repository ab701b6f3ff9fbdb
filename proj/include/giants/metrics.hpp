#pragma once

// Per-paper derived metrics: citation counts (total and windowed), the
// giant index (how often a paper is chosen as someone's giant), the
// disruption score with its year-cohort percentile, field-year
// normalization, and the self-citation-filtered giant index.

#include <iosfwd>
#include <vector>

#include "giants/corpus.hpp"
#include "giants/giant.hpp"

namespace giants {

struct MetricRow {
    uint32_t paper = 0;

    long long C = 0;         // distinct citing papers, any year
    long long C_t = 0;       // citers with year <= pub_year + window_t
    long long G = 0;         // focal papers whose giant is this paper
    long long G_t = 0;       // giant picks by focal papers within the window
    long long G_noself = 0;  // giant picks by focal papers sharing no author key

    long long n_i = 0;  // subsequent papers citing this paper but none of its refs
    long long n_j = 0;  // subsequent papers citing this paper and >=1 of its refs
    long long n_k = 0;  // subsequent papers citing >=1 ref but not this paper
    bool d_defined = false;
    double D = 0.0;  // (n_i - n_j) / (n_i + n_j + n_k)

    bool dp_defined = false;
    bool dp_degenerate = false;  // defined-D year cohort had size 1
    double DP = 0.0;             // percentile of D within the year cohort, [0, 100]

    bool c_norm_defined = false;
    double C_norm = 0.0;  // C / mean C over the (field, year) cohort
    bool g_norm_defined = false;
    double G_norm = 0.0;  // G / mean G over the cohort (see g_norm_over_giants)

    uint32_t M = 0;  // team size (author count)
};

struct MetricsOptions {
    int window_t = 5;
    // When true, the G-normalization cohort mean is taken over cohort members
    // with G > 0 and G_norm is defined only for those members; when false the
    // mean runs over the whole cohort and every member gets a value.
    bool g_norm_over_giants = true;
    // When true, G and G_t also drop self-citing focal papers (the filter
    // behind G_noself becomes the default counting rule).
    bool exclude_self_giants = false;
    int workers = 1;
};

struct MetricsResult {
    std::vector<MetricRow> rows;  // index == corpus paper index
    int window_t = 5;
    bool g_norm_over_giants = true;
};

// True when papers a and b share at least one normalized
// (first initial, last name) author key.
bool shares_author(const Corpus& corpus, uint32_t a, uint32_t b);

MetricsResult compute_metrics(const Corpus& corpus,
                              const std::vector<GiantResult>& giants,
                              const MetricsOptions& opt = {});

// Table export. `meta` lines are emitted first as "# key=value" comments;
// undefined values print as NA (TSV) or null (JSON lines).
void write_metrics_tsv(const MetricsResult& m, const Corpus& corpus, std::ostream& os,
                       const std::vector<std::pair<std::string, std::string>>& meta = {});
void write_metrics_jsonl(const MetricsResult& m, const Corpus& corpus, std::ostream& os,
                         const std::vector<std::pair<std::string, std::string>>& meta = {});

}  // namespace giants
