#pragma once

// Aggregate analyses over giant assignments and metric rows, exported as
// plot-ready tables: prevalence curves, giant-vs-most-cited fractions,
// conditional giant-index distributions, cohort trajectories, team-size
// curves, disruption profiles, and matched-cohort comparisons.

#include <climits>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "giants/corpus.hpp"
#include "giants/giant.hpp"
#include "giants/metrics.hpp"

namespace giants {

struct AnalysisTable {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;  // pre-formatted cells
    std::vector<std::pair<std::string, std::string>> meta;

    void add_meta(std::string k, std::string v) { meta.emplace_back(std::move(k), std::move(v)); }
};

// TSV body (header + rows, tab-separated); metadata goes to the JSON sidecar.
void write_table_tsv(const AnalysisTable& t, std::ostream& os);
void write_table_meta_json(const AnalysisTable& t, std::ostream& os);

// Per year: fraction of focal papers whose vote network names a giant.
AnalysisTable prevalence_by_year(const Corpus& corpus, const std::vector<GiantResult>& giants);
// Same, broken down by field label.
AnalysisTable prevalence_by_field(const Corpus& corpus, const std::vector<GiantResult>& giants);

// Per year: fraction of giant-having papers whose giant is NOT among the
// references with the highest citation count at the focal publication year.
AnalysisTable giant_vs_most_cited(const Corpus& corpus, const std::vector<GiantResult>& giants);

// Logarithmic citation bins (10 per decade, plus a zero bin): P(G>0) and
// mean G per bin.
AnalysisTable conditional_g_given_c(const Corpus& corpus, const MetricsResult& metrics);
// Joint histogram: within each citation bin, the distribution of the giant
// index over log bins.
AnalysisTable g_histogram_by_c(const Corpus& corpus, const MetricsResult& metrics);

// Cohort selection for the future-impact trajectories.
struct CohortSpec {
    std::string venue;  // empty = no venue filter
    std::string field;  // empty = no field filter
    int year_from = INT_MIN;
    int year_to = INT_MAX;
    long long c_lo = 0;          // inclusive band on the windowed citation count
    long long c_hi = LLONG_MAX;  // inclusive
    int horizon = 10;            // years of cumulative-citation tracking
    double top_fraction = 0.10;  // size of the top/bottom windowed-giant-index groups
};

// Mean cumulative citations per year offset for three groups within the
// cohort: top/bottom `top_fraction` by windowed giant index among papers with
// a nonzero value, and the zero group. Throws if the cohort has fewer than 30
// papers or no nonzero windowed giant index.
AnalysisTable cohort_future_impact(const Corpus& corpus, const MetricsResult& metrics,
                                   const CohortSpec& spec);

// Per team size: mean normalized citation count over all papers with a value,
// and mean normalized giant index over papers with one.
AnalysisTable team_size_curves(const Corpus& corpus, const MetricsResult& metrics);
AnalysisTable team_size_curves_by_field(const Corpus& corpus, const MetricsResult& metrics);

// Three tables: mean normalized giant index per disruption-percentile bin;
// the percentile distribution split by giant-having vs giant-less focal
// papers; and the giant-less fraction per team size.
std::vector<AnalysisTable> disruption_profile(const Corpus& corpus, const MetricsResult& metrics,
                                              const std::vector<GiantResult>& giants);

struct MatchedCohortOptions {
    double band = 0.20;          // relative citation band for matching
    long long min_bin_count = 5; // both sides must reach this for a ratio bin
};

// Three tables: the giant-index distribution ratio between targets and their
// pooled matched controls; a per-target comparison row; and group medians.
// Matched controls share year and field, have C within the band, and exclude
// every target.
std::vector<AnalysisTable> matched_cohort_compare(const Corpus& corpus,
                                                  const MetricsResult& metrics,
                                                  const std::vector<uint32_t>& targets,
                                                  const MatchedCohortOptions& opt = {});

}  // namespace giants
