#pragma once

// Independent brute-force recomputation of the whole pipeline, used as the
// reference in equivalence tests. Everything here is derived directly from
// the raw input rows with straight-line O(N^2)-tolerant code and ordered
// containers; it deliberately shares no graph, voting, or metric logic with
// the main implementation.

#include <climits>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "giants/corpus.hpp"

namespace giants {

struct OracleRow {
    std::string focal;
    bool has_giant = false;
    std::string giant;
    uint32_t stop_n = 1;
    bool percolation_reached = false;
};

struct OracleMetrics {
    long long C = 0;  // distinct citing papers
    long long G = 0;  // times chosen as a giant
    bool d_defined = false;
    long long n_i = 0, n_j = 0, n_k = 0;
};

struct OracleResult {
    std::vector<OracleRow> rows;                   // eligible focal papers, (year, id) order
    std::map<std::string, OracleMetrics> metrics;  // every resolvable paper
};

struct OracleOptions {
    size_t max_papers = 2000;  // the oracle is intentionally slow
    bool exclude_own_refs = true;
    int year_from = INT_MIN;  // focal window (clamped to the data)
    int year_to = INT_MAX;
};

OracleResult oracle_run(const std::vector<RawPaper>& rows, const OracleOptions& opt);

}  // namespace giants
