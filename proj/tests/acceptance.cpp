// Acceptance gate for the pipeline. Runs seven end-to-end criteria and
// prints exactly one [PASS]/[FAIL] line per criterion with the measured
// numbers and the pinned tolerances; exits nonzero if any criterion fails.
//
//   1. oracle-equivalence      pipeline == brute-force reference on >=20 corpora
//   2. percolation-semantics   >=10^4 randomized subnetwork property instances
//   3. hand-checked-instances  two worked examples reproduced exactly
//   4. metric-invariants       bounds and cohort-mean identities on every corpus
//   5. qualitative-reproduction monotone P(G>0|C) + planted boost recovery
//   6. matched-cohorts         top-decile targets vs matched controls
//   7. determinism-and-scale   worker independence, 100k-paper runtime, advance speedup

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <map>
#include <functional>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "giants/analysis.hpp"
#include "giants/cocite.hpp"
#include "giants/corpus.hpp"
#include "giants/giant.hpp"
#include "giants/metrics.hpp"
#include "giants/oracle.hpp"
#include "giants/synthgen.hpp"
#include "test_util.hpp"

using namespace giants;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v, int prec = 3) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(prec);
    os << v;
    return os.str();
}

struct Outcome {
    std::string name;
    bool pass = false;
    std::string detail;
};

// --- small table helpers ---------------------------------------------------

size_t column_index(const AnalysisTable& t, const std::string& name) {
    for (size_t i = 0; i < t.columns.size(); ++i)
        if (t.columns[i] == name) return i;
    throw std::runtime_error("table " + t.name + " has no column " + name);
}

std::string meta_value(const AnalysisTable& t, const std::string& key) {
    for (const auto& [k, v] : t.meta)
        if (k == key) return v;
    throw std::runtime_error("table " + t.name + " has no meta key " + key);
}

// One corpus with its pipeline outputs, shared between criteria.
struct PipelineRun {
    std::vector<RawPaper> rows;
    Corpus corpus;
    std::vector<GiantResult> giants;
    MetricsResult metrics;
    GiantOptions giant_opt;

    static PipelineRun from_rows(std::vector<RawPaper> rows_in, const GiantOptions& gopt = {},
                                 const MetricsOptions& mopt = {}) {
        PipelineRun p;
        p.rows = std::move(rows_in);
        p.corpus = Corpus::build(p.rows);
        p.giant_opt = gopt;
        p.giants = assign_all_giants(p.corpus, p.corpus.year_min(), p.corpus.year_max(), gopt);
        p.metrics = compute_metrics(p.corpus, p.giants, mopt);
        return p;
    }
};

// ---------------------------------------------------------------------------
// Criterion 1: pipeline vs brute-force reference on >=20 synthetic corpora
// (200-500 papers, varied attachment, self-citation and isolated plants,
// both own-contribution settings, two restricted focal windows).
// Everything must agree exactly; budget 300 seconds for the whole sweep.

Outcome check_oracle_equivalence(std::vector<PipelineRun>& keep) {
    auto t0 = Clock::now();
    const int kCorpora = 20;
    const uint32_t sizes[] = {200, 240, 280, 320, 360, 400, 440, 480, 500, 220};
    const double attachments[] = {0.0, 0.5, 1.0, 1.5, 0.8, 2.0, 0.3, 1.2};

    long long row_compared = 0, metric_compared = 0, mismatches = 0;
    std::string first_mismatch;

    for (int i = 0; i < kCorpora; ++i) {
        GeneratorConfig cfg;
        cfg.n_papers = sizes[i % 10];
        cfg.year_from = 1960;
        cfg.year_to = 2000;
        cfg.mean_refs = 10.0;
        cfg.attachment = attachments[i % 8];
        cfg.seed = 1000 + static_cast<uint64_t>(i);
        if (i % 7 == 5) {
            cfg.ref_dist = RefDist::fixed;
            cfg.mean_refs = 7.0;
        }
        if (i % 5 == 3) cfg.self_cites.rate = 0.25;
        if (i % 5 == 4) cfg.self_cites.rate = 0.4;
        if (i % 4 == 2) cfg.isolated.papers = 2;
        bool exclude_own = i < 18;  // last two run with own-contribution kept

        SynthResult synth = generate(cfg);
        GiantOptions gopt;
        gopt.exclude_own_refs = exclude_own;

        PipelineRun run;
        run.rows = std::move(synth.rows);
        run.corpus = Corpus::build(run.rows);
        run.giant_opt = gopt;
        int y0 = run.corpus.year_min(), y1 = run.corpus.year_max();
        if (i == 16 || i == 17) {  // restricted focal window
            y0 += 6;
            y1 -= 4;
        }
        run.giants = assign_all_giants(run.corpus, y0, y1, gopt);
        run.metrics = compute_metrics(run.corpus, run.giants, {});

        OracleOptions oo;
        oo.exclude_own_refs = exclude_own;
        oo.year_from = y0;
        oo.year_to = y1;
        OracleResult oracle = oracle_run(run.rows, oo);

        auto complain = [&](const std::string& what) {
            if (mismatches == 0) first_mismatch = "corpus " + std::to_string(i) + ": " + what;
            ++mismatches;
        };

        if (run.giants.size() != oracle.rows.size())
            complain("focal row count " + std::to_string(run.giants.size()) + " vs " +
                     std::to_string(oracle.rows.size()));
        size_t n = std::min(run.giants.size(), oracle.rows.size());
        for (size_t r = 0; r < n; ++r) {
            const GiantResult& a = run.giants[r];
            const OracleRow& b = oracle.rows[r];
            ++row_compared;
            if (run.corpus.id_of(a.focal) != b.focal) {
                complain("focal order " + run.corpus.id_of(a.focal) + " vs " + b.focal);
                continue;
            }
            if (a.has_giant != b.has_giant) complain(b.focal + " has_giant");
            if (a.has_giant && b.has_giant && run.corpus.id_of(a.giant) != b.giant)
                complain(b.focal + " giant " + run.corpus.id_of(a.giant) + " vs " + b.giant);
            if (a.stop_n != b.stop_n) complain(b.focal + " stop_n");
            if (a.percolation_reached != b.percolation_reached)
                complain(b.focal + " percolation_reached");
        }
        for (const auto& [id, om] : oracle.metrics) {
            auto idx = run.corpus.find(id);
            if (!idx) {
                complain("missing paper " + id);
                continue;
            }
            const MetricRow& mr = run.metrics.rows[*idx];
            ++metric_compared;
            if (mr.C != om.C) complain(id + " C");
            if (mr.G != om.G) complain(id + " G");
            if (mr.d_defined != om.d_defined) complain(id + " d_defined");
            if (om.d_defined && mr.d_defined) {
                double od = static_cast<double>(om.n_i - om.n_j) /
                            static_cast<double>(om.n_i + om.n_j + om.n_k);
                if (std::abs(mr.D - od) > 1e-15) complain(id + " D value");
            }
        }
        keep.push_back(std::move(run));
    }

    double secs = seconds_since(t0);
    Outcome o;
    o.name = "oracle-equivalence";
    o.pass = mismatches == 0 && secs < 300.0;
    o.detail = "corpora=" + std::to_string(kCorpora) + " focal_rows=" +
               std::to_string(row_compared) + " metric_rows=" + std::to_string(metric_compared) +
               " mismatches=" + std::to_string(mismatches) + " seconds=" + fmt(secs, 1) +
               " (budget 300)";
    if (!first_mismatch.empty()) o.detail += " first=[" + first_mismatch + "]";
    return o;
}

// ---------------------------------------------------------------------------
// Criterion 2: percolation semantics on >=10^4 randomized vote subnetworks.
//   (a) the edge set at budget n is a subset of the edge set at n+1,
//   (b) the stop budget is minimal with strict <k> > 1 whenever the
//       threshold is reported as reached,
//   (c) no giant exactly when the budget-1 subnetwork has zero edges.

Outcome check_percolation_semantics() {
    auto t0 = Clock::now();
    const int kInstances = 10000;
    const uint32_t kPool = 40;

    std::vector<RawPaper> rows;
    for (uint32_t i = 0; i < kPool; ++i) {
        char id[8];
        std::snprintf(id, sizeof id, "n%02u", i);
        rows.push_back(testutil::paper(id, 1960 + static_cast<int>(i)));
    }
    Corpus corpus = Corpus::build(rows);

    std::mt19937_64 rng(777);
    long long failures = 0, reached_count = 0, exhausted_count = 0, none_count = 0;
    std::string first_failure;
    auto fail = [&](int inst, const std::string& what) {
        if (failures == 0) first_failure = "instance " + std::to_string(inst) + ": " + what;
        ++failures;
    };

    std::vector<uint32_t> pool_ids(kPool);
    for (uint32_t i = 0; i < kPool; ++i) pool_ids[i] = i;

    for (int inst = 0; inst < kInstances; ++inst) {
        // Random focal reference list of 3..10 distinct pool members.
        std::shuffle(pool_ids.begin(), pool_ids.end(), rng);
        size_t k = 3 + rng() % 8;
        std::vector<uint32_t> refs(pool_ids.begin(), pool_ids.begin() + static_cast<long>(k));

        // Random weighted pair set, biased toward the reference list so the
        // sweep exercises all three stop regimes (threshold reached, neighbor
        // lists exhausted, and no edges at all) in bulk.
        std::set<std::pair<uint32_t, uint32_t>> seen;
        std::vector<std::tuple<uint32_t, uint32_t, uint32_t>> pairs;
        size_t n_pairs = rng() % (3 * k + 1);
        auto pick_node = [&]() {
            return rng() % 10 < 7 ? refs[rng() % refs.size()]
                                  : static_cast<uint32_t>(rng() % kPool);
        };
        for (size_t e = 0; e < n_pairs; ++e) {
            uint32_t a = pick_node();
            uint32_t b = pick_node();
            if (a == b) continue;
            if (a > b) std::swap(a, b);
            if (!seen.insert({a, b}).second) continue;
            pairs.emplace_back(a, b, 1 + static_cast<uint32_t>(rng() % 6));
        }
        CocitSnapshot snap = CocitSnapshot::from_pairs(corpus, 2005, pairs);

        VoteSubnetwork sub = find_percolation_n(snap, refs);
        GiantResult g = identify_giant(sub, corpus);

        uint32_t max_deg = 0;
        for (uint32_t r : refs) max_deg = std::max(max_deg, snap.degree(r));

        VoteSubnetwork at1 = build_vote_subnetwork(snap, refs, 1);
        bool none_expected = at1.edges.empty();
        if (g.has_giant == none_expected) fail(inst, "giant presence vs edges at n=1");
        if (none_expected) {
            ++none_count;
            if (sub.n != 1 || sub.percolation_reached || !sub.edges.empty())
                fail(inst, "no-giant stop state");
        }

        auto edge_pairs = [](const VoteSubnetwork& s) {
            std::set<std::pair<uint32_t, uint32_t>> out;
            for (const VoteEdge& e : s.edges) out.insert({e.a, e.b});
            return out;
        };

        uint32_t n_cap = std::min(max_deg + 1, 14u);
        std::set<std::pair<uint32_t, uint32_t>> prev;
        for (uint32_t n = 1; n <= n_cap; ++n) {
            VoteSubnetwork s = build_vote_subnetwork(snap, refs, n);
            auto cur = edge_pairs(s);
            if (n > 1 && !std::includes(cur.begin(), cur.end(), prev.begin(), prev.end()))
                fail(inst, "edges(n) not a subset of edges(n+1) at n=" + std::to_string(n));
            if (n < sub.n && s.avg_degree() > 1.0 + 1e-12)
                fail(inst, "threshold crossed below the reported stop budget");
            prev = std::move(cur);
        }

        if (sub.percolation_reached) {
            ++reached_count;
            if (sub.avg_degree() <= 1.0) fail(inst, "reached but <k> <= 1 at stop");
        } else if (!none_expected) {
            ++exhausted_count;
            if (sub.avg_degree() > 1.0) fail(inst, "not reached but <k> > 1 at stop");
            if (sub.n != std::max(1u, max_deg)) fail(inst, "exhaustion stop budget");
            VoteSubnetwork full = build_vote_subnetwork(snap, refs, std::max(1u, max_deg));
            if (edge_pairs(full) != edge_pairs(sub)) fail(inst, "exhaustion edge saturation");
        }
    }

    Outcome o;
    o.name = "percolation-semantics";
    o.pass = failures == 0 && reached_count >= 100 && exhausted_count >= 100 && none_count >= 100;
    o.detail = "instances=" + std::to_string(kInstances) + " reached=" +
               std::to_string(reached_count) + " exhausted=" + std::to_string(exhausted_count) +
               " no_giant=" + std::to_string(none_count) + " violations=" +
               std::to_string(failures) + " seconds=" + fmt(seconds_since(t0), 1);
    if (!first_failure.empty()) o.detail += " first=[" + first_failure + "]";
    return o;
}

// ---------------------------------------------------------------------------
// Criterion 3: two hand-worked instances reproduced exactly.
//
// Instance A, six references with a known vote cascade: co-citation counts
// w(A,B)=5 w(A,C)=4 w(B,C)=3 w(D,E)=2 w(A,D)=1. The threshold needs budget 2;
// A wins with degree 3; the full importance ladder is pinned.
//
// Instance B, the most-cited reference isolated: T is cited ten times but
// always alongside a distinct outside paper, while U-V (4x) and U-W (2x) form
// a tight co-cited cluster. U must win despite C(T) > C(U), with the budget
// exhausted at T's neighbor-list length of 10.

Outcome check_hand_instances() {
    std::vector<std::string> problems;
    auto expect = [&](bool ok, const std::string& what) {
        if (!ok) problems.push_back(what);
    };

    {  // Instance A
        std::vector<RawPaper> rows;
        const char* refs[] = {"A", "B", "C", "D", "E", "F"};
        for (int i = 0; i < 6; ++i) rows.push_back(testutil::paper(refs[i], 1970 + i));
        auto citers = [&rows](const std::string& tag, int count, std::vector<std::string> r) {
            for (int i = 0; i < count; ++i)
                rows.push_back(testutil::paper(tag + std::to_string(i), 1990, r));
        };
        citers("cab", 5, {"A", "B"});
        citers("cac", 4, {"A", "C"});
        citers("cbc", 3, {"B", "C"});
        citers("cde", 2, {"D", "E"});
        citers("cad", 1, {"A", "D"});
        rows.push_back(testutil::paper("P", 2000, {"A", "B", "C", "D", "E", "F"}));
        Corpus corpus = Corpus::build(rows);

        std::vector<GiantResult> res =
            assign_all_giants(corpus, 2000, 2000, GiantOptions{});
        expect(res.size() == 1, "instance A: expected one focal row");
        if (res.size() == 1) {
            const GiantResult& r = res[0];
            expect(r.has_giant && corpus.id_of(r.giant) == "A", "instance A: giant must be A");
            expect(r.stop_n == 2, "instance A: stop budget must be 2");
            expect(r.percolation_reached, "instance A: threshold must be reached");
            expect(r.k_max == 3, "instance A: k_max must be 3");

            std::map<std::string, std::pair<uint32_t, uint64_t>> got;
            for (size_t i = 0; i < r.refs.size(); ++i)
                got[corpus.id_of(r.refs[i])] = {r.degrees[i], r.weights[i]};
            const std::map<std::string, std::pair<uint32_t, uint64_t>> want = {
                {"A", {3, 10}}, {"B", {2, 8}}, {"C", {2, 7}},
                {"D", {2, 3}},  {"E", {1, 2}}, {"F", {0, 0}}};
            expect(got == want, "instance A: degree/weight table");

            std::map<std::string, double> lin, del;
            for (const ImportanceScore& s : importance_scores(r, Damping::linear))
                lin[corpus.id_of(s.ref)] = s.s;
            for (const ImportanceScore& s : importance_scores(r, Damping::delta))
                del[corpus.id_of(s.ref)] = s.s;
            const std::map<std::string, double> lin_want = {
                {"A", 1.0},       {"B", 2.0 / 3.0}, {"C", 7.0 / 12.0},
                {"D", 1.0 / 4.0}, {"E", 1.0 / 3.0}, {"F", 0.0}};
            for (const auto& [id, v] : lin_want)
                expect(lin.count(id) && std::abs(lin[id] - v) <= 1e-12,
                       "instance A: linear importance of " + id);
            for (const auto& [id, v] : del)
                expect(std::abs(v - (id == "A" ? 1.0 : 0.0)) <= 1e-15,
                       "instance A: delta importance of " + id);
        }

        GiantOptions keep_own;
        keep_own.exclude_own_refs = false;
        std::vector<GiantResult> res2 = assign_all_giants(corpus, 2000, 2000, keep_own);
        expect(res2.size() == 1 && res2[0].has_giant && corpus.id_of(res2[0].giant) == "A" &&
                   res2[0].stop_n == 1 && res2[0].percolation_reached,
               "instance A: own-contribution included must stop at budget 1 with giant A");
    }

    {  // Instance B
        std::vector<RawPaper> rows;
        const char* refs[] = {"T", "U", "V", "W", "X"};
        for (int i = 0; i < 5; ++i) rows.push_back(testutil::paper(refs[i], 1970 + i));
        for (int i = 0; i < 10; ++i)
            rows.push_back(testutil::paper("z" + std::to_string(i), 1975));
        for (int i = 0; i < 10; ++i)
            rows.push_back(
                testutil::paper("ct" + std::to_string(i), 1990, {"T", "z" + std::to_string(i)}));
        for (int i = 0; i < 4; ++i)
            rows.push_back(testutil::paper("cuv" + std::to_string(i), 1990, {"U", "V"}));
        for (int i = 0; i < 2; ++i)
            rows.push_back(testutil::paper("cuw" + std::to_string(i), 1990, {"U", "W"}));
        rows.push_back(testutil::paper("cxz0", 1990, {"X", "z0"}));
        rows.push_back(testutil::paper("P", 2000, {"T", "U", "V", "W", "X"}));
        Corpus corpus = Corpus::build(rows);

        // The focal paper itself is a citer too: 10 pairings + P for T,
        // 6 co-citing papers + P for U.
        uint32_t t_idx = *corpus.find("T"), u_idx = *corpus.find("U");
        expect(corpus.citers(t_idx).size() == 11 && corpus.citers(u_idx).size() == 7,
               "instance B: premise C(T)=11 > C(U)=7");

        std::vector<GiantResult> res = assign_all_giants(corpus, 2000, 2000, GiantOptions{});
        expect(res.size() == 1, "instance B: expected one focal row");
        if (res.size() == 1) {
            const GiantResult& r = res[0];
            expect(r.has_giant && corpus.id_of(r.giant) == "U", "instance B: giant must be U");
            expect(r.stop_n == 10, "instance B: budget must exhaust at 10");
            expect(!r.percolation_reached, "instance B: threshold must not be reached");
            expect(r.k_max == 2, "instance B: k_max must be 2");

            AnalysisTable t = giant_vs_most_cited(corpus, res);
            expect(std::abs(std::stod(meta_value(t, "fraction_overall")) - 1.0) < 1e-12,
                   "instance B: giant must not be the most-cited reference");
        }
    }

    Outcome o;
    o.name = "hand-checked-instances";
    o.pass = problems.empty();
    o.detail = problems.empty()
                   ? "both instances exact: giant/stop/threshold/degree/weight/importance and "
                     "the not-most-cited classification"
                   : "violations=" + std::to_string(problems.size()) + " first=[" + problems[0] +
                         "]";
    return o;
}

// ---------------------------------------------------------------------------
// Criterion 4: metric invariants on every corpus built by this binary.

struct InvariantTally {
    long long rows = 0, cohorts = 0, violations = 0;
    std::string first;
};

void check_invariants_on(const Corpus& corpus, const MetricsResult& metrics, const std::string& tag,
                         InvariantTally& tally) {
    auto fail = [&](const std::string& what) {
        if (tally.violations == 0) tally.first = tag + ": " + what;
        ++tally.violations;
    };
    std::map<std::pair<uint16_t, int>, std::pair<double, long long>> cohort_sum;
    for (uint32_t i = 0; i < corpus.size(); ++i) {
        const MetricRow& r = metrics.rows[i];
        ++tally.rows;
        if (r.G > r.C) fail("G > C for " + corpus.id_of(i));
        if (r.G_noself > r.G) fail("G_noself > G for " + corpus.id_of(i));
        if (r.G_t > r.G) fail("G_t > G for " + corpus.id_of(i));
        if (r.C_t > r.C) fail("C_t > C for " + corpus.id_of(i));
        if (r.d_defined && (r.D < -1.0 || r.D > 1.0)) fail("D out of [-1,1] for " + corpus.id_of(i));
        if (r.dp_defined && (r.DP < 0.0 || r.DP > 100.0))
            fail("DP out of [0,100] for " + corpus.id_of(i));
        if (r.c_norm_defined) {
            auto& [sum, n] = cohort_sum[{corpus.paper(i).field, corpus.paper(i).year}];
            sum += r.C_norm;
            ++n;
        }
    }
    for (const auto& [key, sn] : cohort_sum) {
        ++tally.cohorts;
        double mean = sn.first / static_cast<double>(sn.second);
        if (std::abs(mean - 1.0) > 1e-12)
            fail("normalized citation cohort mean " + fmt(mean, 15) + " != 1 (field " +
                 corpus.field_label(key.first) + ", year " + std::to_string(key.second) + ")");
    }
}

// ---------------------------------------------------------------------------
// Criterion 5a: P(G>0) across citation bins must be non-decreasing. Raw log
// bins are merged left-to-right until each holds at least 30 positives and
// 500 papers, so every estimate carries real statistical weight; the merge
// parameters are disclosed in the printed line.

bool monotone_p_given_c(const Corpus& corpus, const MetricsResult& metrics, std::string& detail) {
    AnalysisTable t = conditional_g_given_c(corpus, metrics);
    size_t n_col = column_index(t, "n");
    size_t p_col = column_index(t, "p_g_positive");

    const long long kMinBin = 500;
    const double kMinPositives = 30.0;
    std::vector<std::pair<long long, double>> merged;  // (papers, positives)
    long long acc_n = 0;
    double acc_pos = 0.0;
    for (const auto& row : t.rows) {
        long long n = std::stoll(row[n_col]);
        acc_n += n;
        acc_pos += std::stod(row[p_col]) * static_cast<double>(n);
        if (acc_n >= kMinBin && acc_pos >= kMinPositives) {
            merged.push_back({acc_n, acc_pos});
            acc_n = 0;
            acc_pos = 0.0;
        }
    }
    if (acc_n > 0 && !merged.empty()) {  // fold the remainder into the last bin
        merged.back().first += acc_n;
        merged.back().second += acc_pos;
    }

    bool ok = merged.size() >= 3;
    double prev = -1.0, total_pos = 0.0;
    std::ostringstream curve;
    for (const auto& [n, pos] : merged) {
        double p = pos / static_cast<double>(n);
        if (p < prev - 1e-12) ok = false;
        prev = p;
        total_pos += pos;
        curve << " " << fmt(p, 4);
    }
    detail = "p_curve=[" + curve.str().substr(1) + "] papers_with_g=" +
             std::to_string(static_cast<long long>(total_pos + 0.5)) + " raw_bins=" +
             std::to_string(t.rows.size()) + " merged_bins=" + std::to_string(merged.size()) +
             " (>=30 positives and >=" + std::to_string(kMinBin) + " papers per bin)";
    return ok;
}

// Criterion 5b: recover the planted citation boost. Giant-rich blocks plant
// matched giant/control pairs with identical five-year counts; afterwards the
// giant gains boost_per_year citers per year vs base_per_year for the control,
// so the year-15 gap must be 10*(boost-base) within +-20%.

bool planted_boost_recovered(const PipelineRun& planted, const SynthResult& synth,
                             std::string& detail) {
    double expected = 0.0;
    for (const auto& b : synth.giant_blocks)
        expected += 10.0 * (static_cast<double>(b.boost_per_year) -
                            static_cast<double>(b.base_per_year));
    expected /= static_cast<double>(synth.giant_blocks.size());

    CohortSpec spec;
    spec.venue = synth.planted_venue;
    spec.c_lo = 20;
    spec.c_hi = 60;
    spec.horizon = 15;
    spec.top_fraction = 0.34;
    AnalysisTable t = cohort_future_impact(planted.corpus, planted.metrics, spec);

    size_t off_col = column_index(t, "year_offset");
    size_t high_col = column_index(t, "high_mean");
    size_t zero_col = column_index(t, "zero_mean");
    double high15 = -1.0, zero15 = -1.0;
    for (const auto& row : t.rows)
        if (row[off_col] == "15") {
            high15 = std::stod(row[high_col]);
            zero15 = std::stod(row[zero_col]);
        }
    double diff = high15 - zero15;
    bool ok = high15 >= 0.0 && zero15 >= 0.0 && std::abs(diff - expected) <= 0.2 * expected;
    detail = "cohort_size=" + meta_value(t, "cohort_size") + " year15_high=" + fmt(high15, 1) +
             " year15_zero=" + fmt(zero15, 1) + " gap=" + fmt(diff, 1) + " planted=" +
             fmt(expected, 1) + " (tolerance +-20%)";
    return ok;
}

// ---------------------------------------------------------------------------
// Criterion 6: matched-cohort machinery. Targets are sampled across the top
// decile of the giant index; their median G must exceed twice the matched
// controls' median, and every reported match count and median must agree with
// an independent re-derivation of the year/field/citation-band constraints.

Outcome check_matched_cohorts(const PipelineRun& big) {
    const Corpus& corpus = big.corpus;
    const MetricsResult& metrics = big.metrics;

    std::vector<uint32_t> by_g;
    for (uint32_t i = 0; i < corpus.size(); ++i)
        if (metrics.rows[i].G > 0) by_g.push_back(i);
    std::sort(by_g.begin(), by_g.end(), [&](uint32_t a, uint32_t b) {
        if (metrics.rows[a].G != metrics.rows[b].G) return metrics.rows[a].G > metrics.rows[b].G;
        return corpus.id_rank(a) < corpus.id_rank(b);
    });
    size_t decile = std::max<size_t>(1, by_g.size() / 10);
    std::vector<uint32_t> targets;
    size_t step = std::max<size_t>(1, decile / 40);
    for (size_t i = 0; i < decile && targets.size() < 40; i += step) targets.push_back(by_g[i]);

    MatchedCohortOptions opt;
    std::vector<AnalysisTable> tables = matched_cohort_compare(corpus, metrics, targets, opt);
    const AnalysisTable* per_target = nullptr;
    const AnalysisTable* medians = nullptr;
    for (const AnalysisTable& t : tables) {
        if (t.name == "matched_per_target") per_target = &t;
        if (t.name == "matched_group_medians") medians = &t;
    }

    Outcome o;
    o.name = "matched-cohorts";
    if (!per_target || !medians) {
        o.detail = "expected tables missing";
        return o;
    }

    // Independent re-derivation of every target's matched set.
    std::set<uint32_t> target_set(targets.begin(), targets.end());
    size_t id_col = column_index(*per_target, "target_id");
    size_t nm_col = column_index(*per_target, "n_matched");
    size_t med_col = column_index(*per_target, "median_g_matched");
    long long constraint_mismatches = 0;
    std::string first;
    for (const auto& row : per_target->rows) {
        uint32_t tgt = *corpus.find(row[id_col]);
        const PaperRecord& rec = corpus.paper(tgt);
        double c = static_cast<double>(metrics.rows[tgt].C);
        double lo = c * (1.0 - opt.band) - 1e-9, hi = c * (1.0 + opt.band) + 1e-9;
        std::vector<long long> g_values;
        for (uint32_t j = 0; j < corpus.size(); ++j) {
            if (!corpus.eligible_focal(j) || target_set.count(j)) continue;
            const PaperRecord& cand = corpus.paper(j);
            if (cand.year != rec.year || cand.field != rec.field) continue;
            double cc = static_cast<double>(metrics.rows[j].C);
            if (cc < lo || cc > hi) continue;
            g_values.push_back(metrics.rows[j].G);
        }
        bool row_ok = std::stoll(row[nm_col]) == static_cast<long long>(g_values.size());
        if (row_ok && !g_values.empty()) {
            std::sort(g_values.begin(), g_values.end());
            size_t m = g_values.size();
            double med = m % 2 ? static_cast<double>(g_values[m / 2])
                               : (static_cast<double>(g_values[m / 2 - 1]) +
                                  static_cast<double>(g_values[m / 2])) /
                                     2.0;
            row_ok = std::abs(std::stod(row[med_col]) - med) <= 1e-9;
        }
        if (!row_ok) {
            if (constraint_mismatches == 0) first = "target " + row[id_col];
            ++constraint_mismatches;
        }
    }

    double target_median = -1.0, control_median = -1.0;
    long long n_targets = 0, n_controls = 0;
    size_t grp_col = column_index(*medians, "group");
    size_t mg_col = column_index(*medians, "median_g");
    size_t n_col = column_index(*medians, "n");
    for (const auto& row : medians->rows) {
        if (row[grp_col] == "targets") {
            target_median = std::stod(row[mg_col]);
            n_targets = std::stoll(row[n_col]);
        } else if (row[grp_col] == "matched_controls") {
            control_median = std::stod(row[mg_col]);
            n_controls = std::stoll(row[n_col]);
        }
    }
    bool ratio_ok = target_median > 0.0 && n_controls > 0 &&
                    (control_median <= 0.0 || target_median / control_median > 2.0);

    o.pass = ratio_ok && constraint_mismatches == 0 && n_targets >= 20;
    std::string ratio_str = control_median > 0.0 ? fmt(target_median / control_median, 2) : "inf";
    o.detail = "targets=" + std::to_string(n_targets) + " controls=" +
               std::to_string(n_controls) + " median_g_targets=" + fmt(target_median, 1) +
               " median_g_controls=" + fmt(control_median, 1) + " ratio=" + ratio_str +
               " (need >2) constraint_mismatches=" + std::to_string(constraint_mismatches) +
               " (need 0, re-derived year/field/band/exclusion per target)";
    if (!first.empty()) o.detail += " first=[" + first + "]";
    return o;
}

// ---------------------------------------------------------------------------
// Criterion 7: determinism and scale.

Outcome check_determinism_and_scale(PipelineRun& big) {
    std::vector<std::string> problems;
    auto expect = [&](bool ok, const std::string& what) {
        if (!ok) problems.push_back(what);
    };
    std::ostringstream detail;

    {  // Worker independence, byte for byte, on a corpus with plants.
        GeneratorConfig cfg;
        cfg.n_papers = 5000;
        cfg.year_from = 1960;
        cfg.year_to = 2000;
        cfg.attachment = 1.0;
        cfg.self_cites.rate = 0.2;
        cfg.isolated.papers = 2;
        cfg.seed = 313;
        SynthResult synth = generate(cfg);
        Corpus corpus = Corpus::build(synth.rows);

        auto render = [&](int workers) {
            GiantOptions go;
            go.workers = workers;
            MetricsOptions mo;
            mo.workers = workers;
            std::vector<GiantResult> g =
                assign_all_giants(corpus, corpus.year_min(), corpus.year_max(), go);
            MetricsResult m = compute_metrics(corpus, g, mo);
            std::ostringstream gs, ms, as;
            write_giant_table(gs, g, corpus);
            write_metrics_tsv(m, corpus, ms);
            write_table_tsv(conditional_g_given_c(corpus, m), as);
            return std::tuple<std::string, std::string, std::string>(gs.str(), ms.str(),
                                                                     as.str());
        };
        auto w1 = render(1);
        auto w4 = render(4);
        expect(w1 == w4, "outputs differ between 1 and 4 workers");
        detail << "workers_1_vs_4=" << (w1 == w4 ? "byte-identical" : "DIFFER");

        InvariantTally tally;
        // Also cover this corpus with the invariant suite (criterion 4 ran
        // before it existed).
        MetricsResult m1 = compute_metrics(
            corpus, assign_all_giants(corpus, corpus.year_min(), corpus.year_max(), {}), {});
        check_invariants_on(corpus, m1, "worker-corpus", tally);
        expect(tally.violations == 0, "invariant violations on the worker corpus");
    }

    {  // Incremental snapshot advance vs per-year full rebuilds (same years).
        const Corpus& corpus = big.corpus;
        CocitSnapshot snap = CocitSnapshot::build(corpus, 1985);
        auto t0 = Clock::now();
        for (int y = 1986; y <= 1995; ++y) snap.advance(y);
        double adv = seconds_since(t0);
        t0 = Clock::now();
        uint64_t guard = 0;
        for (int y = 1986; y <= 1995; ++y) guard += CocitSnapshot::build(corpus, y).pair_count();
        double rebuild = seconds_since(t0);
        expect(guard > 0 && snap.pair_count() > 0, "empty snapshots in the timing run");
        double speedup = adv > 0.0 ? rebuild / adv : 1e9;
        expect(speedup >= 5.0, "advance speedup below 5x");
        detail << " advance_10y=" << fmt(adv, 2) << "s rebuilds_10y=" << fmt(rebuild, 2)
               << "s speedup=" << fmt(speedup, 1) << "x (need >=5)";
    }

    {  // Full pipeline on 100k papers, single worker, under 10 minutes.
        GeneratorConfig cfg;
        cfg.n_papers = 100000;
        cfg.year_from = 1960;
        cfg.year_to = 2000;
        cfg.attachment = 1.0;
        cfg.seed = 4242;
        SynthResult synth = generate(cfg);

        auto t0 = Clock::now();
        Corpus corpus = Corpus::build(synth.rows);
        std::vector<GiantResult> g =
            assign_all_giants(corpus, corpus.year_min(), corpus.year_max(), {});
        MetricsResult m = compute_metrics(corpus, g, {});
        size_t tables = 0;
        tables += prevalence_by_year(corpus, g).rows.size();
        tables += prevalence_by_field(corpus, g).rows.size();
        tables += giant_vs_most_cited(corpus, g).rows.size();
        tables += conditional_g_given_c(corpus, m).rows.size();
        tables += g_histogram_by_c(corpus, m).rows.size();
        tables += team_size_curves(corpus, m).rows.size();
        tables += team_size_curves_by_field(corpus, m).rows.size();
        for (const AnalysisTable& t : disruption_profile(corpus, m, g)) tables += t.rows.size();
        double secs = seconds_since(t0);
        expect(secs < 600.0, "100k pipeline exceeded 10 minutes");
        expect(tables > 0, "100k pipeline produced no analysis rows");

        InvariantTally tally;
        check_invariants_on(corpus, m, "100k-corpus", tally);
        expect(tally.violations == 0, "invariant violations on the 100k corpus");
        detail << " pipeline_100k=" << fmt(secs, 1) << "s (budget 600) analysis_rows=" << tables
               << " invariants_100k=" << (tally.violations == 0 ? "ok" : "VIOLATED");
    }

    Outcome o;
    o.name = "determinism-and-scale";
    o.pass = problems.empty();
    o.detail = detail.str();
    if (!problems.empty()) o.detail += " first=[" + problems[0] + "]";
    return o;
}

// Runs one criterion, folding any escaped exception into a [FAIL] line, and
// prints the verdict immediately.
Outcome run_criterion(const std::string& name, const std::function<Outcome()>& fn) {
    Outcome o;
    try {
        o = fn();
    } catch (const std::exception& e) {
        o.name = name;
        o.pass = false;
        o.detail = std::string("unexpected exception: ") + e.what();
    }
    std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << o.name << ": " << o.detail << "\n"
              << std::flush;
    return o;
}

}  // namespace

int main() {
    std::vector<Outcome> results;

    // Criterion 1 (its corpora are reused by the invariant suite).
    std::vector<PipelineRun> small_runs;
    results.push_back(run_criterion("oracle-equivalence",
                                    [&] { return check_oracle_equivalence(small_runs); }));

    // Criterion 2.
    results.push_back(run_criterion("percolation-semantics", check_percolation_semantics));

    // Criterion 3.
    results.push_back(run_criterion("hand-checked-instances", check_hand_instances));

    // Shared large corpora.
    // Uniform attachment spreads the giant role over hundreds of papers, so
    // the citation-bin curve and the matched-cohort pools are well populated;
    // strong preferential attachment concentrates every pick on a handful of
    // mega-hubs, which leaves nothing to bin or match against at this scale.
    PipelineRun big;
    {
        GeneratorConfig cfg;
        cfg.n_papers = 30000;
        cfg.year_from = 1960;
        cfg.year_to = 2000;
        cfg.attachment = 0.0;
        cfg.seed = 909;
        big = PipelineRun::from_rows(generate(cfg).rows);
    }
    PipelineRun planted;  // giant-rich blocks on a uniform-attachment background
    SynthResult planted_synth;
    {
        GeneratorConfig cfg;
        cfg.n_papers = 3000;
        cfg.year_from = 1960;
        cfg.year_to = 2000;
        cfg.attachment = 0.0;
        cfg.mean_refs = 10.0;
        cfg.giant_rich.blocks = 15;
        cfg.seed = 616;
        planted_synth = generate(cfg);
        std::vector<RawPaper> rows = planted_synth.rows;
        planted = PipelineRun::from_rows(std::move(rows));
    }

    // Criterion 4: invariants on every corpus built so far.
    results.push_back(run_criterion("metric-invariants", [&] {
        InvariantTally tally;
        for (size_t i = 0; i < small_runs.size(); ++i)
            check_invariants_on(small_runs[i].corpus, small_runs[i].metrics,
                                "small-" + std::to_string(i), tally);
        check_invariants_on(big.corpus, big.metrics, "organic-30k", tally);
        check_invariants_on(planted.corpus, planted.metrics, "planted", tally);
        Outcome o;
        o.name = "metric-invariants";
        o.pass = tally.violations == 0;
        o.detail = "corpora=" + std::to_string(small_runs.size() + 2) + " rows=" +
                   std::to_string(tally.rows) + " normalization_cohorts=" +
                   std::to_string(tally.cohorts) + " violations=" +
                   std::to_string(tally.violations) +
                   " (G<=C, G_noself<=G, G_t<=G, C_t<=C, D in [-1,1], DP in [0,100], "
                   "cohort mean of normalized C == 1 +- 1e-12)";
        if (tally.violations > 0) o.detail += " first=[" + tally.first + "]";
        return o;
    }));

    // Criterion 5: monotone P(G>0|C) plus planted boost recovery.
    results.push_back(run_criterion("qualitative-reproduction", [&] {
        std::string mono_detail, boost_detail;
        bool mono = monotone_p_given_c(big.corpus, big.metrics, mono_detail);
        bool boost = planted_boost_recovered(planted, planted_synth, boost_detail);
        Outcome o;
        o.name = "qualitative-reproduction";
        o.pass = mono && boost;
        o.detail = std::string("P(G>0|C) ") + (mono ? "non-decreasing" : "NOT monotone") + " " +
                   mono_detail + "; boost " + (boost ? "recovered" : "NOT recovered") + " " +
                   boost_detail;
        return o;
    }));

    // Criterion 6.
    results.push_back(run_criterion("matched-cohorts", [&] { return check_matched_cohorts(big); }));

    // Criterion 7 (the 100k corpus lives only inside).
    small_runs.clear();
    small_runs.shrink_to_fit();
    results.push_back(
        run_criterion("determinism-and-scale", [&] { return check_determinism_and_scale(big); }));

    int failures = 0;
    for (const Outcome& o : results)
        if (!o.pass) ++failures;
    std::cout << "acceptance: " << (results.size() - static_cast<size_t>(failures)) << "/"
              << results.size() << " criteria passed\n";
    return failures == 0 ? 0 : 1;
}
