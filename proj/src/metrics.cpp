#include "giants/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <unordered_map>

#include <json.hpp>

namespace giants {

bool shares_author(const Corpus& corpus, uint32_t a, uint32_t b) {
    const auto& as = corpus.paper(a).authors;
    const auto& bs = corpus.paper(b).authors;
    for (const Author& x : as)
        for (const Author& y : bs)
            if (x == y) return true;
    return false;
}

namespace {

// Accumulator for one (field, year) normalization cohort.
struct CohortAgg {
    double c_sum = 0.0;
    long long c_cnt = 0;
    double g_sum = 0.0;       // over all members
    long long g_cnt = 0;
    double g_pos_sum = 0.0;   // over members with G > 0
    long long g_pos_cnt = 0;
};

uint64_t cohort_key(uint16_t field, int year) {
    return (static_cast<uint64_t>(field) << 32) | static_cast<uint32_t>(year);
}

}  // namespace

MetricsResult compute_metrics(const Corpus& corpus, const std::vector<GiantResult>& giants,
                              const MetricsOptions& opt) {
    const size_t n = corpus.size();
    MetricsResult out;
    out.window_t = opt.window_t;
    out.g_norm_over_giants = opt.g_norm_over_giants;
    out.rows.resize(n);

    for (size_t i = 0; i < n; ++i) {
        MetricRow& r = out.rows[i];
        r.paper = static_cast<uint32_t>(i);
        r.M = corpus.paper(static_cast<uint32_t>(i)).team_size();
        const auto& cs = corpus.citers(static_cast<uint32_t>(i));
        r.C = static_cast<long long>(cs.size());
        int horizon = corpus.paper(static_cast<uint32_t>(i)).year + opt.window_t;
        for (uint32_t q : cs)
            if (corpus.paper(q).year <= horizon) ++r.C_t;
    }

    // Giant index: every focal paper with a giant contributes one count to
    // that giant, plus windowed and self-citation-filtered variants.
    for (const GiantResult& gr : giants) {
        if (!gr.has_giant) continue;
        MetricRow& r = out.rows[gr.giant];
        bool self = shares_author(corpus, gr.focal, gr.giant);
        if (!self) ++r.G_noself;
        if (self && opt.exclude_self_giants) continue;
        ++r.G;
        if (corpus.paper(gr.focal).year <= corpus.paper(gr.giant).year + opt.window_t) ++r.G_t;
    }

    // Disruption. Reference lists are causal (citer year >= cited year), so
    // every citer of p is "subsequent" and n_i + n_j == C. The remaining work
    // is classifying the citers of p's references, deduplicated per paper
    // with epoch stamps so the scratch arrays are never cleared.
    parallel_for(n, opt.workers, [&](size_t lo, size_t hi, int) {
        std::vector<uint32_t> cite_mark(n, 0), seen_mark(n, 0);
        for (size_t p = lo; p < hi; ++p) {
            MetricRow& r = out.rows[p];
            const PaperRecord& rec = corpus.paper(static_cast<uint32_t>(p));
            uint32_t epoch = static_cast<uint32_t>(p) + 1;
            for (uint32_t q : corpus.citers(static_cast<uint32_t>(p))) cite_mark[q] = epoch;
            long long nj = 0, nk = 0;
            for (uint32_t ref : rec.refs) {
                for (uint32_t q : corpus.citers(ref)) {
                    if (q == p) continue;
                    if (corpus.paper(q).year < rec.year) continue;
                    if (seen_mark[q] == epoch) continue;
                    seen_mark[q] = epoch;
                    if (cite_mark[q] == epoch)
                        ++nj;
                    else
                        ++nk;
                }
            }
            r.n_j = nj;
            r.n_k = nk;
            r.n_i = r.C - nj;
            long long den = r.n_i + r.n_j + r.n_k;
            if (den > 0) {
                r.d_defined = true;
                r.D = static_cast<double>(r.n_i - r.n_j) / static_cast<double>(den);
            }
        }
    });

    // Disruption percentile: mean rank of D within the same publication year,
    // scaled to [0, 100]; papers without a defined D are left unmarked.
    {
        std::map<int, std::vector<uint32_t>> by_year;
        for (size_t p = 0; p < n; ++p)
            if (out.rows[p].d_defined)
                by_year[corpus.paper(static_cast<uint32_t>(p)).year].push_back(
                    static_cast<uint32_t>(p));
        for (auto& [year, cohort] : by_year) {
            (void)year;
            if (cohort.size() == 1) {
                MetricRow& r = out.rows[cohort[0]];
                r.dp_defined = true;
                r.dp_degenerate = true;
                r.DP = 50.0;
                continue;
            }
            std::sort(cohort.begin(), cohort.end(), [&](uint32_t a, uint32_t b) {
                if (out.rows[a].D != out.rows[b].D) return out.rows[a].D < out.rows[b].D;
                return a < b;
            });
            size_t m = cohort.size();
            size_t i = 0;
            while (i < m) {
                size_t j = i + 1;
                while (j < m && out.rows[cohort[j]].D == out.rows[cohort[i]].D) ++j;
                double mean_rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
                double dp = 100.0 * (mean_rank - 1.0) / (static_cast<double>(m) - 1.0);
                for (size_t k = i; k < j; ++k) {
                    out.rows[cohort[k]].dp_defined = true;
                    out.rows[cohort[k]].DP = dp;
                }
                i = j;
            }
        }
    }

    // Field-year normalization over eligible papers with a known field.
    {
        std::unordered_map<uint64_t, CohortAgg> agg;
        for (size_t p = 0; p < n; ++p) {
            uint32_t pi = static_cast<uint32_t>(p);
            if (!corpus.eligible_focal(pi) || !corpus.field_known(pi)) continue;
            const PaperRecord& rec = corpus.paper(pi);
            CohortAgg& a = agg[cohort_key(rec.field, rec.year)];
            a.c_sum += static_cast<double>(out.rows[p].C);
            a.c_cnt += 1;
            a.g_sum += static_cast<double>(out.rows[p].G);
            a.g_cnt += 1;
            if (out.rows[p].G > 0) {
                a.g_pos_sum += static_cast<double>(out.rows[p].G);
                a.g_pos_cnt += 1;
            }
        }
        for (size_t p = 0; p < n; ++p) {
            uint32_t pi = static_cast<uint32_t>(p);
            if (!corpus.eligible_focal(pi) || !corpus.field_known(pi)) continue;
            const PaperRecord& rec = corpus.paper(pi);
            const CohortAgg& a = agg.at(cohort_key(rec.field, rec.year));
            MetricRow& r = out.rows[p];
            double c_mean = a.c_cnt ? a.c_sum / static_cast<double>(a.c_cnt) : 0.0;
            if (c_mean > 0.0) {
                r.c_norm_defined = true;
                r.C_norm = static_cast<double>(r.C) / c_mean;
            }
            if (opt.g_norm_over_giants) {
                if (r.G > 0 && a.g_pos_cnt > 0) {
                    double g_mean = a.g_pos_sum / static_cast<double>(a.g_pos_cnt);
                    if (g_mean > 0.0) {
                        r.g_norm_defined = true;
                        r.G_norm = static_cast<double>(r.G) / g_mean;
                    }
                }
            } else {
                double g_mean = a.g_cnt ? a.g_sum / static_cast<double>(a.g_cnt) : 0.0;
                if (g_mean > 0.0) {
                    r.g_norm_defined = true;
                    r.G_norm = static_cast<double>(r.G) / g_mean;
                }
            }
        }
    }

    return out;
}

namespace {

void append_cell(std::string& line, bool defined, double v) {
    line += '\t';
    line += defined ? fmt_double(v) : kNA;
}

}  // namespace

void write_metrics_tsv(const MetricsResult& m, const Corpus& corpus, std::ostream& os,
                       const std::vector<std::pair<std::string, std::string>>& meta) {
    for (const auto& [k, v] : meta) os << "# " << k << "=" << v << "\n";
    os << "paper_id\tyear\tfield\ttype\tM\tC\tC_t\tG\tG_t\tG_noself\t"
          "n_i\tn_j\tn_k\tD\tDP\tC_norm\tG_norm\tflags\n";
    std::string line;
    for (const MetricRow& r : m.rows) {
        const PaperRecord& rec = corpus.paper(r.paper);
        line.clear();
        line += rec.id;
        line += '\t';
        line += fmt_int(rec.year);
        line += '\t';
        line += corpus.field_label(rec.field);
        line += '\t';
        line += pub_type_name(rec.type);
        line += '\t';
        line += fmt_int(r.M);
        line += '\t';
        line += fmt_int(r.C);
        line += '\t';
        line += fmt_int(r.C_t);
        line += '\t';
        line += fmt_int(r.G);
        line += '\t';
        line += fmt_int(r.G_t);
        line += '\t';
        line += fmt_int(r.G_noself);
        line += '\t';
        line += fmt_int(r.n_i);
        line += '\t';
        line += fmt_int(r.n_j);
        line += '\t';
        line += fmt_int(r.n_k);
        append_cell(line, r.d_defined, r.D);
        append_cell(line, r.dp_defined, r.DP);
        append_cell(line, r.c_norm_defined, r.C_norm);
        append_cell(line, r.g_norm_defined, r.G_norm);
        line += '\t';
        line += fmt_int(r.dp_degenerate ? 1 : 0);
        line += '\n';
        os << line;
    }
}

void write_metrics_jsonl(const MetricsResult& m, const Corpus& corpus, std::ostream& os,
                         const std::vector<std::pair<std::string, std::string>>& meta) {
    if (!meta.empty()) {
        nlohmann::ordered_json mj;
        for (const auto& [k, v] : meta) mj[k] = v;
        nlohmann::ordered_json head;
        head["meta"] = mj;
        os << head.dump() << "\n";
    }
    for (const MetricRow& r : m.rows) {
        const PaperRecord& rec = corpus.paper(r.paper);
        nlohmann::ordered_json j;
        j["paper_id"] = rec.id;
        j["year"] = rec.year;
        j["field"] = corpus.field_label(rec.field);
        j["type"] = pub_type_name(rec.type);
        j["M"] = r.M;
        j["C"] = r.C;
        j["C_t"] = r.C_t;
        j["G"] = r.G;
        j["G_t"] = r.G_t;
        j["G_noself"] = r.G_noself;
        j["n_i"] = r.n_i;
        j["n_j"] = r.n_j;
        j["n_k"] = r.n_k;
        j["D"] = r.d_defined ? nlohmann::ordered_json(r.D) : nlohmann::ordered_json(nullptr);
        j["DP"] = r.dp_defined ? nlohmann::ordered_json(r.DP) : nlohmann::ordered_json(nullptr);
        j["C_norm"] =
            r.c_norm_defined ? nlohmann::ordered_json(r.C_norm) : nlohmann::ordered_json(nullptr);
        j["G_norm"] =
            r.g_norm_defined ? nlohmann::ordered_json(r.G_norm) : nlohmann::ordered_json(nullptr);
        j["dp_degenerate"] = r.dp_degenerate;
        os << j.dump() << "\n";
    }
}

}  // namespace giants
