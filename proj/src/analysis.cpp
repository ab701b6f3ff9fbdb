#include "giants/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <set>
#include <stdexcept>
#include <unordered_set>

#include <json.hpp>

namespace giants {

namespace {

std::string frac_cell(long long num, long long den) {
    if (den == 0) return kNA;
    return fmt_double(static_cast<double>(num) / static_cast<double>(den));
}

double vec_mean(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

// Sample standard error of the mean; NA for n < 2.
std::string stderr_cell(const std::vector<double>& v) {
    if (v.size() < 2) return kNA;
    double m = vec_mean(v);
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    double sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
    return fmt_double(sd / std::sqrt(static_cast<double>(v.size())));
}

double median_of(std::vector<long long> v) {
    std::sort(v.begin(), v.end());
    size_t n = v.size();
    if (n % 2 == 1) return static_cast<double>(v[n / 2]);
    return (static_cast<double>(v[n / 2 - 1]) + static_cast<double>(v[n / 2])) / 2.0;
}

// Logarithmic bins, 10 per decade: bin k covers [10^(k/10), 10^((k+1)/10)).
// Values below 1 (i.e. zero counts) use the sentinel bin -1.
int log_bin_index(long long v) {
    if (v < 1) return -1;
    int k = static_cast<int>(std::floor(std::log10(static_cast<double>(v)) * 10.0 + 1e-9));
    while (std::pow(10.0, (k + 1) / 10.0) <= static_cast<double>(v)) ++k;
    while (k > 0 && std::pow(10.0, k / 10.0) > static_cast<double>(v)) --k;
    return k;
}

std::string bin_lo_cell(int k) { return k < 0 ? "0" : fmt_double(std::pow(10.0, k / 10.0)); }
std::string bin_hi_cell(int k) { return k < 0 ? "0" : fmt_double(std::pow(10.0, (k + 1) / 10.0)); }

// Citer publication years per paper, sorted, for at-a-given-year counts.
std::vector<std::vector<int32_t>> sorted_citer_years(const Corpus& corpus) {
    std::vector<std::vector<int32_t>> years(corpus.size());
    for (uint32_t i = 0; i < corpus.size(); ++i) {
        const auto& cs = corpus.citers(i);
        years[i].reserve(cs.size());
        for (uint32_t q : cs) years[i].push_back(corpus.paper(q).year);
        std::sort(years[i].begin(), years[i].end());
    }
    return years;
}

long long count_at_or_before(const std::vector<int32_t>& sorted_years, int year) {
    return static_cast<long long>(
        std::upper_bound(sorted_years.begin(), sorted_years.end(), year) - sorted_years.begin());
}

}  // namespace

void write_table_tsv(const AnalysisTable& t, std::ostream& os) {
    for (size_t c = 0; c < t.columns.size(); ++c) {
        if (c) os << '\t';
        os << t.columns[c];
    }
    os << '\n';
    for (const auto& row : t.rows) {
        for (size_t c = 0; c < row.size(); ++c) {
            if (c) os << '\t';
            os << row[c];
        }
        os << '\n';
    }
}

void write_table_meta_json(const AnalysisTable& t, std::ostream& os) {
    nlohmann::ordered_json j;
    j["name"] = t.name;
    j["columns"] = t.columns;
    j["row_count"] = t.rows.size();
    nlohmann::ordered_json mj = nlohmann::ordered_json::object();
    for (const auto& [k, v] : t.meta) mj[k] = v;
    j["meta"] = mj;
    os << j.dump(2) << "\n";
}

AnalysisTable prevalence_by_year(const Corpus& corpus, const std::vector<GiantResult>& giants) {
    std::map<int, std::pair<long long, long long>> by_year;  // year -> (focal, with giant)
    for (const GiantResult& g : giants) {
        auto& [n, w] = by_year[corpus.paper(g.focal).year];
        ++n;
        if (g.has_giant) ++w;
    }
    AnalysisTable t;
    t.name = "prevalence_by_year";
    t.columns = {"year", "n_focal", "n_with_giant", "fraction"};
    long long tot = 0, tot_w = 0;
    for (const auto& [year, nw] : by_year) {
        t.rows.push_back(
            {fmt_int(year), fmt_int(nw.first), fmt_int(nw.second), frac_cell(nw.second, nw.first)});
        tot += nw.first;
        tot_w += nw.second;
    }
    t.add_meta("n_focal_total", fmt_int(tot));
    t.add_meta("fraction_overall", tot ? frac_cell(tot_w, tot) : kNA);
    t.add_meta("reference_fraction_first_year", "0.916");
    t.add_meta("reference_fraction_last_year", "0.958");
    return t;
}

AnalysisTable prevalence_by_field(const Corpus& corpus, const std::vector<GiantResult>& giants) {
    std::map<std::pair<std::string, int>, std::pair<long long, long long>> agg;
    for (const GiantResult& g : giants) {
        const PaperRecord& rec = corpus.paper(g.focal);
        auto& [n, w] = agg[{corpus.field_label(rec.field), rec.year}];
        ++n;
        if (g.has_giant) ++w;
    }
    AnalysisTable t;
    t.name = "prevalence_by_field";
    t.columns = {"field", "year", "n_focal", "n_with_giant", "fraction"};
    for (const auto& [key, nw] : agg)
        t.rows.push_back({key.first, fmt_int(key.second), fmt_int(nw.first), fmt_int(nw.second),
                          frac_cell(nw.second, nw.first)});
    return t;
}

AnalysisTable giant_vs_most_cited(const Corpus& corpus, const std::vector<GiantResult>& giants) {
    std::vector<std::vector<int32_t>> years = sorted_citer_years(corpus);
    std::map<int, std::pair<long long, long long>> by_year;  // year -> (with giant, not most cited)
    for (const GiantResult& g : giants) {
        if (!g.has_giant) continue;
        const PaperRecord& rec = corpus.paper(g.focal);
        long long best = -1, giant_count = -1;
        for (uint32_t ref : rec.refs) {
            long long c = count_at_or_before(years[ref], rec.year);
            best = std::max(best, c);
            if (ref == g.giant) giant_count = c;
        }
        auto& [n, miss] = by_year[rec.year];
        ++n;
        // Argmax ties count as "giant is most cited": only a strictly lower
        // at-publication count makes the giant a non-top reference.
        if (giant_count < best) ++miss;
    }
    AnalysisTable t;
    t.name = "giant_vs_most_cited";
    t.columns = {"year", "n_with_giant", "n_giant_not_most_cited", "fraction"};
    long long tot = 0, tot_miss = 0;
    for (const auto& [year, nm] : by_year) {
        t.rows.push_back(
            {fmt_int(year), fmt_int(nm.first), fmt_int(nm.second), frac_cell(nm.second, nm.first)});
        tot += nm.first;
        tot_miss += nm.second;
    }
    t.add_meta("fraction_overall", tot ? frac_cell(tot_miss, tot) : kNA);
    t.add_meta("reference_fraction_overall", "0.725");
    t.add_meta("reference_most_cited_share_first_year", "0.44");
    t.add_meta("reference_most_cited_share_last_year", "0.26");
    return t;
}

AnalysisTable conditional_g_given_c(const Corpus& corpus, const MetricsResult& metrics) {
    (void)corpus;
    struct Agg {
        long long n = 0;
        long long g_pos = 0;
        double g_sum = 0.0;
    };
    std::map<int, Agg> bins;
    for (const MetricRow& r : metrics.rows) {
        Agg& a = bins[log_bin_index(r.C)];
        ++a.n;
        if (r.G > 0) ++a.g_pos;
        a.g_sum += static_cast<double>(r.G);
    }
    AnalysisTable t;
    t.name = "conditional_g_given_c";
    t.columns = {"c_lo", "c_hi", "n", "p_g_positive", "mean_g"};
    for (const auto& [k, a] : bins)
        t.rows.push_back({bin_lo_cell(k), bin_hi_cell(k), fmt_int(a.n), frac_cell(a.g_pos, a.n),
                          fmt_double(a.g_sum / static_cast<double>(a.n))});
    return t;
}

AnalysisTable g_histogram_by_c(const Corpus& corpus, const MetricsResult& metrics) {
    (void)corpus;
    std::map<std::pair<int, int>, long long> joint;
    std::map<int, long long> c_tot;
    for (const MetricRow& r : metrics.rows) {
        int cb = log_bin_index(r.C);
        int gb = log_bin_index(r.G);
        ++joint[{cb, gb}];
        ++c_tot[cb];
    }
    AnalysisTable t;
    t.name = "g_histogram_by_c";
    t.columns = {"c_lo", "c_hi", "g_lo", "g_hi", "n", "p_within_c_bin"};
    for (const auto& [key, n] : joint)
        t.rows.push_back({bin_lo_cell(key.first), bin_hi_cell(key.first), bin_lo_cell(key.second),
                          bin_hi_cell(key.second), fmt_int(n), frac_cell(n, c_tot[key.first])});
    return t;
}

AnalysisTable cohort_future_impact(const Corpus& corpus, const MetricsResult& metrics,
                                   const CohortSpec& spec) {
    std::vector<uint32_t> cohort;
    for (uint32_t i = 0; i < corpus.size(); ++i) {
        const PaperRecord& rec = corpus.paper(i);
        if (rec.year < spec.year_from || rec.year > spec.year_to) continue;
        if (!spec.venue.empty() && corpus.venue_label(rec.venue) != spec.venue) continue;
        if (!spec.field.empty() && corpus.field_label(rec.field) != spec.field) continue;
        long long ct = metrics.rows[i].C_t;
        if (ct < spec.c_lo || ct > spec.c_hi) continue;
        cohort.push_back(i);
    }
    if (cohort.size() < 30)
        throw std::runtime_error("future-impact cohort too small for a percentile split: " +
                                 std::to_string(cohort.size()) + " papers (need 30)");

    std::vector<uint32_t> nonzero;
    std::vector<uint32_t> zero;
    for (uint32_t i : cohort)
        (metrics.rows[i].G_t > 0 ? nonzero : zero).push_back(i);
    if (nonzero.empty())
        throw std::runtime_error(
            "future-impact cohort has no papers with a nonzero windowed giant index");
    std::sort(nonzero.begin(), nonzero.end(), [&](uint32_t a, uint32_t b) {
        if (metrics.rows[a].G_t != metrics.rows[b].G_t)
            return metrics.rows[a].G_t > metrics.rows[b].G_t;
        return corpus.id_rank(a) < corpus.id_rank(b);
    });
    size_t k = std::max<size_t>(
        1, static_cast<size_t>(static_cast<double>(nonzero.size()) * spec.top_fraction));
    std::vector<uint32_t> high(nonzero.begin(), nonzero.begin() + static_cast<long>(k));
    std::vector<uint32_t> low(nonzero.end() - static_cast<long>(k), nonzero.end());

    // Cumulative citations per year offset for each group member.
    auto trajectories = [&](const std::vector<uint32_t>& group) {
        std::vector<std::vector<double>> per_offset(static_cast<size_t>(spec.horizon) + 1);
        for (uint32_t p : group) {
            int y0 = corpus.paper(p).year;
            std::vector<long long> cum(static_cast<size_t>(spec.horizon) + 1, 0);
            for (uint32_t q : corpus.citers(p)) {
                int off = corpus.paper(q).year - y0;
                if (off <= spec.horizon) ++cum[static_cast<size_t>(std::max(off, 0))];
            }
            for (int o = 1; o <= spec.horizon; ++o)
                cum[static_cast<size_t>(o)] += cum[static_cast<size_t>(o) - 1];
            for (int o = 0; o <= spec.horizon; ++o)
                per_offset[static_cast<size_t>(o)].push_back(
                    static_cast<double>(cum[static_cast<size_t>(o)]));
        }
        return per_offset;
    };
    auto high_tr = trajectories(high);
    auto low_tr = trajectories(low);
    auto zero_tr = trajectories(zero);

    AnalysisTable t;
    t.name = "cohort_future_impact";
    t.columns = {"year_offset", "high_mean", "high_stderr", "high_n",
                 "low_mean",    "low_stderr", "low_n",      "zero_mean",
                 "zero_stderr", "zero_n"};
    for (int o = 0; o <= spec.horizon; ++o) {
        size_t oi = static_cast<size_t>(o);
        std::vector<std::string> row;
        row.push_back(fmt_int(o));
        row.push_back(high_tr[oi].empty() ? kNA : fmt_double(vec_mean(high_tr[oi])));
        row.push_back(stderr_cell(high_tr[oi]));
        row.push_back(fmt_int(static_cast<long long>(high_tr[oi].size())));
        row.push_back(low_tr[oi].empty() ? kNA : fmt_double(vec_mean(low_tr[oi])));
        row.push_back(stderr_cell(low_tr[oi]));
        row.push_back(fmt_int(static_cast<long long>(low_tr[oi].size())));
        row.push_back(zero_tr[oi].empty() ? kNA : fmt_double(vec_mean(zero_tr[oi])));
        row.push_back(stderr_cell(zero_tr[oi]));
        row.push_back(fmt_int(static_cast<long long>(zero_tr[oi].size())));
        t.rows.push_back(std::move(row));
    }
    double high_g = 0.0, low_g = 0.0;
    for (uint32_t p : high) high_g += static_cast<double>(metrics.rows[p].G_t);
    for (uint32_t p : low) low_g += static_cast<double>(metrics.rows[p].G_t);
    t.add_meta("cohort_size", fmt_int(static_cast<long long>(cohort.size())));
    t.add_meta("nonzero_count", fmt_int(static_cast<long long>(nonzero.size())));
    t.add_meta("group_size", fmt_int(static_cast<long long>(k)));
    t.add_meta("high_mean_windowed_g", fmt_double(high_g / static_cast<double>(k)));
    t.add_meta("low_mean_windowed_g", fmt_double(low_g / static_cast<double>(k)));
    t.add_meta("window_t", fmt_int(metrics.window_t));
    t.add_meta("horizon", fmt_int(spec.horizon));
    if (!spec.venue.empty()) t.add_meta("venue", spec.venue);
    if (!spec.field.empty()) t.add_meta("field", spec.field);
    t.add_meta("c_band", fmt_int(spec.c_lo) + ".." + fmt_int(spec.c_hi));
    return t;
}

namespace {

struct TeamAgg {
    long long n_papers = 0;
    long long n_c = 0;
    double c_sum = 0.0;
    long long n_g = 0;
    double g_sum = 0.0;
};

std::vector<std::string> team_row(uint32_t m, const TeamAgg& a) {
    return {fmt_int(m),
            fmt_int(a.n_papers),
            fmt_int(a.n_c),
            a.n_c ? fmt_double(a.c_sum / static_cast<double>(a.n_c)) : kNA,
            fmt_int(a.n_g),
            a.n_g ? fmt_double(a.g_sum / static_cast<double>(a.n_g)) : kNA};
}

void team_accumulate(TeamAgg& a, const MetricRow& r) {
    ++a.n_papers;
    if (r.c_norm_defined) {
        ++a.n_c;
        a.c_sum += r.C_norm;
    }
    if (r.g_norm_defined && r.G > 0) {
        ++a.n_g;
        a.g_sum += r.G_norm;
    }
}

}  // namespace

AnalysisTable team_size_curves(const Corpus& corpus, const MetricsResult& metrics) {
    (void)corpus;
    std::map<uint32_t, TeamAgg> by_m;
    long long excluded = 0;
    for (const MetricRow& r : metrics.rows) {
        if (r.M == 0) {
            ++excluded;
            continue;
        }
        team_accumulate(by_m[r.M], r);
    }
    AnalysisTable t;
    t.name = "team_size_curves";
    t.columns = {"M", "n_papers", "n_c_norm", "mean_c_norm", "n_g_norm", "mean_g_norm"};
    for (const auto& [m, a] : by_m) t.rows.push_back(team_row(m, a));
    t.add_meta("excluded_no_team", fmt_int(excluded));
    t.add_meta("included_papers",
               fmt_int(static_cast<long long>(metrics.rows.size()) - excluded));
    return t;
}

AnalysisTable team_size_curves_by_field(const Corpus& corpus, const MetricsResult& metrics) {
    std::map<std::pair<std::string, uint32_t>, TeamAgg> agg;
    long long excluded = 0;
    for (const MetricRow& r : metrics.rows) {
        if (r.M == 0 || !corpus.field_known(r.paper)) {
            ++excluded;
            continue;
        }
        team_accumulate(agg[{corpus.field_label(corpus.paper(r.paper).field), r.M}], r);
    }
    AnalysisTable t;
    t.name = "team_size_curves_by_field";
    t.columns = {"field", "M", "n_papers", "n_c_norm", "mean_c_norm", "n_g_norm", "mean_g_norm"};
    for (const auto& [key, a] : agg) {
        std::vector<std::string> row = team_row(key.second, a);
        row.insert(row.begin(), key.first);
        t.rows.push_back(std::move(row));
    }
    t.add_meta("excluded_no_team_or_unknown_field", fmt_int(excluded));
    return t;
}

std::vector<AnalysisTable> disruption_profile(const Corpus& corpus, const MetricsResult& metrics,
                                              const std::vector<GiantResult>& giants) {
    (void)corpus;
    auto dp_bin = [](double dp) { return std::min(19, static_cast<int>(dp / 5.0)); };

    AnalysisTable g_norm;
    g_norm.name = "disruption_g_norm";
    g_norm.columns = {"dp_lo", "dp_hi", "n", "mean_g_norm"};
    {
        struct Agg {
            long long n = 0;
            double sum = 0.0;
        };
        std::map<int, Agg> bins;
        for (const MetricRow& r : metrics.rows) {
            if (!r.dp_defined || !r.g_norm_defined) continue;
            Agg& a = bins[dp_bin(r.DP)];
            ++a.n;
            a.sum += r.G_norm;
        }
        for (const auto& [b, a] : bins)
            g_norm.rows.push_back({fmt_int(b * 5), fmt_int(b * 5 + 5), fmt_int(a.n),
                                   fmt_double(a.sum / static_cast<double>(a.n))});
        g_norm.add_meta("reference_shape", "elevated_below_20_and_above_80");
    }

    AnalysisTable split;
    split.name = "disruption_by_giant_status";
    split.columns = {"dp_lo",      "dp_hi",           "n_with_giant", "frac_of_with_group",
                     "n_no_giant", "frac_of_no_group"};
    AnalysisTable team;
    team.name = "no_giant_by_team_size";
    team.columns = {"M", "n_focal", "n_no_giant", "fraction"};
    {
        std::map<int, std::pair<long long, long long>> bins;  // bin -> (with, without)
        long long tot_with = 0, tot_without = 0;
        std::map<uint32_t, std::pair<long long, long long>> by_m;  // M -> (focal, no giant)
        long long excluded_team = 0;
        for (const GiantResult& g : giants) {
            const MetricRow& r = metrics.rows[g.focal];
            if (r.dp_defined) {
                auto& [w, wo] = bins[dp_bin(r.DP)];
                if (g.has_giant) {
                    ++w;
                    ++tot_with;
                } else {
                    ++wo;
                    ++tot_without;
                }
            }
            if (r.M == 0) {
                ++excluded_team;
            } else {
                auto& [n, ng] = by_m[r.M];
                ++n;
                if (!g.has_giant) ++ng;
            }
        }
        for (const auto& [b, wwo] : bins)
            split.rows.push_back({fmt_int(b * 5), fmt_int(b * 5 + 5), fmt_int(wwo.first),
                                  frac_cell(wwo.first, tot_with), fmt_int(wwo.second),
                                  frac_cell(wwo.second, tot_without)});
        split.add_meta("n_with_giant", fmt_int(tot_with));
        split.add_meta("n_no_giant", fmt_int(tot_without));
        for (const auto& [m, nng] : by_m)
            team.rows.push_back({fmt_int(m), fmt_int(nng.first), fmt_int(nng.second),
                                 frac_cell(nng.second, nng.first)});
        team.add_meta("excluded_no_team", fmt_int(excluded_team));
    }

    return {std::move(g_norm), std::move(split), std::move(team)};
}

std::vector<AnalysisTable> matched_cohort_compare(const Corpus& corpus,
                                                  const MetricsResult& metrics,
                                                  const std::vector<uint32_t>& targets,
                                                  const MatchedCohortOptions& opt) {
    std::unordered_set<uint32_t> target_set(targets.begin(), targets.end());

    // Candidate controls grouped by (year, field); focal-eligible papers only.
    std::map<std::pair<int, uint16_t>, std::vector<uint32_t>> pool;
    for (uint32_t i = 0; i < corpus.size(); ++i) {
        if (!corpus.eligible_focal(i)) continue;
        if (target_set.count(i)) continue;
        const PaperRecord& rec = corpus.paper(i);
        pool[{rec.year, rec.field}].push_back(i);
    }

    AnalysisTable per_target;
    per_target.name = "matched_per_target";
    per_target.columns = {"target_id", "year",    "field",          "C",       "G",
                          "n_matched", "median_g_matched", "relation"};
    std::set<uint32_t> pooled_controls;
    std::vector<long long> target_g;
    long long higher = 0, lower = 0, tie = 0, unmatched = 0;

    for (uint32_t tgt : targets) {
        const PaperRecord& rec = corpus.paper(tgt);
        const MetricRow& row = metrics.rows[tgt];
        double lo = static_cast<double>(row.C) * (1.0 - opt.band) - 1e-9;
        double hi = static_cast<double>(row.C) * (1.0 + opt.band) + 1e-9;
        std::vector<long long> match_g;
        auto it = pool.find({rec.year, rec.field});
        if (it != pool.end()) {
            for (uint32_t c : it->second) {
                double cc = static_cast<double>(metrics.rows[c].C);
                if (cc < lo || cc > hi) continue;
                match_g.push_back(metrics.rows[c].G);
                pooled_controls.insert(c);
            }
        }
        target_g.push_back(row.G);
        std::string median_cell = kNA, relation;
        if (match_g.empty()) {
            relation = "unmatched";
            ++unmatched;
        } else {
            double med = median_of(match_g);
            median_cell = fmt_double(med);
            double g = static_cast<double>(row.G);
            if (g > med) {
                relation = "higher";
                ++higher;
            } else if (g < med) {
                relation = "lower";
                ++lower;
            } else {
                relation = "tie";
                ++tie;
            }
        }
        per_target.rows.push_back({rec.id, fmt_int(rec.year), corpus.field_label(rec.field),
                                   fmt_int(row.C), fmt_int(row.G),
                                   fmt_int(static_cast<long long>(match_g.size())), median_cell,
                                   relation});
    }
    long long compared = higher + lower + tie;
    per_target.add_meta("n_targets", fmt_int(static_cast<long long>(targets.size())));
    per_target.add_meta("n_unmatched", fmt_int(unmatched));
    per_target.add_meta("fraction_higher", compared ? frac_cell(higher, compared) : kNA);
    per_target.add_meta("reference_fraction_higher", "0.67");

    // Giant-index distribution ratio between targets and pooled controls.
    AnalysisTable ratio;
    ratio.name = "matched_g_ratio";
    ratio.columns = {"g_lo", "g_hi", "n_target", "p_target", "n_control", "p_control", "ratio"};
    {
        std::map<int, std::pair<long long, long long>> bins;  // bin -> (targets, controls)
        for (long long g : target_g) ++bins[log_bin_index(g)].first;
        std::vector<long long> control_g;
        for (uint32_t c : pooled_controls) {
            ++bins[log_bin_index(metrics.rows[c].G)].second;
            control_g.push_back(metrics.rows[c].G);
        }
        long long nt = static_cast<long long>(target_g.size());
        long long nc = static_cast<long long>(pooled_controls.size());
        for (const auto& [b, counts] : bins) {
            std::string rcell = kNA;
            if (counts.first >= opt.min_bin_count && counts.second >= opt.min_bin_count &&
                nt > 0 && nc > 0) {
                double pt = static_cast<double>(counts.first) / static_cast<double>(nt);
                double pc = static_cast<double>(counts.second) / static_cast<double>(nc);
                rcell = fmt_double(pt / pc);
            }
            ratio.rows.push_back({bin_lo_cell(b), bin_hi_cell(b), fmt_int(counts.first),
                                  frac_cell(counts.first, nt), fmt_int(counts.second),
                                  frac_cell(counts.second, nc), rcell});
        }
        ratio.add_meta("min_bin_count", fmt_int(opt.min_bin_count));
        ratio.add_meta("band", fmt_double(opt.band));

        AnalysisTable medians;
        medians.name = "matched_group_medians";
        medians.columns = {"group", "n", "median_g", "mean_g"};
        auto group_row = [&](const std::string& label, const std::vector<long long>& g) {
            double sum = 0.0;
            for (long long x : g) sum += static_cast<double>(x);
            medians.rows.push_back(
                {label, fmt_int(static_cast<long long>(g.size())),
                 g.empty() ? kNA : fmt_double(median_of(g)),
                 g.empty() ? kNA : fmt_double(sum / static_cast<double>(g.size()))});
        };
        group_row("targets", target_g);
        group_row("matched_controls", control_g);
        medians.add_meta("reference_target_medians", "58;51;59.5");
        medians.add_meta("reference_control_medians", "20;22;24");

        return {std::move(ratio), std::move(per_target), std::move(medians)};
    }
}

}  // namespace giants
