#include "giants/oracle.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <stdexcept>

namespace giants {

namespace {

std::string lower(const std::string& s) {
    std::string out = s;
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

struct OPaper {
    std::string id;
    int year = 0;
    std::vector<size_t> refs;  // resolved, deduplicated, causal
    bool eligible = false;
};

bool cites(const OPaper& q, size_t target) {
    return std::find(q.refs.begin(), q.refs.end(), target) != q.refs.end();
}

}  // namespace

OracleResult oracle_run(const std::vector<RawPaper>& rows, const OracleOptions& opt) {
    if (rows.size() > opt.max_papers)
        throw std::runtime_error("oracle: corpus of " + std::to_string(rows.size()) +
                                 " papers exceeds the cap of " + std::to_string(opt.max_papers));

    std::map<std::string, size_t> index;
    for (size_t i = 0; i < rows.size(); ++i)
        if (!index.emplace(rows[i].id, i).second)
            throw std::runtime_error("oracle: duplicate paper id " + rows[i].id);

    // Resolve references by the written rules: the eligibility threshold
    // counts distinct listed ids (resolvable or not); the graphs keep only
    // distinct resolved, non-self, causal references.
    std::vector<OPaper> ps(rows.size());
    for (size_t i = 0; i < rows.size(); ++i) {
        ps[i].id = rows[i].id;
        ps[i].year = rows[i].year;
        std::set<std::string> listed;
        for (const std::string& rid : rows[i].refs) {
            if (!listed.insert(rid).second) continue;
            auto it = index.find(rid);
            if (it == index.end()) continue;
            if (it->second == i) continue;
            if (rows[it->second].year > rows[i].year) continue;
            ps[i].refs.push_back(it->second);
        }
        std::string t = lower(rows[i].type);
        ps[i].eligible = (t.empty() || t == "article" || t == "letter") && listed.size() >= 5;
    }

    std::vector<std::vector<size_t>> citers(ps.size());
    for (size_t q = 0; q < ps.size(); ++q)
        for (size_t r : ps[q].refs) citers[r].push_back(q);

    // Focal papers in (year, id) order.
    std::vector<size_t> focal;
    for (size_t i = 0; i < ps.size(); ++i)
        if (ps[i].eligible && ps[i].year >= opt.year_from && ps[i].year <= opt.year_to)
            focal.push_back(i);
    std::sort(focal.begin(), focal.end(), [&](size_t a, size_t b) {
        if (ps[a].year != ps[b].year) return ps[a].year < ps[b].year;
        return ps[a].id < ps[b].id;
    });

    OracleResult out;
    std::map<std::string, long long> g_count;

    for (size_t f : focal) {
        const std::vector<size_t>& refs = ps[f].refs;
        size_t R = refs.size();
        int y = ps[f].year;

        // Per-reference co-citation neighborhoods at the focal year.
        std::vector<std::map<size_t, long long>> w(R);
        for (size_t a = 0; a < R; ++a) {
            for (size_t q : citers[refs[a]]) {
                if (ps[q].year > y) continue;
                if (opt.exclude_own_refs && q == f) continue;
                for (size_t x : ps[q].refs)
                    if (x != refs[a]) w[a][x] += 1;
            }
        }

        // Ranked neighbor lists: weight desc, year asc, id asc.
        std::vector<std::vector<std::pair<size_t, long long>>> ranked(R);
        for (size_t a = 0; a < R; ++a) {
            ranked[a].assign(w[a].begin(), w[a].end());
            std::sort(ranked[a].begin(), ranked[a].end(),
                      [&](const std::pair<size_t, long long>& x, const std::pair<size_t, long long>& y2) {
                          if (x.second != y2.second) return x.second > y2.second;
                          if (ps[x.first].year != ps[y2.first].year)
                              return ps[x.first].year < ps[y2.first].year;
                          return ps[x.first].id < ps[y2.first].id;
                      });
        }

        size_t max_len = 0;
        for (size_t a = 0; a < R; ++a) max_len = std::max(max_len, ranked[a].size());

        // Grow the vote budget, recomputing the retained edge set from
        // scratch at every step.
        std::set<std::pair<size_t, size_t>> edges;
        OracleRow row;
        row.focal = ps[f].id;
        for (uint32_t nn = 1;; ++nn) {
            edges.clear();
            for (size_t a = 0; a < R; ++a) {
                size_t take = std::min<size_t>(nn, ranked[a].size());
                for (size_t k = 0; k < take; ++k) {
                    size_t x = ranked[a][k].first;
                    auto it = std::find(refs.begin(), refs.end(), x);
                    if (it == refs.end()) continue;
                    size_t b = static_cast<size_t>(it - refs.begin());
                    edges.insert({std::min(a, b), std::max(a, b)});
                }
            }
            size_t E = edges.size();
            if (nn == 1 && E == 0) {
                row.stop_n = 1;
                row.percolation_reached = false;
                break;
            }
            if (2 * E > R) {
                row.stop_n = nn;
                row.percolation_reached = true;
                break;
            }
            if (nn >= max_len) {
                row.stop_n = nn;
                row.percolation_reached = false;
                break;
            }
        }

        if (!edges.empty()) {
            std::vector<long long> deg(R, 0), wsum(R, 0);
            for (const auto& e : edges) {
                long long pw = w[e.first].at(refs[e.second]);
                deg[e.first] += 1;
                deg[e.second] += 1;
                wsum[e.first] += pw;
                wsum[e.second] += pw;
            }
            size_t best = 0;
            for (size_t a = 1; a < R; ++a) {
                if (deg[a] != deg[best]) {
                    if (deg[a] > deg[best]) best = a;
                    continue;
                }
                if (wsum[a] != wsum[best]) {
                    if (wsum[a] > wsum[best]) best = a;
                    continue;
                }
                if (ps[refs[a]].year != ps[refs[best]].year) {
                    if (ps[refs[a]].year < ps[refs[best]].year) best = a;
                    continue;
                }
                if (ps[refs[a]].id < ps[refs[best]].id) best = a;
            }
            row.has_giant = true;
            row.giant = ps[refs[best]].id;
            g_count[row.giant] += 1;
        }
        out.rows.push_back(std::move(row));
    }

    // Metrics by direct definition.
    for (size_t p = 0; p < ps.size(); ++p) {
        OracleMetrics m;
        m.C = static_cast<long long>(citers[p].size());
        auto it = g_count.find(ps[p].id);
        if (it != g_count.end()) m.G = it->second;
        for (size_t q = 0; q < ps.size(); ++q) {
            if (q == p || ps[q].year < ps[p].year) continue;
            bool hits_paper = cites(ps[q], p);
            bool hits_ref = false;
            for (size_t r : ps[p].refs) {
                if (cites(ps[q], r)) {
                    hits_ref = true;
                    break;
                }
            }
            if (hits_paper && hits_ref)
                ++m.n_j;
            else if (hits_paper)
                ++m.n_i;
            else if (hits_ref)
                ++m.n_k;
        }
        m.d_defined = (m.n_i + m.n_j + m.n_k) > 0;
        out.metrics.emplace(ps[p].id, m);
    }

    return out;
}

}  // namespace giants
