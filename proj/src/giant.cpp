#include "giants/giant.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "giants/common.hpp"

namespace giants {

const char* tie_depth_name(TieDepth d) {
    switch (d) {
        case TieDepth::degree: return "degree";
        case TieDepth::weight: return "weight";
        case TieDepth::year: return "year";
        case TieDepth::id: return "id";
    }
    return "?";
}

namespace {

// Sorted view of the focal reference set for O(log N) membership tests that
// also recover the reference's local index.
struct RefSetIndex {
    std::vector<uint32_t> sorted;
    std::vector<uint32_t> local;

    void build(const std::vector<uint32_t>& refs) {
        size_t n = refs.size();
        std::vector<uint32_t> order(n);
        std::iota(order.begin(), order.end(), 0u);
        std::sort(order.begin(), order.end(),
                  [&refs](uint32_t x, uint32_t y) { return refs[x] < refs[y]; });
        sorted.resize(n);
        local.resize(n);
        for (size_t k = 0; k < n; ++k) {
            sorted[k] = refs[order[k]];
            local[k] = order[k];
        }
    }

    int find(uint32_t node) const {
        auto it = std::lower_bound(sorted.begin(), sorted.end(), node);
        if (it == sorted.end() || *it != node) return -1;
        return static_cast<int>(local[static_cast<size_t>(it - sorted.begin())]);
    }
};

// Streaming view over one reference's effective neighbor list. In exclusion
// mode the entries that are themselves references of the focal paper are
// lifted out of the global stream and re-merged with weight reduced by one
// (the focal's own co-citation contribution); reduced entries that reach
// zero vanish. Subtracting the same amount from every lifted entry preserves
// their relative order, so a two-way merge suffices.
struct RefCursor {
    const NeighborEntry* g = nullptr;
    size_t gn = 0, gi = 0;
    std::vector<NeighborEntry> adj;
    size_t ai = 0;
    bool exclude = false;
    uint32_t effective_len = 0;

    const NeighborEntry* next(const CocitSnapshot& snap, const RefSetIndex& refset) {
        if (!exclude) {
            if (gi >= gn) return nullptr;
            return &g[gi++];
        }
        while (gi < gn && refset.find(g[gi].node) >= 0) ++gi;
        const NeighborEntry* gc = gi < gn ? &g[gi] : nullptr;
        const NeighborEntry* ac = ai < adj.size() ? &adj[ai] : nullptr;
        if (!gc && !ac) return nullptr;
        if (gc && (!ac || snap.rank_before(gc->weight, gc->node, ac->weight, ac->node))) {
            ++gi;
            return gc;
        }
        ++ai;
        return ac;
    }
};

enum class StopMode { fixed_budget, percolate };

// One voting round per budget increment: at budget n every reference casts
// its n-th vote (if its list still has one), and votes landing on another
// reference of the focal set are kept as undirected edges.
VoteSubnetwork run_votes(const CocitSnapshot& snap, const std::vector<uint32_t>& refs,
                         bool exclude_pairs, StopMode mode, uint32_t fixed_n, bool isolated_in_n) {
    VoteSubnetwork sub;
    sub.refs = refs;
    size_t N = refs.size();
    sub.degree.assign(N, 0);
    if (N == 0) {
        sub.n = mode == StopMode::fixed_budget ? fixed_n : 1;
        return sub;
    }

    RefSetIndex refset;
    refset.build(refs);

    std::vector<RefCursor> cursors(N);
    uint32_t max_len = 0;
    size_t n_active = 0;
    for (size_t i = 0; i < N; ++i) {
        RefCursor& c = cursors[i];
        const std::vector<NeighborEntry>& lst = snap.ranked_neighbors_cached(refs[i]);
        c.g = lst.data();
        c.gn = lst.size();
        c.exclude = exclude_pairs;
        size_t eff = c.gn;
        if (exclude_pairs) {
            size_t present = 0;
            for (size_t j = 0; j < N; ++j) {
                if (j == i) continue;
                uint32_t w = snap.weight(refs[i], refs[j]);
                if (w == 0) continue;
                ++present;
                if (w >= 2) c.adj.push_back({refs[j], w - 1});
            }
            std::sort(c.adj.begin(), c.adj.end(),
                      [&snap](const NeighborEntry& x, const NeighborEntry& y) {
                          return snap.rank_before(x.weight, x.node, y.weight, y.node);
                      });
            eff = c.gn - present + c.adj.size();
        }
        c.effective_len = static_cast<uint32_t>(eff);
        if (eff > 0) ++n_active;
        max_len = std::max(max_len, c.effective_len);
    }

    size_t n_eff = isolated_in_n ? N : n_active;

    std::unordered_set<uint64_t> seen;
    uint64_t edge_count = 0;
    uint32_t n = 0;
    while (true) {
        ++n;
        for (size_t i = 0; i < N; ++i) {
            const NeighborEntry* e = cursors[i].next(snap, refset);
            if (e == nullptr) continue;
            int j = refset.find(e->node);
            if (j < 0) continue;
            uint32_t a = static_cast<uint32_t>(std::min<size_t>(i, static_cast<size_t>(j)));
            uint32_t b = static_cast<uint32_t>(std::max<size_t>(i, static_cast<size_t>(j)));
            if (seen.insert((static_cast<uint64_t>(a) << 32) | b).second) {
                sub.edges.push_back({a, b, e->weight});
                ++sub.degree[a];
                ++sub.degree[b];
                ++edge_count;
            }
        }
        if (mode == StopMode::percolate) {
            if (n == 1 && edge_count == 0) {
                sub.n = 1;
                sub.percolation_reached = false;
                break;
            }
            if (2 * edge_count > n_eff) {
                sub.n = n;
                sub.percolation_reached = true;
                break;
            }
            if (n >= max_len) {
                sub.n = n;
                sub.percolation_reached = false;
                break;
            }
        } else if (n >= fixed_n || n >= max_len) {
            sub.n = fixed_n;
            sub.percolation_reached = 2 * edge_count > n_eff;
            break;
        }
    }
    std::sort(sub.edges.begin(), sub.edges.end(), [](const VoteEdge& x, const VoteEdge& y) {
        return x.a != y.a ? x.a < y.a : x.b < y.b;
    });
    return sub;
}

struct Selection {
    bool has = false;
    uint32_t local = 0;
    uint32_t k_max = 0;
    TieDepth depth = TieDepth::degree;
    std::vector<uint64_t> weights;
};

Selection select_giant(const VoteSubnetwork& sub, const Corpus& corpus) {
    Selection sel;
    size_t N = sub.refs.size();
    sel.weights.assign(N, 0);
    for (const VoteEdge& e : sub.edges) {
        sel.weights[e.a] += e.weight;
        sel.weights[e.b] += e.weight;
    }
    if (sub.edges.empty()) return sel;
    sel.has = true;
    sel.k_max = *std::max_element(sub.degree.begin(), sub.degree.end());

    std::vector<uint32_t> cand;
    for (uint32_t i = 0; i < N; ++i)
        if (sub.degree[i] == sel.k_max) cand.push_back(i);
    if (cand.size() == 1) {
        sel.local = cand[0];
        sel.depth = TieDepth::degree;
        return sel;
    }

    uint64_t w_max = 0;
    for (uint32_t c : cand) w_max = std::max(w_max, sel.weights[c]);
    cand.erase(std::remove_if(cand.begin(), cand.end(),
                              [&](uint32_t c) { return sel.weights[c] != w_max; }),
               cand.end());
    if (cand.size() == 1) {
        sel.local = cand[0];
        sel.depth = TieDepth::weight;
        return sel;
    }

    int y_min = corpus.paper(sub.refs[cand[0]]).year;
    for (uint32_t c : cand) y_min = std::min(y_min, corpus.paper(sub.refs[c]).year);
    cand.erase(std::remove_if(cand.begin(), cand.end(),
                              [&](uint32_t c) { return corpus.paper(sub.refs[c]).year != y_min; }),
               cand.end());
    if (cand.size() == 1) {
        sel.local = cand[0];
        sel.depth = TieDepth::year;
        return sel;
    }

    uint32_t best = cand[0];
    for (uint32_t c : cand)
        if (corpus.id_rank(sub.refs[c]) < corpus.id_rank(sub.refs[best])) best = c;
    sel.local = best;
    sel.depth = TieDepth::id;
    return sel;
}

GiantResult make_result(const VoteSubnetwork& sub, const Corpus& corpus, uint32_t focal) {
    GiantResult r;
    r.focal = focal;
    r.refs = sub.refs;
    r.degrees = sub.degree;
    r.stop_n = sub.n;
    r.percolation_reached = sub.percolation_reached;
    Selection sel = select_giant(sub, corpus);
    r.weights = std::move(sel.weights);
    r.has_giant = sel.has;
    if (sel.has) {
        r.giant = sub.refs[sel.local];
        r.k_max = sel.k_max;
        r.tie_depth = sel.depth;
    }
    return r;
}

GiantResult compute_giant_core(const CocitSnapshot& snap, uint32_t focal, const GiantOptions& opt) {
    const Corpus& corpus = snap.corpus();
    const std::vector<uint32_t>& refs = corpus.paper(focal).refs;
    GiantResult r;
    if (refs.empty()) {
        r.focal = focal;
        r.flags |= kFlagFewResolvedRefs;
        return r;
    }
    // The focal paper's own reference clique is part of the network only once
    // the snapshot includes its publication year, and only if it actually
    // contributed pairs (two or more resolved references).
    bool exclude = opt.exclude_own_refs && corpus.paper(focal).year <= snap.as_of_year() && refs.size() >= 2;
    VoteSubnetwork sub = run_votes(snap, refs, exclude, StopMode::percolate, 0, opt.isolated_in_n);
    r = make_result(sub, corpus, focal);
    if (refs.size() < 5) r.flags |= kFlagFewResolvedRefs;
    return r;
}

}  // namespace

VoteSubnetwork build_vote_subnetwork(CocitSnapshot& snap, const std::vector<uint32_t>& refs, uint32_t n) {
    if (n == 0) throw std::invalid_argument("vote budget must be >= 1");
    snap.materialize(refs, 1);
    return run_votes(snap, refs, false, StopMode::fixed_budget, n, true);
}

VoteSubnetwork find_percolation_n(CocitSnapshot& snap, const std::vector<uint32_t>& refs) {
    snap.materialize(refs, 1);
    return run_votes(snap, refs, false, StopMode::percolate, 0, true);
}

GiantResult identify_giant(const VoteSubnetwork& sub, const Corpus& corpus) {
    return make_result(sub, corpus, kNoPaper);
}

std::vector<ImportanceScore> importance_scores(const GiantResult& res, Damping damping) {
    if (!res.has_giant || res.k_max == 0)
        throw std::runtime_error("importance scores are undefined for a paper without a giant");
    size_t N = res.refs.size();
    std::unordered_map<uint32_t, uint64_t> class_max;
    for (size_t i = 0; i < N; ++i) {
        uint64_t& m = class_max[res.degrees[i]];
        m = std::max(m, res.weights[i]);
    }
    std::vector<ImportanceScore> out(N);
    for (size_t i = 0; i < N; ++i) {
        ImportanceScore& sc = out[i];
        sc.ref = res.refs[i];
        sc.k = res.degrees[i];
        sc.k_max = res.k_max;
        sc.w = res.weights[i];
        sc.w_class_max = sc.k > 0 ? class_max[sc.k] : 0;
        sc.f_value = damping == Damping::delta ? (res.refs[i] == res.giant ? 1.0 : 0.0) : 1.0;
        if (sc.k > 0)
            sc.s = (static_cast<double>(sc.k) / res.k_max) *
                   (static_cast<double>(sc.w) / static_cast<double>(sc.w_class_max)) * sc.f_value;
    }
    return out;
}

GiantResult compute_giant(CocitSnapshot& snap, uint32_t focal, const GiantOptions& opt) {
    snap.materialize(snap.corpus().paper(focal).refs, 1);
    return compute_giant_core(snap, focal, opt);
}

std::vector<GiantResult> assign_all_giants(const Corpus& corpus, int year_from, int year_to,
                                           const GiantOptions& opt) {
    std::vector<GiantResult> results;
    if (corpus.size() == 0) return results;
    int y0 = std::max(year_from, corpus.year_min());
    int y1 = std::min(year_to, corpus.year_max());
    if (y0 > y1) return results;

    CocitSnapshot snap = CocitSnapshot::build(corpus, y0);
    std::vector<uint32_t> need;
    for (int y = y0; y <= y1; ++y) {
        if (y > snap.as_of_year()) snap.advance(y);
        std::vector<uint32_t> focals = eligible_focal_papers(corpus, y, y);
        if (focals.empty()) continue;
        need.clear();
        for (uint32_t f : focals) {
            const std::vector<uint32_t>& refs = corpus.paper(f).refs;
            need.insert(need.end(), refs.begin(), refs.end());
        }
        snap.materialize(need, opt.workers);
        size_t base = results.size();
        results.resize(base + focals.size());
        const CocitSnapshot& view = snap;
        parallel_for(focals.size(), opt.workers, [&](size_t lo, size_t hi, int) {
            for (size_t k = lo; k < hi; ++k)
                results[base + k] = compute_giant_core(view, focals[k], opt);
        });
    }
    return results;
}

void write_giant_table(std::ostream& out, const std::vector<GiantResult>& results, const Corpus& corpus) {
    out << "focal_id\tgiant_id\tstop_n\tpercolation_reached\tk_max\ttie_break_depth\tflags\n";
    for (const GiantResult& r : results) {
        out << corpus.id_of(r.focal) << '\t' << (r.has_giant ? corpus.id_of(r.giant) : "NONE") << '\t'
            << r.stop_n << '\t' << (r.percolation_reached ? "true" : "false") << '\t' << r.k_max << '\t'
            << (r.has_giant ? tie_depth_name(r.tie_depth) : kNA) << '\t' << static_cast<int>(r.flags)
            << '\n';
    }
}

namespace {
constexpr char kGiantsMagic[8] = {'G', 'G', 'I', 'A', 'N', 'T', '0', '1'};
constexpr uint32_t kGiantsVersion = 1;
}  // namespace

void save_giants_cache(const std::string& path, const std::vector<GiantResult>& results,
                       const Corpus& corpus) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write giants cache: " + path);
    BinWriter w(out);
    w.raw(kGiantsMagic, sizeof(kGiantsMagic));
    w.u32(kGiantsVersion);
    w.u64(corpus.content_hash());
    w.u64(results.size());
    for (const GiantResult& r : results) {
        w.u32(r.focal);
        w.u8(r.has_giant ? 1 : 0);
        w.u32(r.giant);
        w.u32(r.stop_n);
        w.u8(r.percolation_reached ? 1 : 0);
        w.u32(r.k_max);
        w.u8(static_cast<uint8_t>(r.tie_depth));
        w.u8(r.flags);
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<GiantResult> load_giants_cache(const std::string& path, const Corpus& corpus) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open giants cache: " + path);
    BinReader r(in);
    char magic[8];
    r.raw(magic, sizeof(magic));
    if (std::memcmp(magic, kGiantsMagic, sizeof(magic)) != 0)
        throw std::runtime_error("not a giants cache: " + path);
    if (r.u32() != kGiantsVersion) throw std::runtime_error("giants cache version mismatch: " + path);
    if (r.u64() != corpus.content_hash())
        throw std::runtime_error("giants cache was built from a different corpus: " + path);
    uint64_t count = r.u64();
    std::vector<GiantResult> out(count);
    for (uint64_t i = 0; i < count; ++i) {
        GiantResult& g = out[i];
        g.focal = r.u32();
        g.has_giant = r.u8() != 0;
        g.giant = r.u32();
        g.stop_n = r.u32();
        g.percolation_reached = r.u8() != 0;
        g.k_max = r.u32();
        g.tie_depth = static_cast<TieDepth>(r.u8());
        g.flags = r.u8();
        if (g.focal >= corpus.size() || (g.has_giant && g.giant >= corpus.size()))
            throw std::runtime_error("corrupt giants cache: " + path);
    }
    return out;
}

}  // namespace giants
