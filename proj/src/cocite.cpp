#include "giants/cocite.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include "giants/common.hpp"

namespace giants {

void CocitSnapshot::init(const Corpus& corpus) {
    corpus_ = &corpus;
    nbrs_.assign(corpus.size(), {});
    ranked_.assign(corpus.size(), {});
    ranked_valid_.assign(corpus.size(), 0);
}

void CocitSnapshot::add_pair(uint32_t a, uint32_t b) {
    auto [it, inserted] = pair_w_.try_emplace(pair_key(a, b), 1u);
    if (inserted) {
        nbrs_[a].push_back(b);
        nbrs_[b].push_back(a);
    } else {
        ++it->second;
    }
    ++total_weight_;
    ranked_valid_[a] = 0;
    ranked_valid_[b] = 0;
}

void CocitSnapshot::ingest_years(int from_year, int to_year) {
    from_year = std::max(from_year, corpus_->year_min());
    to_year = std::min(to_year, corpus_->year_max());
    for (int y = from_year; y <= to_year; ++y) {
        for (uint32_t citer : corpus_->papers_of_year(y)) {
            const std::vector<uint32_t>& refs = corpus_->paper(citer).refs;
            if (refs.size() < 2) continue;
            for (size_t i = 0; i + 1 < refs.size(); ++i)
                for (size_t j = i + 1; j < refs.size(); ++j) add_pair(refs[i], refs[j]);
        }
    }
}

CocitSnapshot CocitSnapshot::build(const Corpus& corpus, int year) {
    if (corpus.size() == 0) throw std::runtime_error("co-citation snapshot: empty corpus");
    if (year < corpus.year_min() || year > corpus.year_max())
        throw std::runtime_error("co-citation snapshot year " + std::to_string(year) +
                                 " outside corpus range [" + std::to_string(corpus.year_min()) +
                                 ", " + std::to_string(corpus.year_max()) + "]");
    CocitSnapshot s;
    s.init(corpus);
    s.as_of_year_ = year;
    // Citing papers with at least two references register all reference pairs;
    // a generous reserve keeps rehashing off the hot path.
    uint64_t pair_upper = 0;
    for (uint32_t i = 0; i < corpus.size(); ++i) {
        size_t r = corpus.paper(i).refs.size();
        if (corpus.paper(i).year <= year && r >= 2) pair_upper += r * (r - 1) / 2;
    }
    s.pair_w_.reserve(static_cast<size_t>(pair_upper / 2 + 16));
    s.ingest_years(corpus.year_min(), year);
    return s;
}

void CocitSnapshot::advance(int to_year) {
    if (corpus_ == nullptr) throw std::runtime_error("advance on an uninitialized snapshot");
    if (to_year < as_of_year_)
        throw std::runtime_error("cannot advance snapshot backwards: " + std::to_string(as_of_year_) +
                                 " -> " + std::to_string(to_year));
    if (to_year == as_of_year_) return;
    ingest_years(as_of_year_ + 1, to_year);
    as_of_year_ = to_year;
}

CocitSnapshot CocitSnapshot::from_pairs(const Corpus& corpus, int year,
                                        const std::vector<std::tuple<uint32_t, uint32_t, uint32_t>>& pairs) {
    CocitSnapshot s;
    s.init(corpus);
    s.as_of_year_ = year;
    for (const auto& [a, b, w] : pairs) {
        if (a == b) throw std::runtime_error("from_pairs: self-loop");
        if (w == 0) throw std::runtime_error("from_pairs: zero weight");
        auto [it, inserted] = s.pair_w_.try_emplace(pair_key(a, b), w);
        (void)it;
        if (!inserted) throw std::runtime_error("from_pairs: duplicate pair");
        s.nbrs_[a].push_back(b);
        s.nbrs_[b].push_back(a);
        s.total_weight_ += w;
    }
    return s;
}

uint32_t CocitSnapshot::weight(uint32_t a, uint32_t b) const {
    if (a == b) return 0;
    auto it = pair_w_.find(pair_key(a, b));
    return it == pair_w_.end() ? 0 : it->second;
}

void CocitSnapshot::build_ranked(uint32_t node) {
    const std::vector<uint32_t>& ids = nbrs_[node];
    std::vector<NeighborEntry>& out = ranked_[node];
    out.clear();
    out.reserve(ids.size());
    for (uint32_t nb : ids) out.push_back({nb, pair_w_.find(pair_key(node, nb))->second});
    std::sort(out.begin(), out.end(), [this](const NeighborEntry& x, const NeighborEntry& y) {
        return rank_before(x.weight, x.node, y.weight, y.node);
    });
    ranked_valid_[node] = 1;
}

const std::vector<NeighborEntry>& CocitSnapshot::ranked_neighbors(uint32_t node) {
    if (!ranked_valid_[node]) build_ranked(node);
    return ranked_[node];
}

const std::vector<NeighborEntry>& CocitSnapshot::ranked_neighbors_cached(uint32_t node) const {
    if (!ranked_valid_[node])
        throw std::logic_error("ranked neighbor list not materialized for node " + std::to_string(node));
    return ranked_[node];
}

void CocitSnapshot::materialize(const std::vector<uint32_t>& nodes, int workers) {
    std::vector<uint32_t> todo(nodes);
    std::sort(todo.begin(), todo.end());
    todo.erase(std::unique(todo.begin(), todo.end()), todo.end());
    todo.erase(std::remove_if(todo.begin(), todo.end(),
                              [this](uint32_t n) { return ranked_valid_[n] != 0; }),
               todo.end());
    parallel_for(todo.size(), workers,
                 [&](size_t lo, size_t hi, int) { for (size_t i = lo; i < hi; ++i) build_ranked(todo[i]); });
}

std::vector<NeighborEntry> CocitSnapshot::top_n_neighbors(uint32_t node, uint32_t n) {
    const std::vector<NeighborEntry>& full = ranked_neighbors(node);
    size_t take = std::min<size_t>(n, full.size());
    return std::vector<NeighborEntry>(full.begin(), full.begin() + static_cast<ptrdiff_t>(take));
}

std::vector<std::tuple<uint32_t, uint32_t, uint32_t>> CocitSnapshot::sorted_pairs() const {
    std::vector<std::tuple<uint32_t, uint32_t, uint32_t>> out;
    out.reserve(pair_w_.size());
    for (const auto& [key, w] : pair_w_)
        out.emplace_back(static_cast<uint32_t>(key >> 32), static_cast<uint32_t>(key), w);
    std::sort(out.begin(), out.end());
    return out;
}

namespace {
constexpr char kCocitMagic[8] = {'G', 'C', 'O', 'C', 'I', 'T', '0', '1'};
constexpr uint32_t kCocitVersion = 1;
}  // namespace

void CocitSnapshot::save_cache(const std::string& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write snapshot cache: " + path);
    BinWriter w(out);
    w.raw(kCocitMagic, sizeof(kCocitMagic));
    w.u32(kCocitVersion);
    w.u64(corpus_->content_hash());
    w.i32(as_of_year_);
    w.u32(static_cast<uint32_t>(nbrs_.size()));
    auto pairs = sorted_pairs();
    w.u64(pairs.size());
    for (const auto& [a, b, wt] : pairs) {
        w.u32(a);
        w.u32(b);
        w.u32(wt);
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

CocitSnapshot CocitSnapshot::load_cache(const std::string& path, const Corpus& corpus) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open snapshot cache: " + path);
    BinReader r(in);
    char magic[8];
    r.raw(magic, sizeof(magic));
    if (std::memcmp(magic, kCocitMagic, sizeof(magic)) != 0)
        throw std::runtime_error("not a snapshot cache: " + path);
    if (r.u32() != kCocitVersion) throw std::runtime_error("snapshot cache version mismatch: " + path);
    if (r.u64() != corpus.content_hash())
        throw std::runtime_error("snapshot cache was built from a different corpus: " + path);
    CocitSnapshot s;
    s.init(corpus);
    s.as_of_year_ = r.i32();
    uint32_t nodes = r.u32();
    if (nodes != corpus.size()) throw std::runtime_error("snapshot cache node count mismatch: " + path);
    uint64_t n_pairs = r.u64();
    s.pair_w_.reserve(static_cast<size_t>(n_pairs) + 16);
    for (uint64_t i = 0; i < n_pairs; ++i) {
        uint32_t a = r.u32(), b = r.u32(), wt = r.u32();
        if (a >= b || b >= nodes || wt == 0) throw std::runtime_error("corrupt snapshot cache: " + path);
        s.pair_w_.emplace(pair_key(a, b), wt);
        s.nbrs_[a].push_back(b);
        s.nbrs_[b].push_back(a);
        s.total_weight_ += wt;
    }
    return s;
}

}  // namespace giants
