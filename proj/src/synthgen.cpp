#include "giants/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <stdexcept>

#include <json.hpp>

#include "giants/common.hpp"

namespace giants {

namespace {

// Hand-rolled draws on top of mt19937_64: the standard distribution objects
// are not required to produce identical streams across library versions, and
// generated corpora must be reproducible byte for byte.

uint64_t uniform_below(std::mt19937_64& rng, uint64_t n) {
    if (n <= 1) return 0;
    uint64_t lim = UINT64_MAX - UINT64_MAX % n;
    uint64_t r;
    do {
        r = rng();
    } while (r >= lim);
    return r % n;
}

double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * (1.0 / 9007199254740992.0);
}

uint64_t poisson_small(std::mt19937_64& rng, double lambda) {
    double limit = std::exp(-lambda);
    uint64_t k = 0;
    double p = 1.0;
    do {
        ++k;
        p *= uniform01(rng);
    } while (p > limit);
    return k - 1;
}

uint64_t poisson(std::mt19937_64& rng, double lambda) {
    uint64_t total = 0;
    while (lambda > 30.0) {
        total += poisson_small(rng, 30.0);
        lambda -= 30.0;
    }
    return total + poisson_small(rng, lambda);
}

// Fenwick tree over nonnegative weights supporting sampling proportional to
// weight in O(log n).
struct Fenwick {
    std::vector<double> tree;  // 1-based
    size_t n = 0;

    explicit Fenwick(size_t size) : tree(size + 1, 0.0), n(size) {}

    void add(size_t i, double delta) {
        for (size_t j = i + 1; j <= n; j += j & (~j + 1)) tree[j] += delta;
    }

    double total() const {
        double s = 0.0;
        for (size_t j = n; j > 0; j -= j & (~j + 1)) s += tree[j];
        return s;
    }

    // Smallest index whose prefix sum exceeds u; u must lie in [0, total()).
    size_t find(double u) const {
        size_t pos = 0;
        size_t mask = 1;
        while ((mask << 1) <= n) mask <<= 1;
        for (; mask > 0; mask >>= 1) {
            size_t next = pos + mask;
            if (next <= n && tree[next] <= u) {
                u -= tree[next];
                pos = next;
            }
        }
        return pos;  // 0-based
    }
};

std::string paper_id(uint32_t idx) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "P%07u", idx);
    return std::string(buf);
}

std::string field_label(uint32_t f) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "F%02u", f);
    return std::string(buf);
}

std::string venue_label(uint32_t v) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "J%02u", v);
    return std::string(buf);
}

std::string author_name(uint32_t a) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%c.n%05u", static_cast<char>('a' + a % 26), a);
    return std::string(buf);
}

constexpr uint32_t kCompanions = 6;
constexpr uint32_t kBoosters = 10;
constexpr uint32_t kVoteWindow = 4;  // companions cited alongside the giant

}  // namespace

uint64_t generator_config_hash(const GeneratorConfig& cfg) {
    std::string s = "synthgen|" + std::to_string(cfg.n_papers) + '|' + std::to_string(cfg.year_from) +
                    '|' + std::to_string(cfg.year_to) + '|' + fmt_double(cfg.mean_refs) + '|' +
                    (cfg.ref_dist == RefDist::fixed ? "fixed" : "poisson_shifted") + '|' +
                    fmt_double(cfg.attachment) + '|' + std::to_string(cfg.field_count) + '|' +
                    std::to_string(cfg.venue_count) + '|' + std::to_string(cfg.seed) + '|' +
                    fmt_double(cfg.self_cites.rate) + '|' + std::to_string(cfg.giant_rich.blocks) +
                    '|' + fmt_double(cfg.giant_rich.boost_factor) + '|' +
                    std::to_string(cfg.giant_rich.base_rate) + '|' +
                    std::to_string(cfg.giant_rich.adopters) + '|' +
                    std::to_string(cfg.giant_rich.target_c5) + '|' +
                    std::to_string(cfg.isolated.papers) + '|' + std::to_string(cfg.isolated.orphan_refs) +
                    '|' + std::to_string(cfg.isolated.citers);
    return fnv1a64(s);
}

SynthResult generate(const GeneratorConfig& cfg) {
    if (cfg.n_papers < 10) throw std::runtime_error("generator: n_papers must be at least 10");
    if (cfg.year_to < cfg.year_from) throw std::runtime_error("generator: empty year range");
    if (cfg.mean_refs < 1.0) throw std::runtime_error("generator: mean_refs must be >= 1");
    if (cfg.attachment < 0.0) throw std::runtime_error("generator: attachment exponent must be >= 0");
    if (cfg.field_count == 0 || cfg.venue_count == 0)
        throw std::runtime_error("generator: field_count and venue_count must be positive");
    if (cfg.self_cites.rate < 0.0 || cfg.self_cites.rate > 1.0)
        throw std::runtime_error("generator: self-citation rate outside [0, 1]");

    int span = cfg.year_to - cfg.year_from + 1;
    int y_plant = cfg.year_from + 2;
    if (cfg.giant_rich.blocks > 0) {
        if (cfg.year_from + 17 > cfg.year_to)
            throw std::runtime_error("generator: giant-rich blocks need at least an 18-year span");
        if (cfg.giant_rich.target_c5 < kBoosters + cfg.giant_rich.adopters)
            throw std::runtime_error("generator: target_c5 must cover boosters plus adopters (" +
                                     std::to_string(kBoosters + cfg.giant_rich.adopters) + ")");
        if (cfg.giant_rich.base_rate == 0 || cfg.giant_rich.boost_factor < 1.0)
            throw std::runtime_error("generator: boost window needs base_rate >= 1 and boost_factor >= 1");
    }
    if (cfg.isolated.papers > 0) {
        if (span < 5) throw std::runtime_error("generator: isolated plants need at least a 5-year span");
        if (cfg.isolated.orphan_refs < 5)
            throw std::runtime_error("generator: isolated plants need >= 5 orphan references");
    }

    std::mt19937_64 rng(cfg.seed);
    SynthResult res;
    res.rows.reserve(cfg.n_papers);

    uint32_t n = cfg.n_papers;
    uint32_t n_authors = std::max<uint32_t>(50, n / 2);

    // -- Organic phase -------------------------------------------------------
    // Papers are laid out in index order with non-decreasing years, so every
    // earlier index is a causally valid citation target.
    std::vector<int> year_of(n);
    for (uint32_t i = 0; i < n; ++i)
        year_of[i] = cfg.year_from + static_cast<int>((static_cast<uint64_t>(i) * span) / n);

    Fenwick fen(n);
    std::vector<double> weight(n, 0.0);
    std::vector<uint32_t> indeg(n, 0);

    std::vector<uint32_t> picked;
    std::set<uint32_t> team;

    for (uint32_t i = 0; i < n; ++i) {
        RawPaper p;
        p.id = paper_id(i);
        p.year = year_of[i];
        p.field = field_label(static_cast<uint32_t>(uniform_below(rng, cfg.field_count)));
        p.venue = venue_label(static_cast<uint32_t>(uniform_below(rng, cfg.venue_count)));

        double tu = uniform01(rng);
        p.type = tu < 0.78 ? "article" : tu < 0.88 ? "letter" : tu < 0.96 ? "review" : "editorial";

        uint32_t m = static_cast<uint32_t>(1 + std::min<uint64_t>(poisson(rng, 3.0), 24));
        team.clear();
        while (team.size() < m) team.insert(static_cast<uint32_t>(uniform_below(rng, n_authors)));
        for (uint32_t a : team) p.authors.push_back(author_name(a));

        uint64_t want = cfg.ref_dist == RefDist::fixed
                            ? static_cast<uint64_t>(std::llround(cfg.mean_refs))
                            : 1 + poisson(rng, cfg.mean_refs - 1.0);
        uint32_t r = static_cast<uint32_t>(std::min<uint64_t>(want, i));

        picked.clear();
        for (uint32_t k = 0; k < r; ++k) {
            double total = fen.total();
            if (total <= 0.0) break;
            size_t idx = fen.find(uniform01(rng) * total);
            if (idx >= i) break;  // numerical edge: no usable mass left
            picked.push_back(static_cast<uint32_t>(idx));
            fen.add(idx, -weight[idx]);  // without replacement
        }
        for (uint32_t idx : picked) fen.add(idx, weight[idx]);
        for (uint32_t idx : picked) {
            p.refs.push_back(paper_id(idx));
            ++indeg[idx];
            double w_new = std::pow(static_cast<double>(indeg[idx]) + 1.0, cfg.attachment);
            fen.add(idx, w_new - weight[idx]);
            weight[idx] = w_new;
        }

        // Planted author overlap: copy one author from one reference.
        if (cfg.self_cites.rate > 0.0 && !p.refs.empty() && uniform01(rng) < cfg.self_cites.rate) {
            uint32_t ref_idx = picked[static_cast<size_t>(uniform_below(rng, picked.size()))];
            const RawPaper& ref_row = res.rows[ref_idx];
            if (!ref_row.authors.empty()) {
                std::string a =
                    ref_row.authors[static_cast<size_t>(uniform_below(rng, ref_row.authors.size()))];
                if (std::find(p.authors.begin(), p.authors.end(), a) == p.authors.end())
                    p.authors.push_back(a);
                res.self_cites.push_back({p.id, ref_row.id, a});
            }
        }

        weight[i] = 1.0;  // becomes citable: (indegree 0 + 1)^a == 1
        fen.add(i, 1.0);
        res.rows.push_back(std::move(p));
    }

    // Organic papers are year-sorted by construction, so "papers published
    // before year Y" is an index prefix.
    auto organic_before = [&](int y) -> uint32_t {
        auto it = std::lower_bound(year_of.begin(), year_of.end(), y);
        return static_cast<uint32_t>(it - year_of.begin());
    };
    auto random_organic = [&](int before_year) -> uint32_t {
        uint32_t pool = organic_before(before_year);
        if (pool == 0) throw std::runtime_error("generator: no organic papers before year " +
                                                std::to_string(before_year));
        return static_cast<uint32_t>(uniform_below(rng, pool));
    };

    uint32_t next_idx = n;
    auto add_paper = [&](int year, const std::string& field, const std::string& type,
                         const std::string& venue, const std::vector<std::string>& refs) -> std::string {
        RawPaper p;
        p.id = paper_id(next_idx++);
        p.year = year;
        p.field = field;
        p.type = type;
        p.venue = venue;
        uint32_t m = static_cast<uint32_t>(1 + std::min<uint64_t>(poisson(rng, 3.0), 24));
        team.clear();
        while (team.size() < m) team.insert(static_cast<uint32_t>(uniform_below(rng, n_authors)));
        for (uint32_t a : team) p.authors.push_back(author_name(a));
        p.refs = refs;
        res.rows.push_back(std::move(p));
        return res.rows.back().id;
    };

    // Distinct random organic reference ids published before `before_year`,
    // avoiding the ones already in `used`.
    auto random_refs = [&](int before_year, uint32_t count,
                           std::vector<std::string>& out) {
        std::set<uint32_t> seen;
        while (seen.size() < count) {
            uint32_t idx = random_organic(before_year);
            if (seen.insert(idx).second) out.push_back(paper_id(idx));
        }
    };

    // -- Giant-rich blocks ---------------------------------------------------
    if (cfg.giant_rich.blocks > 0) {
        if (organic_before(y_plant) < 50)
            throw std::runtime_error("generator: too few organic papers before the planted year");
        res.planted_venue = "J-PLANT";
        uint32_t boost_per_year = static_cast<uint32_t>(
            std::llround(cfg.giant_rich.base_rate * cfg.giant_rich.boost_factor));
        for (uint32_t b = 0; b < cfg.giant_rich.blocks; ++b) {
            SynthResult::GiantBlock blk;
            blk.field = field_label(static_cast<uint32_t>(uniform_below(rng, cfg.field_count)));
            blk.year = y_plant;
            blk.expected_c5 = cfg.giant_rich.target_c5;
            blk.base_per_year = cfg.giant_rich.base_rate;
            blk.boost_per_year = boost_per_year;
            blk.boost_year_from = y_plant + 6;
            blk.boost_year_to = y_plant + 15;

            std::vector<std::string> ref_buf;
            for (uint32_t c = 0; c < kCompanions; ++c) {
                ref_buf.clear();
                random_refs(y_plant, 5, ref_buf);
                blk.companions.push_back(add_paper(
                    y_plant, blk.field, "article",
                    venue_label(static_cast<uint32_t>(uniform_below(rng, cfg.venue_count))), ref_buf));
            }
            ref_buf.clear();
            random_refs(y_plant, 5, ref_buf);
            blk.giant_id = add_paper(y_plant, blk.field, "article", res.planted_venue, ref_buf);
            ref_buf.clear();
            random_refs(y_plant, 5, ref_buf);
            blk.control_id = add_paper(y_plant, blk.field, "article", res.planted_venue, ref_buf);

            // Boosters: reviews (never focal-eligible) citing the giant with a
            // rotating window of companions; they build the co-citation clique.
            for (uint32_t k = 0; k < kBoosters; ++k) {
                std::vector<std::string> refs{blk.giant_id};
                for (uint32_t j = 0; j < kVoteWindow; ++j)
                    refs.push_back(blk.companions[(k + j) % kCompanions]);
                ref_buf.clear();
                random_refs(y_plant + 1, 1, ref_buf);
                refs.push_back(ref_buf[0]);
                add_paper(y_plant + 1,
                          field_label(static_cast<uint32_t>(uniform_below(rng, cfg.field_count))),
                          "review",
                          venue_label(static_cast<uint32_t>(uniform_below(rng, cfg.venue_count))), refs);
            }

            // Adopters: the focal papers whose giant the planted paper becomes.
            for (uint32_t k = 0; k < cfg.giant_rich.adopters; ++k) {
                int year = y_plant + 2 + static_cast<int>(k % 4);
                std::vector<std::string> refs{blk.giant_id};
                for (uint32_t j = 0; j < kVoteWindow; ++j)
                    refs.push_back(blk.companions[(k + j) % kCompanions]);
                ref_buf.clear();
                random_refs(year, 1, ref_buf);
                refs.push_back(ref_buf[0]);
                blk.adopters.push_back(add_paper(
                    year, blk.field, "article",
                    venue_label(static_cast<uint32_t>(uniform_below(rng, cfg.venue_count))), refs));
            }

            // Fillers bring both papers to the same five-year citation count.
            auto add_fillers = [&](const std::string& target, uint32_t count) {
                for (uint32_t k = 0; k < count; ++k) {
                    int year = y_plant + 1 + static_cast<int>(k % 5);
                    std::vector<std::string> refs{target};
                    ref_buf.clear();
                    random_refs(year, 4, ref_buf);
                    refs.insert(refs.end(), ref_buf.begin(), ref_buf.end());
                    add_paper(year,
                              field_label(static_cast<uint32_t>(uniform_below(rng, cfg.field_count))),
                              "article",
                              venue_label(static_cast<uint32_t>(uniform_below(rng, cfg.venue_count))),
                              refs);
                }
            };
            add_fillers(blk.giant_id, cfg.giant_rich.target_c5 - kBoosters - cfg.giant_rich.adopters);
            add_fillers(blk.control_id, cfg.giant_rich.target_c5);

            // Boost window: the planted giant keeps out-citing its control.
            for (int year = blk.boost_year_from; year <= blk.boost_year_to; ++year) {
                for (uint32_t k = 0; k < boost_per_year; ++k) {
                    std::vector<std::string> refs{blk.giant_id};
                    ref_buf.clear();
                    random_refs(year, 4, ref_buf);
                    refs.insert(refs.end(), ref_buf.begin(), ref_buf.end());
                    add_paper(year,
                              field_label(static_cast<uint32_t>(uniform_below(rng, cfg.field_count))),
                              "article",
                              venue_label(static_cast<uint32_t>(uniform_below(rng, cfg.venue_count))),
                              refs);
                }
                for (uint32_t k = 0; k < cfg.giant_rich.base_rate; ++k) {
                    std::vector<std::string> refs{blk.control_id};
                    ref_buf.clear();
                    random_refs(year, 4, ref_buf);
                    refs.insert(refs.end(), ref_buf.begin(), ref_buf.end());
                    add_paper(year,
                              field_label(static_cast<uint32_t>(uniform_below(rng, cfg.field_count))),
                              "article",
                              venue_label(static_cast<uint32_t>(uniform_below(rng, cfg.venue_count))),
                              refs);
                }
            }
            res.giant_blocks.push_back(std::move(blk));
        }
    }

    // -- Isolated disruptive plants ------------------------------------------
    if (cfg.isolated.papers > 0) {
        if (organic_before(y_plant + 2) < 20)
            throw std::runtime_error("generator: too few organic papers before the isolated plant years");
        for (uint32_t k = 0; k < cfg.isolated.papers; ++k) {
            SynthResult::IsolatedPlant plant;
            std::string field = field_label(static_cast<uint32_t>(uniform_below(rng, cfg.field_count)));
            for (uint32_t o = 0; o < cfg.isolated.orphan_refs; ++o)
                plant.orphan_refs.push_back(add_paper(
                    y_plant - 1, field, "article",
                    venue_label(static_cast<uint32_t>(uniform_below(rng, cfg.venue_count))), {}));
            plant.paper_id = add_paper(
                y_plant, field, "article",
                venue_label(static_cast<uint32_t>(uniform_below(rng, cfg.venue_count))),
                plant.orphan_refs);
            plant.citers = cfg.isolated.citers;
            int citer_last = std::min(cfg.year_to, y_plant + 3);
            std::vector<std::string> ref_buf;
            for (uint32_t c = 0; c < cfg.isolated.citers; ++c) {
                int year = y_plant + 1 + static_cast<int>(c % std::max(1, citer_last - y_plant));
                std::vector<std::string> refs{plant.paper_id};
                ref_buf.clear();
                random_refs(year, 4, ref_buf);
                refs.insert(refs.end(), ref_buf.begin(), ref_buf.end());
                add_paper(year, field, "article",
                          venue_label(static_cast<uint32_t>(uniform_below(rng, cfg.venue_count))), refs);
            }
            res.isolated.push_back(std::move(plant));
        }
    }

    return res;
}

void write_corpus_jsonl(const std::vector<RawPaper>& rows, const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write corpus file: " + path);
    for (const RawPaper& p : rows) {
        nlohmann::ordered_json j;
        j["id"] = p.id;
        j["year"] = p.year;
        j["field"] = p.field;
        j["type"] = p.type;
        j["venue"] = p.venue;
        j["authors"] = p.authors;
        j["refs"] = p.refs;
        out << j.dump() << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

void write_synth_corpus(const SynthResult& res, const GeneratorConfig& cfg, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    write_corpus_jsonl(res.rows, out_dir + "/corpus.jsonl");

    nlohmann::ordered_json m;
    m["generator"] = {
        {"n_papers", cfg.n_papers},
        {"year_from", cfg.year_from},
        {"year_to", cfg.year_to},
        {"mean_refs", cfg.mean_refs},
        {"ref_dist", cfg.ref_dist == RefDist::fixed ? "fixed" : "poisson_shifted"},
        {"attachment", cfg.attachment},
        {"field_count", cfg.field_count},
        {"venue_count", cfg.venue_count},
        {"seed", cfg.seed},
        {"self_cite_rate", cfg.self_cites.rate},
        {"giant_rich",
         {{"blocks", cfg.giant_rich.blocks},
          {"boost_factor", cfg.giant_rich.boost_factor},
          {"base_rate", cfg.giant_rich.base_rate},
          {"adopters", cfg.giant_rich.adopters},
          {"target_c5", cfg.giant_rich.target_c5}}},
        {"isolated",
         {{"papers", cfg.isolated.papers},
          {"orphan_refs", cfg.isolated.orphan_refs},
          {"citers", cfg.isolated.citers}}},
    };
    m["config_hash"] = hash_hex(generator_config_hash(cfg));
    m["total_papers"] = res.rows.size();
    if (!res.planted_venue.empty()) m["planted_venue"] = res.planted_venue;

    nlohmann::ordered_json blocks = nlohmann::ordered_json::array();
    for (const auto& b : res.giant_blocks) {
        blocks.push_back({{"giant_id", b.giant_id},
                          {"control_id", b.control_id},
                          {"field", b.field},
                          {"year", b.year},
                          {"companions", b.companions},
                          {"adopters", b.adopters},
                          {"expected_c5", b.expected_c5},
                          {"boost_per_year", b.boost_per_year},
                          {"base_per_year", b.base_per_year},
                          {"boost_year_from", b.boost_year_from},
                          {"boost_year_to", b.boost_year_to}});
    }
    m["giant_blocks"] = std::move(blocks);

    nlohmann::ordered_json selfs = nlohmann::ordered_json::array();
    for (const auto& s : res.self_cites)
        selfs.push_back({{"paper_id", s.paper_id}, {"ref_id", s.ref_id}, {"author", s.author}});
    m["self_citations"] = std::move(selfs);

    nlohmann::ordered_json iso = nlohmann::ordered_json::array();
    for (const auto& p : res.isolated)
        iso.push_back({{"paper_id", p.paper_id}, {"orphan_refs", p.orphan_refs}, {"citers", p.citers}});
    m["isolated"] = std::move(iso);

    std::ofstream out(out_dir + "/manifest.json", std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write manifest: " + out_dir + "/manifest.json");
    out << m.dump(2) << '\n';
    if (!out) throw std::runtime_error("write failed: " + out_dir + "/manifest.json");
}

}  // namespace giants
