#include "giants/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

namespace giants {

namespace {

std::string lower_copy(const std::string& s) {
    std::string out = s;
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    if (s.empty()) return out;
    size_t start = 0;
    for (size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == sep) {
            if (i > start) out.emplace_back(s.substr(start, i - start));
            start = i + 1;
        }
    }
    return out;
}

[[noreturn]] void fail_at(const std::string& path, size_t lineno, const std::string& what) {
    throw std::runtime_error(path + ":" + std::to_string(lineno) + ": " + what);
}

}  // namespace

const char* pub_type_name(PubType t) {
    switch (t) {
        case PubType::article: return "article";
        case PubType::letter: return "letter";
        case PubType::review: return "review";
        case PubType::editorial: return "editorial";
        case PubType::other: return "other";
    }
    return "other";
}

PubType parse_pub_type(const std::string& s, bool* known) {
    std::string t = lower_copy(s);
    if (known) *known = true;
    if (t.empty() || t == "article") return PubType::article;
    if (t == "letter") return PubType::letter;
    if (t == "review") return PubType::review;
    if (t == "editorial" || t == "editorial material" || t == "editorial materials")
        return PubType::editorial;
    if (t == "other") return PubType::other;
    if (known) *known = false;
    return PubType::other;
}

Author parse_author(const std::string& raw) {
    Author a;
    std::string s = lower_copy(raw);
    // strip surrounding whitespace
    size_t b = s.find_first_not_of(" \t");
    size_t e = s.find_last_not_of(" \t");
    if (b == std::string::npos) return a;
    s = s.substr(b, e - b + 1);

    size_t dot = s.find('.');
    if (dot != std::string::npos && dot + 1 < s.size()) {
        a.initial = s[0];
        a.last = s.substr(dot + 1);
    } else if (size_t sp = s.rfind(' '); sp != std::string::npos) {
        a.initial = s[0];
        a.last = s.substr(sp + 1);
    } else {
        a.initial = s[0];
        a.last = s;
    }
    return a;
}

// ---------------------------------------------------------------------------
// Parsers

static std::vector<RawPaper> parse_jsonl(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open corpus file: " + path);
    std::vector<RawPaper> rows;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const std::exception& ex) {
            fail_at(path, lineno, std::string("invalid JSON: ") + ex.what());
        }
        RawPaper r;
        if (!j.contains("id") || !j["id"].is_string()) fail_at(path, lineno, "missing string field 'id'");
        if (!j.contains("year") || !j["year"].is_number_integer()) fail_at(path, lineno, "missing integer field 'year'");
        r.id = j["id"].get<std::string>();
        r.year = j["year"].get<int>();
        if (j.contains("field") && j["field"].is_string()) r.field = j["field"].get<std::string>();
        if (j.contains("type") && j["type"].is_string()) r.type = j["type"].get<std::string>();
        if (j.contains("venue") && j["venue"].is_string()) r.venue = j["venue"].get<std::string>();
        if (j.contains("authors")) {
            if (!j["authors"].is_array()) fail_at(path, lineno, "'authors' must be an array");
            for (const auto& a : j["authors"]) r.authors.push_back(a.get<std::string>());
        }
        if (j.contains("refs")) {
            if (!j["refs"].is_array()) fail_at(path, lineno, "'refs' must be an array");
            for (const auto& x : j["refs"]) r.refs.push_back(x.get<std::string>());
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

// Headerless TSV: id, year, field, type, authors(';'-joined), refs(';'-joined), venue.
static std::vector<RawPaper> parse_tsv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open corpus file: " + path);
    std::vector<RawPaper> rows;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> cols;
        size_t start = 0;
        for (size_t i = 0; i <= line.size(); ++i) {
            if (i == line.size() || line[i] == '\t') {
                cols.emplace_back(line.substr(start, i - start));
                start = i + 1;
            }
        }
        if (cols.size() < 2) fail_at(path, lineno, "expected at least id and year columns");
        RawPaper r;
        r.id = cols[0];
        if (r.id.empty()) fail_at(path, lineno, "empty id");
        try {
            size_t pos = 0;
            r.year = std::stoi(cols[1], &pos);
            if (pos != cols[1].size()) throw std::invalid_argument("trailing junk");
        } catch (const std::exception&) {
            fail_at(path, lineno, "invalid year '" + cols[1] + "'");
        }
        if (cols.size() > 2) r.field = cols[2];
        if (cols.size() > 3) r.type = cols[3];
        if (cols.size() > 4) r.authors = split(cols[4], ';');
        if (cols.size() > 5) r.refs = split(cols[5], ';');
        if (cols.size() > 6) r.venue = cols[6];
        rows.push_back(std::move(r));
    }
    return rows;
}

// ---------------------------------------------------------------------------
// Corpus construction

std::vector<RawPaper> read_raw_rows(const std::string& path, const IngestConfig& cfg) {
    return cfg.format == IngestConfig::Format::jsonl ? parse_jsonl(path) : parse_tsv(path);
}

Corpus Corpus::load(const std::string& path, const IngestConfig& cfg) {
    return build(read_raw_rows(path, cfg), cfg);
}

Corpus Corpus::build(std::vector<RawPaper> rows, const IngestConfig& cfg) {
    Corpus c;
    c.papers_.resize(rows.size());

    std::unordered_map<std::string, uint32_t> index;
    index.reserve(rows.size() * 2);
    for (uint32_t i = 0; i < rows.size(); ++i) {
        auto [it, inserted] = index.emplace(rows[i].id, i);
        if (!inserted)
            throw std::runtime_error("duplicate paper id '" + rows[i].id + "' (records " +
                                     std::to_string(it->second + 1) + " and " + std::to_string(i + 1) + ")");
    }

    std::unordered_map<std::string, uint16_t> field_ids;
    std::unordered_map<std::string, uint32_t> venue_ids;
    auto intern_field = [&](const std::string& label) -> uint16_t {
        auto it = field_ids.find(label);
        if (it != field_ids.end()) return it->second;
        uint16_t id = static_cast<uint16_t>(c.field_labels_.size());
        c.field_labels_.push_back(label);
        field_ids.emplace(label, id);
        return id;
    };
    auto intern_venue = [&](const std::string& label) -> uint32_t {
        auto it = venue_ids.find(label);
        if (it != venue_ids.end()) return it->second;
        uint32_t id = static_cast<uint32_t>(c.venue_labels_.size());
        c.venue_labels_.push_back(label);
        venue_ids.emplace(label, id);
        return id;
    };
    c.unknown_field_ = intern_field("unknown");
    intern_venue("");  // venue 0 = none

    int ymin = cfg.year_min, ymax = cfg.year_max;
    bool infer = (ymin == 0 && ymax == 0);
    if (infer && !rows.empty()) {
        ymin = rows[0].year;
        ymax = rows[0].year;
        for (const auto& r : rows) {
            ymin = std::min(ymin, r.year);
            ymax = std::max(ymax, r.year);
        }
    }

    std::unordered_set<uint32_t> seen;
    for (uint32_t i = 0; i < rows.size(); ++i) {
        RawPaper& r = rows[i];
        PaperRecord& p = c.papers_[i];
        if (!infer && (r.year < ymin || r.year > ymax))
            throw std::runtime_error("paper '" + r.id + "' year " + std::to_string(r.year) +
                                     " outside configured range [" + std::to_string(ymin) + "," +
                                     std::to_string(ymax) + "]");
        p.id = std::move(r.id);
        p.year = r.year;
        p.field = intern_field(r.field.empty() ? "unknown" : r.field);
        bool known_type = true;
        p.type = parse_pub_type(r.type, &known_type);
        if (!known_type) ++c.stats_.unknown_pub_types;
        p.venue = r.venue.empty() ? 0 : intern_venue(r.venue);
        p.authors.reserve(r.authors.size());
        for (const auto& a : r.authors) p.authors.push_back(parse_author(a));

        // Resolve references: dedupe, drop self and acausal edges, flag dangling.
        // The >=5 eligibility threshold counts all distinct listed references,
        // resolvable or not; only resolved causal edges enter the graphs.
        seen.clear();
        uint32_t listed = 0;
        for (const auto& ref_id : r.refs) {
            auto it = index.find(ref_id);
            uint32_t resolved = it == index.end() ? UINT32_MAX : it->second;
            // dedupe on the id string for unresolved refs via a side set of hashes
            if (resolved != UINT32_MAX) {
                if (!seen.insert(resolved).second) {
                    ++c.stats_.duplicate_refs;
                    continue;
                }
            } else {
                uint32_t h = static_cast<uint32_t>(fnv1a64(ref_id)) | 0x80000000u;
                if (!seen.insert(h).second) {
                    ++c.stats_.duplicate_refs;
                    continue;
                }
            }
            ++listed;
            if (resolved == UINT32_MAX) {
                ++c.stats_.dangling_refs;
                continue;
            }
            if (resolved == i) {
                ++c.stats_.self_refs_dropped;
                continue;
            }
            p.refs.push_back(resolved);
        }
        p.listed_ref_count = listed;
    }

    // Causality pass (needs all years populated first).
    for (uint32_t i = 0; i < c.papers_.size(); ++i) {
        PaperRecord& p = c.papers_[i];
        auto new_end = std::remove_if(p.refs.begin(), p.refs.end(), [&](uint32_t r) {
            return c.papers_[r].year > p.year;
        });
        c.stats_.future_refs_dropped += static_cast<uint64_t>(p.refs.end() - new_end);
        p.refs.erase(new_end, p.refs.end());
        p.refs.shrink_to_fit();
    }

    c.year_min_ = ymin;
    c.year_max_ = ymax;
    c.build_indexes();
    c.content_hash_ = fnv1a64(c.serialize());
    return c;
}

void Corpus::build_indexes() {
    size_t n = papers_.size();
    citing_.assign(n, {});
    {
        std::vector<uint32_t> indeg(n, 0);
        for (const auto& p : papers_)
            for (uint32_t r : p.refs) ++indeg[r];
        for (size_t i = 0; i < n; ++i) citing_[i].reserve(indeg[i]);
    }
    for (uint32_t i = 0; i < n; ++i)
        for (uint32_t r : papers_[i].refs) citing_[r].push_back(i);
    for (auto& v : citing_) std::sort(v.begin(), v.end());

    size_t span = n == 0 ? 0 : static_cast<size_t>(year_max_ - year_min_) + 1;
    year_index_.assign(span, {});
    for (uint32_t i = 0; i < n; ++i) year_index_[static_cast<size_t>(papers_[i].year - year_min_)].push_back(i);

    id_rank_.resize(n);
    rank_order_.resize(n);
    std::iota(rank_order_.begin(), rank_order_.end(), 0u);
    std::sort(rank_order_.begin(), rank_order_.end(),
              [&](uint32_t a, uint32_t b) { return papers_[a].id < papers_[b].id; });
    for (uint32_t rank = 0; rank < n; ++rank) id_rank_[rank_order_[rank]] = rank;

    eligible_.resize(n);
    for (uint32_t i = 0; i < n; ++i) {
        const PaperRecord& p = papers_[i];
        eligible_[i] = (p.type == PubType::article || p.type == PubType::letter) &&
                               p.listed_ref_count >= 5
                           ? 1
                           : 0;
    }
}

std::optional<uint32_t> Corpus::find(const std::string& id) const {
    // Binary search over the lexicographic id order (rank_order_ is the
    // inverse permutation of id_rank_).
    uint32_t lo = 0, hi = static_cast<uint32_t>(rank_order_.size());
    while (lo < hi) {
        uint32_t mid = lo + (hi - lo) / 2;
        if (papers_[rank_order_[mid]].id < id)
            lo = mid + 1;
        else
            hi = mid;
    }
    if (lo < rank_order_.size() && papers_[rank_order_[lo]].id == id) return rank_order_[lo];
    return std::nullopt;
}

const std::vector<uint32_t>& Corpus::papers_of_year(int year) const {
    static const std::vector<uint32_t> empty;
    if (year < year_min_ || year > year_max_) return empty;
    return year_index_[static_cast<size_t>(year - year_min_)];
}

std::vector<uint32_t> eligible_focal_papers(const Corpus& corpus, int year_from, int year_to) {
    std::vector<uint32_t> out;
    for (int y = std::max(year_from, corpus.year_min()); y <= std::min(year_to, corpus.year_max()); ++y) {
        std::vector<uint32_t> year_hits;
        for (uint32_t i : corpus.papers_of_year(y))
            if (corpus.eligible_focal(i)) year_hits.push_back(i);
        std::sort(year_hits.begin(), year_hits.end(),
                  [&](uint32_t a, uint32_t b) { return corpus.id_rank(a) < corpus.id_rank(b); });
        out.insert(out.end(), year_hits.begin(), year_hits.end());
    }
    return out;
}

// ---------------------------------------------------------------------------
// Serialization

namespace {
constexpr char kCorpusMagic[9] = "GCORP001";
constexpr uint32_t kCorpusVersion = 1;
}  // namespace

std::string Corpus::serialize() const {
    std::ostringstream os(std::ios::binary);
    BinWriter w(os);
    w.u32(static_cast<uint32_t>(papers_.size()));
    w.i32(year_min_);
    w.i32(year_max_);
    w.u32(static_cast<uint32_t>(field_labels_.size()));
    for (const auto& f : field_labels_) w.str(f);
    w.u32(static_cast<uint32_t>(venue_labels_.size()));
    for (const auto& v : venue_labels_) w.str(v);
    for (const auto& p : papers_) {
        w.str(p.id);
        w.i32(p.year);
        w.u32(p.field);
        w.u8(static_cast<uint8_t>(p.type));
        w.u32(p.venue);
        w.u32(static_cast<uint32_t>(p.authors.size()));
        for (const auto& a : p.authors) {
            w.u8(static_cast<uint8_t>(a.initial));
            w.str(a.last);
        }
        w.vec_u32(p.refs);
        w.u32(p.listed_ref_count);
    }
    w.u64(stats_.dangling_refs);
    w.u64(stats_.future_refs_dropped);
    w.u64(stats_.self_refs_dropped);
    w.u64(stats_.duplicate_refs);
    w.u64(stats_.unknown_pub_types);
    return os.str();
}

void Corpus::save_cache(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write corpus cache: " + path);
    out.write(kCorpusMagic, 8);
    BinWriter w(out);
    w.u32(kCorpusVersion);
    w.u64(content_hash_);
    std::string payload = serialize();
    w.u64(payload.size());
    out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
    if (!out) throw std::runtime_error("write failed: " + path);
}

Corpus Corpus::load_cache(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open corpus cache: " + path);
    char magic[8];
    in.read(magic, 8);
    if (in.gcount() != 8 || std::memcmp(magic, kCorpusMagic, 8) != 0)
        throw std::runtime_error("corpus cache has wrong magic (stale or corrupt): " + path);
    BinReader r(in);
    uint32_t version = r.u32();
    if (version != kCorpusVersion)
        throw std::runtime_error("corpus cache version " + std::to_string(version) +
                                 " unsupported (expected " + std::to_string(kCorpusVersion) + ")");
    uint64_t stored_hash = r.u64();
    uint64_t payload_len = r.u64();
    (void)payload_len;

    Corpus c;
    uint32_t n = r.u32();
    c.year_min_ = r.i32();
    c.year_max_ = r.i32();
    uint32_t nf = r.u32();
    c.field_labels_.resize(nf);
    for (auto& f : c.field_labels_) f = r.str();
    uint32_t nv = r.u32();
    c.venue_labels_.resize(nv);
    for (auto& v : c.venue_labels_) v = r.str();
    for (uint16_t i = 0; i < nf; ++i)
        if (c.field_labels_[i] == "unknown") c.unknown_field_ = i;
    c.papers_.resize(n);
    for (auto& p : c.papers_) {
        p.id = r.str();
        p.year = r.i32();
        p.field = static_cast<uint16_t>(r.u32());
        p.type = static_cast<PubType>(r.u8());
        p.venue = r.u32();
        uint32_t na = r.u32();
        p.authors.resize(na);
        for (auto& a : p.authors) {
            a.initial = static_cast<char>(r.u8());
            a.last = r.str();
        }
        p.refs = r.vec_u32();
        p.listed_ref_count = r.u32();
    }
    c.stats_.dangling_refs = r.u64();
    c.stats_.future_refs_dropped = r.u64();
    c.stats_.self_refs_dropped = r.u64();
    c.stats_.duplicate_refs = r.u64();
    c.stats_.unknown_pub_types = r.u64();
    c.build_indexes();
    c.content_hash_ = fnv1a64(c.serialize());
    if (c.content_hash_ != stored_hash)
        throw std::runtime_error("corpus cache content hash mismatch: " + path);
    return c;
}

}  // namespace giants
