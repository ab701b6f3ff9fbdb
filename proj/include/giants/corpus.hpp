#pragma once

// Corpus ingest and indexing: paper records, the citation transpose,
// year buckets, and the focal-paper eligibility filter.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "giants/common.hpp"

namespace giants {

enum class PubType : uint8_t { article = 0, letter, review, editorial, other };

const char* pub_type_name(PubType t);
PubType parse_pub_type(const std::string& s, bool* known = nullptr);

// Normalized author key: lowercase last name + lowercase first initial.
struct Author {
    std::string last;
    char initial = 0;

    bool operator==(const Author& o) const { return initial == o.initial && last == o.last; }
    bool operator<(const Author& o) const {
        if (last != o.last) return last < o.last;
        return initial < o.initial;
    }
};

// Parses "J.Smith" (also tolerates "John Smith" / "Smith") into a key.
Author parse_author(const std::string& raw);

struct PaperRecord {
    std::string id;
    int32_t year = 0;
    uint16_t field = 0;            // index into Corpus::field_label()
    PubType type = PubType::article;
    uint32_t venue = 0;            // index into Corpus::venue_label(); 0 = none
    std::vector<Author> authors;   // normalized; may be empty
    std::vector<uint32_t> refs;    // resolved references (deduped, causal)
    uint32_t listed_ref_count = 0; // distinct references as listed, incl. unresolved

    uint32_t team_size() const { return static_cast<uint32_t>(authors.size()); }
};

// Pre-index form used by the file parsers and the synthetic generator.
struct RawPaper {
    std::string id;
    int year = 0;
    std::string field;              // empty -> "unknown"
    std::string type = "article";
    std::vector<std::string> authors;
    std::vector<std::string> refs;
    std::string venue;
};

struct IngestConfig {
    enum class Format { jsonl, tsv };
    Format format = Format::jsonl;
    // Both zero: infer the corpus year range from the data.
    int year_min = 0;
    int year_max = 0;
};

struct IngestStats {
    uint64_t dangling_refs = 0;        // reference id not present in the corpus
    uint64_t future_refs_dropped = 0;  // reference year > citing year
    uint64_t self_refs_dropped = 0;    // paper listing itself
    uint64_t duplicate_refs = 0;       // repeated id within one reference list
    uint64_t unknown_pub_types = 0;    // unrecognized type strings, mapped to "other"
};

class Corpus {
public:
    Corpus() = default;

    // Hard errors (duplicate id, malformed line, year out of configured range)
    // throw std::runtime_error with the offending location.
    static Corpus load(const std::string& path, const IngestConfig& cfg = {});
    static Corpus build(std::vector<RawPaper> rows, const IngestConfig& cfg = {});

    size_t size() const { return papers_.size(); }
    const PaperRecord& paper(uint32_t i) const { return papers_[i]; }
    const std::string& id_of(uint32_t i) const { return papers_[i].id; }
    std::optional<uint32_t> find(const std::string& id) const;

    // Distinct papers citing i (transpose of the resolved reference lists).
    const std::vector<uint32_t>& citers(uint32_t i) const { return citing_[i]; }

    const std::vector<uint32_t>& papers_of_year(int year) const;
    int year_min() const { return year_min_; }
    int year_max() const { return year_max_; }

    // Rank of the external id in lexicographic order; deterministic tie-break key.
    uint32_t id_rank(uint32_t i) const { return id_rank_[i]; }

    const std::string& field_label(uint16_t f) const { return field_labels_[f]; }
    uint16_t field_count() const { return static_cast<uint16_t>(field_labels_.size()); }
    // False for papers with a missing field label ("unknown"), which are
    // excluded from field-normalized metrics.
    bool field_known(uint32_t i) const { return papers_[i].field != unknown_field_; }

    const std::string& venue_label(uint32_t v) const { return venue_labels_[v]; }

    bool eligible_focal(uint32_t i) const { return eligible_[i] != 0; }

    const IngestStats& stats() const { return stats_; }
    uint64_t content_hash() const { return content_hash_; }

    // Versioned binary cache.
    void save_cache(const std::string& path) const;
    static Corpus load_cache(const std::string& path);
    std::string serialize() const;

private:
    std::vector<PaperRecord> papers_;
    std::vector<std::vector<uint32_t>> citing_;
    std::vector<std::vector<uint32_t>> year_index_;  // offset by year_min_
    std::vector<uint32_t> id_rank_;
    std::vector<uint32_t> rank_order_;  // inverse of id_rank_: rank -> index
    std::vector<uint8_t> eligible_;
    std::vector<std::string> field_labels_;
    std::vector<std::string> venue_labels_;
    uint16_t unknown_field_ = 0;
    int year_min_ = 0;
    int year_max_ = 0;
    IngestStats stats_;
    uint64_t content_hash_ = 0;

    void build_indexes();
    friend struct CorpusIO;
};

// Papers with pub_type in {article, letter}, at least five listed references,
// and year inside [year_from, year_to]; sorted by (year, id).
std::vector<uint32_t> eligible_focal_papers(const Corpus& corpus, int year_from, int year_to);

// Parses an input file into raw rows without building the indexes; the form
// consumed by the brute-force oracle.
std::vector<RawPaper> read_raw_rows(const std::string& path, const IngestConfig& cfg = {});

}  // namespace giants
