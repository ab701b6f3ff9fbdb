// citegiants: command-line pipeline around the giant-reference machinery.
//
// Subcommands:
//   synth        generate a synthetic corpus (+ ground-truth manifest)
//   ingest       parse a corpus file and build the binary corpus cache
//   build-cocite build and cache a co-citation snapshot for one year
//   giants       assign a giant to every focal paper (cached)
//   metrics      per-paper metric table
//   analyze      aggregate tables (prevalence, matched cohorts, ...)
//   oracle-check compare the pipeline against the brute-force oracle
//   all          ingest -> giants -> metrics -> analyze all
//
// Exit codes: 0 success; 1 runtime failure; 2 oracle disagreement;
// CLI11 parser codes for usage errors.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "giants/analysis.hpp"
#include "giants/cocite.hpp"
#include "giants/corpus.hpp"
#include "giants/giant.hpp"
#include "giants/metrics.hpp"
#include "giants/oracle.hpp"
#include "giants/synthgen.hpp"

namespace fs = std::filesystem;
using namespace giants;

namespace {

constexpr const char* kToolVersion = "1.0.0";
// Bump to invalidate every cache written by earlier builds.
constexpr uint32_t kStageVersion = 1;

struct RunConfig {
    std::string corpus_path;
    std::string input_format = "jsonl";  // jsonl | tsv
    std::string cache_dir = "cache";
    std::string out_dir = "out";
    int year_from = 0;  // 0 = use the corpus range
    int year_to = 0;
    int window_t = 5;
    bool include_own_refs = false;   // keep the focal paper's own co-citation votes
    bool isolated_excluded = false;  // drop isolated refs from the <k_n> denominator
    bool no_self_citations = false;  // giant counts skip self-citing focal papers
    bool g_norm_over_all = false;    // normalize G over whole cohorts, not G>0 members
    std::string damping = "delta";   // delta | linear
    std::string format = "tsv";      // metrics export format
    int workers = 1;
};

// Everything that changes computed values; paths, format and workers excluded.
std::string config_hash(const RunConfig& c) {
    std::string s;
    s += "stage=" + std::to_string(kStageVersion);
    s += "|yf=" + std::to_string(c.year_from);
    s += "|yt=" + std::to_string(c.year_to);
    s += "|window=" + std::to_string(c.window_t);
    s += "|own=" + std::string(c.include_own_refs ? "1" : "0");
    s += "|iso=" + std::string(c.isolated_excluded ? "1" : "0");
    s += "|noself=" + std::string(c.no_self_citations ? "1" : "0");
    s += "|gnormall=" + std::string(c.g_norm_over_all ? "1" : "0");
    s += "|damping=" + c.damping;
    return hash_hex(fnv1a64(s));
}

IngestConfig ingest_config(const RunConfig& c) {
    IngestConfig ic;
    ic.format = c.input_format == "tsv" ? IngestConfig::Format::tsv : IngestConfig::Format::jsonl;
    return ic;
}

GiantOptions giant_options(const RunConfig& c) {
    GiantOptions o;
    o.exclude_own_refs = !c.include_own_refs;
    o.isolated_in_n = !c.isolated_excluded;
    o.damping = c.damping == "linear" ? Damping::linear : Damping::delta;
    o.workers = c.workers;
    return o;
}

MetricsOptions metrics_options(const RunConfig& c) {
    MetricsOptions o;
    o.window_t = c.window_t;
    o.g_norm_over_giants = !c.g_norm_over_all;
    o.exclude_self_giants = c.no_self_citations;
    o.workers = c.workers;
    return o;
}

std::vector<std::pair<std::string, std::string>> output_meta(const RunConfig& cfg,
                                                             const Corpus& corpus) {
    return {{"tool_version", kToolVersion},
            {"config", config_hash(cfg)},
            {"corpus", hash_hex(corpus.content_hash())}};
}

void write_meta_comments(std::ostream& os, const RunConfig& cfg, const Corpus& corpus) {
    for (const auto& [k, v] : output_meta(cfg, corpus)) os << "# " << k << "=" << v << "\n";
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write output file: " + path);
    return out;
}

// ---------------------------------------------------------------------------
// Cached stages. Cache file names carry a key hash of (input identity,
// semantic config, stage version); a stale or corrupt file is rebuilt.

Corpus load_corpus_cached(const RunConfig& cfg) {
    if (cfg.corpus_path.empty())
        throw std::runtime_error("no corpus file given (use --corpus PATH)");
    fs::create_directories(cfg.cache_dir);
    std::string key_src = "corpus|stage=" + std::to_string(kStageVersion) +
                          "|format=" + cfg.input_format +
                          "|input=" + hash_hex(hash_file_bytes(cfg.corpus_path));
    std::string path = cfg.cache_dir + "/corpus_" + hash_hex(fnv1a64(key_src)) + ".bin";
    if (fs::exists(path)) {
        try {
            Corpus c = Corpus::load_cache(path);
            std::cout << "stage=ingest status=cache-hit papers=" << c.size() << "\n";
            return c;
        } catch (const std::exception& e) {
            std::cout << "stage=ingest status=cache-invalid reason=\"" << e.what()
                      << "\" action=rebuild\n";
        }
    }
    Corpus c = Corpus::load(cfg.corpus_path, ingest_config(cfg));
    c.save_cache(path);
    std::cout << "stage=ingest status=built papers=" << c.size() << " cache=" << path << "\n";
    return c;
}

void resolve_years(const Corpus& corpus, RunConfig& cfg) {
    if (cfg.year_from == 0) cfg.year_from = corpus.year_min();
    if (cfg.year_to == 0) cfg.year_to = corpus.year_max();
}

std::vector<GiantResult> giants_cached(const RunConfig& cfg, const Corpus& corpus) {
    fs::create_directories(cfg.cache_dir);
    std::string key_src = "giants|stage=" + std::to_string(kStageVersion) +
                          "|corpus=" + hash_hex(corpus.content_hash()) +
                          "|own=" + (cfg.include_own_refs ? "1" : "0") +
                          "|iso=" + (cfg.isolated_excluded ? "1" : "0") +
                          "|yf=" + std::to_string(cfg.year_from) +
                          "|yt=" + std::to_string(cfg.year_to);
    std::string path = cfg.cache_dir + "/giants_" + hash_hex(fnv1a64(key_src)) + ".bin";
    if (fs::exists(path)) {
        try {
            std::vector<GiantResult> res = load_giants_cache(path, corpus);
            std::cout << "stage=giants status=cache-hit focal=" << res.size() << "\n";
            return res;
        } catch (const std::exception& e) {
            std::cout << "stage=giants status=cache-invalid reason=\"" << e.what()
                      << "\" action=rebuild\n";
        }
    }
    auto t0 = std::chrono::steady_clock::now();
    std::vector<GiantResult> res =
        assign_all_giants(corpus, cfg.year_from, cfg.year_to, giant_options(cfg));
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    save_giants_cache(path, res, corpus);
    long long with = 0;
    for (const auto& r : res) with += r.has_giant ? 1 : 0;
    std::cout << "stage=giants status=built focal=" << res.size() << " with_giant=" << with
              << " seconds=" << fmt_double(secs) << " cache=" << path << "\n";
    return res;
}

// ---------------------------------------------------------------------------
// Subcommand bodies.

void write_giants_output(const RunConfig& cfg, const Corpus& corpus,
                         const std::vector<GiantResult>& res) {
    fs::create_directories(cfg.out_dir);
    std::string path = cfg.out_dir + "/giants.tsv";
    std::ofstream out = open_out(path);
    write_meta_comments(out, cfg, corpus);
    write_giant_table(out, res, corpus);
    std::cout << "output=" << path << " rows=" << res.size() << "\n";
}

void write_metrics_output(const RunConfig& cfg, const Corpus& corpus, const MetricsResult& m) {
    fs::create_directories(cfg.out_dir);
    std::string path = cfg.out_dir + (cfg.format == "jsonl" ? "/metrics.jsonl" : "/metrics.tsv");
    std::ofstream out = open_out(path);
    if (cfg.format == "jsonl")
        write_metrics_jsonl(m, corpus, out, output_meta(cfg, corpus));
    else
        write_metrics_tsv(m, corpus, out, output_meta(cfg, corpus));
    std::cout << "output=" << path << " rows=" << m.rows.size() << "\n";
}

void write_analysis_output(const RunConfig& cfg, const Corpus& corpus, AnalysisTable table) {
    fs::create_directories(cfg.out_dir);
    for (const auto& [k, v] : output_meta(cfg, corpus)) table.add_meta(k, v);
    std::string base = cfg.out_dir + "/" + table.name;
    {
        std::ofstream out = open_out(base + ".tsv");
        write_meta_comments(out, cfg, corpus);
        write_table_tsv(table, out);
    }
    {
        std::ofstream out = open_out(base + ".meta.json");
        write_table_meta_json(table, out);
    }
    std::cout << "output=" << base << ".tsv rows=" << table.rows.size() << "\n";
}

struct AnalyzeParams {
    std::string name = "all";
    std::string targets_path;
    std::string venue;
    std::string field;
    long long c_lo = 0;
    long long c_hi = LLONG_MAX;
    int horizon = 10;
    double top_fraction = 0.10;
    double band = 0.20;
    long long min_bin = 5;
};

std::vector<uint32_t> read_target_ids(const Corpus& corpus, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read target id file: " + path);
    std::vector<uint32_t> out;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        auto idx = corpus.find(line);
        if (!idx)
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": target id not in corpus: " + line);
        out.push_back(*idx);
    }
    if (out.empty()) throw std::runtime_error("target id file is empty: " + path);
    return out;
}

void run_analyze(const RunConfig& cfg, const Corpus& corpus,
                 const std::vector<GiantResult>& giants, const MetricsResult& metrics,
                 const AnalyzeParams& p) {
    bool all = p.name == "all";
    auto wants = [&](const char* n) { return all || p.name == n; };

    if (wants("prevalence")) {
        write_analysis_output(cfg, corpus, prevalence_by_year(corpus, giants));
        write_analysis_output(cfg, corpus, prevalence_by_field(corpus, giants));
    }
    if (wants("most-cited"))
        write_analysis_output(cfg, corpus, giant_vs_most_cited(corpus, giants));
    if (wants("conditional")) {
        write_analysis_output(cfg, corpus, conditional_g_given_c(corpus, metrics));
        write_analysis_output(cfg, corpus, g_histogram_by_c(corpus, metrics));
    }
    if (wants("team-size")) {
        write_analysis_output(cfg, corpus, team_size_curves(corpus, metrics));
        write_analysis_output(cfg, corpus, team_size_curves_by_field(corpus, metrics));
    }
    if (wants("disruption"))
        for (AnalysisTable& t : disruption_profile(corpus, metrics, giants))
            write_analysis_output(cfg, corpus, std::move(t));
    if (wants("cohort")) {
        CohortSpec spec;
        spec.venue = p.venue;
        spec.field = p.field;
        spec.c_lo = p.c_lo;
        spec.c_hi = p.c_hi;
        spec.horizon = p.horizon;
        spec.top_fraction = p.top_fraction;
        try {
            write_analysis_output(cfg, corpus, cohort_future_impact(corpus, metrics, spec));
        } catch (const std::exception& e) {
            if (!all) throw;
            std::cout << "analysis=cohort_future_impact status=skipped reason=\"" << e.what()
                      << "\"\n";
        }
    }
    if (wants("matched")) {
        if (p.targets_path.empty()) {
            if (!all)
                throw std::runtime_error("analyze matched requires --targets FILE (one id per line)");
            std::cout << "analysis=matched status=skipped reason=\"no --targets file\"\n";
        } else {
            MatchedCohortOptions mo;
            mo.band = p.band;
            mo.min_bin_count = p.min_bin;
            std::vector<uint32_t> targets = read_target_ids(corpus, p.targets_path);
            for (AnalysisTable& t : matched_cohort_compare(corpus, metrics, targets, mo))
                write_analysis_output(cfg, corpus, std::move(t));
        }
    }
    if (wants("scores")) {
        if (!all) {
            // Importance scores need the per-reference vote structure, which the
            // giants cache does not retain; recompute in memory.
            std::vector<GiantResult> fresh =
                assign_all_giants(corpus, cfg.year_from, cfg.year_to, giant_options(cfg));
            Damping damping = cfg.damping == "linear" ? Damping::linear : Damping::delta;
            AnalysisTable t;
            t.name = "importance_scores";
            t.columns = {"focal_id", "ref_id", "score", "k", "k_max", "w", "w_class_max"};
            for (const GiantResult& r : fresh) {
                if (!r.has_giant) continue;
                for (const ImportanceScore& s : importance_scores(r, damping))
                    t.rows.push_back({corpus.id_of(r.focal), corpus.id_of(s.ref),
                                      fmt_double(s.s), fmt_int(s.k), fmt_int(s.k_max),
                                      fmt_int(static_cast<long long>(s.w)),
                                      fmt_int(static_cast<long long>(s.w_class_max))});
            }
            t.add_meta("damping", cfg.damping);
            write_analysis_output(cfg, corpus, std::move(t));
        }
    }

    static const std::vector<std::string> known = {"all",       "prevalence", "most-cited",
                                                   "conditional", "team-size", "disruption",
                                                   "cohort",    "matched",    "scores"};
    if (std::find(known.begin(), known.end(), p.name) == known.end())
        throw std::runtime_error("unknown analysis name: " + p.name);
}

struct SynthParams {
    std::string config_path;
    std::string out_dir;
    GeneratorConfig gen;
    bool have_ref_dist_flag = false;
    std::string ref_dist = "poisson_shifted";
};

void apply_synth_config_file(GeneratorConfig& g, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read generator config: " + path);
    nlohmann::json j;
    in >> j;
    auto get = [&](const char* key, auto& slot) {
        using T = std::decay_t<decltype(slot)>;
        if (j.contains(key)) slot = j.at(key).get<T>();
    };
    get("n_papers", g.n_papers);
    get("year_from", g.year_from);
    get("year_to", g.year_to);
    get("mean_refs", g.mean_refs);
    get("attachment", g.attachment);
    get("field_count", g.field_count);
    get("venue_count", g.venue_count);
    get("seed", g.seed);
    if (j.contains("ref_dist")) {
        std::string d = j.at("ref_dist").get<std::string>();
        if (d == "fixed")
            g.ref_dist = RefDist::fixed;
        else if (d == "poisson_shifted")
            g.ref_dist = RefDist::poisson_shifted;
        else
            throw std::runtime_error("unknown ref_dist in config: " + d);
    }
    get("self_cite_rate", g.self_cites.rate);
    get("giant_blocks", g.giant_rich.blocks);
    get("boost_factor", g.giant_rich.boost_factor);
    get("base_rate", g.giant_rich.base_rate);
    get("adopters", g.giant_rich.adopters);
    get("target_c5", g.giant_rich.target_c5);
    get("isolated_papers", g.isolated.papers);
    get("orphan_refs", g.isolated.orphan_refs);
    get("isolated_citers", g.isolated.citers);
}

void run_synth(SynthParams& p) {
    if (p.have_ref_dist_flag) {
        if (p.ref_dist == "fixed")
            p.gen.ref_dist = RefDist::fixed;
        else if (p.ref_dist == "poisson_shifted")
            p.gen.ref_dist = RefDist::poisson_shifted;
        else
            throw std::runtime_error("unknown --ref-dist value: " + p.ref_dist);
    }
    SynthResult res = generate(p.gen);
    write_synth_corpus(res, p.gen, p.out_dir);
    std::cout << "stage=synth papers=" << res.rows.size()
              << " giant_blocks=" << res.giant_blocks.size()
              << " self_citations=" << res.self_cites.size()
              << " isolated=" << res.isolated.size()
              << " config=" << hash_hex(generator_config_hash(p.gen)) << " out=" << p.out_dir
              << "\n";
}

int run_oracle_check(const RunConfig& cfg, size_t max_papers) {
    if (cfg.corpus_path.empty())
        throw std::runtime_error("no corpus file given (use --corpus PATH)");
    std::vector<RawPaper> rows = read_raw_rows(cfg.corpus_path, ingest_config(cfg));
    Corpus corpus = Corpus::build(rows, ingest_config(cfg));
    RunConfig local = cfg;
    resolve_years(corpus, local);

    std::vector<GiantResult> pipeline =
        assign_all_giants(corpus, local.year_from, local.year_to, giant_options(local));
    MetricsResult metrics = compute_metrics(corpus, pipeline, metrics_options(local));

    OracleOptions oo;
    oo.max_papers = max_papers;
    oo.exclude_own_refs = !local.include_own_refs;
    oo.year_from = local.year_from;
    oo.year_to = local.year_to;
    OracleResult oracle = oracle_run(rows, oo);

    size_t mismatches = 0;
    auto complain = [&](const std::string& what) {
        if (mismatches < 20) std::cout << "MISMATCH " << what << "\n";
        ++mismatches;
    };

    if (pipeline.size() != oracle.rows.size())
        complain("focal row count: pipeline=" + std::to_string(pipeline.size()) +
                 " oracle=" + std::to_string(oracle.rows.size()));
    size_t n = std::min(pipeline.size(), oracle.rows.size());
    for (size_t i = 0; i < n; ++i) {
        const GiantResult& a = pipeline[i];
        const OracleRow& b = oracle.rows[i];
        const std::string& focal = corpus.id_of(a.focal);
        if (focal != b.focal) {
            complain("row " + std::to_string(i) + " focal order: " + focal + " vs " + b.focal);
            continue;
        }
        if (a.has_giant != b.has_giant)
            complain(focal + " has_giant: " + std::to_string(a.has_giant) + " vs " +
                     std::to_string(b.has_giant));
        else if (a.has_giant && corpus.id_of(a.giant) != b.giant)
            complain(focal + " giant: " + corpus.id_of(a.giant) + " vs " + b.giant);
        if (a.stop_n != b.stop_n)
            complain(focal + " stop_n: " + std::to_string(a.stop_n) + " vs " +
                     std::to_string(b.stop_n));
        if (a.percolation_reached != b.percolation_reached)
            complain(focal + " percolation_reached: " + std::to_string(a.percolation_reached) +
                     " vs " + std::to_string(b.percolation_reached));
    }
    for (const auto& [id, om] : oracle.metrics) {
        auto idx = corpus.find(id);
        if (!idx) {
            complain("oracle metric paper missing from corpus: " + id);
            continue;
        }
        const MetricRow& mr = metrics.rows[*idx];
        if (mr.C != om.C)
            complain(id + " C: " + fmt_int(mr.C) + " vs " + fmt_int(om.C));
        if (mr.G != om.G)
            complain(id + " G: " + fmt_int(mr.G) + " vs " + fmt_int(om.G));
        if (mr.d_defined != om.d_defined || mr.n_i != om.n_i || mr.n_j != om.n_j ||
            mr.n_k != om.n_k)
            complain(id + " disruption counts: (" + fmt_int(mr.n_i) + "," + fmt_int(mr.n_j) + "," +
                     fmt_int(mr.n_k) + ") vs (" + fmt_int(om.n_i) + "," + fmt_int(om.n_j) + "," +
                     fmt_int(om.n_k) + ")");
    }

    std::cout << "oracle-check focal_rows=" << oracle.rows.size()
              << " papers=" << oracle.metrics.size() << " mismatches=" << mismatches
              << (mismatches == 0 ? " status=agree" : " status=DISAGREE") << "\n";
    return mismatches == 0 ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Giant-reference pipeline over citation corpora"};
    app.footer("Exit codes: 0 success, 1 runtime failure, 2 oracle disagreement.");
    app.require_subcommand(1);
    app.fallthrough();

    RunConfig cfg;
    app.add_option("--corpus", cfg.corpus_path, "Input corpus file (JSON lines or TSV)");
    app.add_option("--input-format", cfg.input_format, "Corpus file format: jsonl | tsv")
        ->check(CLI::IsMember({"jsonl", "tsv"}))
        ->capture_default_str();
    app.add_option("--cache-dir", cfg.cache_dir, "Directory for cached stages")
        ->capture_default_str();
    app.add_option("--out-dir", cfg.out_dir, "Directory for output tables")
        ->capture_default_str();
    app.add_option("--year-from", cfg.year_from, "First focal year (0 = corpus minimum)")
        ->capture_default_str();
    app.add_option("--year-to", cfg.year_to, "Last focal year (0 = corpus maximum)")
        ->capture_default_str();
    app.add_option("--window", cfg.window_t, "Window t for C_t / G_t")->capture_default_str();
    app.add_flag("--include-own-refs", cfg.include_own_refs,
                 "Keep the focal paper's own co-citation contribution (default: excluded)");
    app.add_flag("--isolated-excluded", cfg.isolated_excluded,
                 "Drop isolated references from the <k_n> denominator (default: kept)");
    app.add_flag("--no-self-citations", cfg.no_self_citations,
                 "Giant counts skip focal papers sharing an author with their giant");
    app.add_flag("--g-norm-over-all", cfg.g_norm_over_all,
                 "Normalize G over whole (field, year) cohorts instead of G>0 members");
    app.add_option("--damping", cfg.damping, "Importance damping: delta | linear")
        ->check(CLI::IsMember({"delta", "linear"}))
        ->capture_default_str();
    app.add_option("--format", cfg.format, "Metrics export format: tsv | jsonl")
        ->check(CLI::IsMember({"tsv", "jsonl"}))
        ->capture_default_str();
    app.add_option("--workers", cfg.workers, "Worker threads (0 = hardware)")
        ->capture_default_str();

    CLI::App* synth = app.add_subcommand("synth", "Generate a synthetic corpus");
    SynthParams sp;
    // Explicit command-line values win over the config file, which wins over
    // the built-in defaults; overrides are re-applied after loading the file.
    std::vector<std::pair<CLI::Option*, std::function<void(GeneratorConfig&, const GeneratorConfig&)>>>
        synth_overrides;
    auto synth_opt = [&](const char* flag, auto member_ptr, const char* help) {
        auto* opt = synth->add_option(flag, sp.gen.*member_ptr, help);
        synth_overrides.emplace_back(
            opt, [member_ptr](GeneratorConfig& dst, const GeneratorConfig& src) {
                dst.*member_ptr = src.*member_ptr;
            });
        return opt;
    };
    synth->add_option("--config", sp.config_path, "Generator config (JSON)");
    synth->add_option("--out", sp.out_dir, "Output directory")->required();
    synth_opt("--n-papers", &GeneratorConfig::n_papers, "Organic paper count");
    synth_opt("--gen-year-from", &GeneratorConfig::year_from, "First publication year");
    synth_opt("--gen-year-to", &GeneratorConfig::year_to, "Last publication year");
    synth_opt("--mean-refs", &GeneratorConfig::mean_refs, "Mean reference-list length");
    auto* rd = synth->add_option("--ref-dist", sp.ref_dist,
                                 "Reference count distribution: fixed | poisson_shifted");
    synth_opt("--attachment", &GeneratorConfig::attachment, "Preferential-attachment exponent");
    synth_opt("--fields", &GeneratorConfig::field_count, "Number of field labels");
    synth_opt("--venues", &GeneratorConfig::venue_count, "Number of venue labels");
    synth_opt("--seed", &GeneratorConfig::seed, "Generator seed");
    auto synth_sub = [&](CLI::Option* opt, auto getter) {
        synth_overrides.emplace_back(opt,
                                     [getter](GeneratorConfig& dst, const GeneratorConfig& src) {
                                         getter(dst) = getter(const_cast<GeneratorConfig&>(src));
                                     });
    };
    synth_sub(synth->add_option("--self-cite-rate", sp.gen.self_cites.rate,
                                "Fraction of papers copying an author from a reference"),
              [](GeneratorConfig& g) -> double& { return g.self_cites.rate; });
    synth_sub(synth->add_option("--giant-blocks", sp.gen.giant_rich.blocks,
                                "Planted giant-rich blocks"),
              [](GeneratorConfig& g) -> uint32_t& { return g.giant_rich.blocks; });
    synth_sub(synth->add_option("--boost-factor", sp.gen.giant_rich.boost_factor,
                                "Future-citation boost for planted giants"),
              [](GeneratorConfig& g) -> double& { return g.giant_rich.boost_factor; });
    synth_sub(synth->add_option("--base-rate", sp.gen.giant_rich.base_rate,
                                "Control papers' citers per boost-window year"),
              [](GeneratorConfig& g) -> uint32_t& { return g.giant_rich.base_rate; });
    synth_sub(synth->add_option("--adopters", sp.gen.giant_rich.adopters,
                                "Adopter papers per block"),
              [](GeneratorConfig& g) -> uint32_t& { return g.giant_rich.adopters; });
    synth_sub(synth->add_option("--target-c5", sp.gen.giant_rich.target_c5,
                                "Five-year citation count for giants and controls"),
              [](GeneratorConfig& g) -> uint32_t& { return g.giant_rich.target_c5; });
    synth_sub(synth->add_option("--isolated-papers", sp.gen.isolated.papers,
                                "Planted isolated papers"),
              [](GeneratorConfig& g) -> uint32_t& { return g.isolated.papers; });
    synth_sub(synth->add_option("--orphan-refs", sp.gen.isolated.orphan_refs,
                                "References per isolated paper"),
              [](GeneratorConfig& g) -> uint32_t& { return g.isolated.orphan_refs; });
    synth_sub(synth->add_option("--isolated-citers", sp.gen.isolated.citers,
                                "Citers per isolated paper"),
              [](GeneratorConfig& g) -> uint32_t& { return g.isolated.citers; });

    CLI::App* ingest = app.add_subcommand("ingest", "Parse a corpus and build its cache");
    CLI::App* build_cocite =
        app.add_subcommand("build-cocite", "Build and cache a co-citation snapshot");
    int cocite_year = 0;
    build_cocite->add_option("--year", cocite_year, "Snapshot year (0 = corpus maximum)");
    CLI::App* giants_cmd = app.add_subcommand("giants", "Assign giants to focal papers");
    CLI::App* metrics_cmd = app.add_subcommand("metrics", "Per-paper metric table");
    CLI::App* analyze = app.add_subcommand("analyze", "Aggregate analysis tables");
    AnalyzeParams ap;
    analyze->add_option("name", ap.name,
                        "all | prevalence | most-cited | conditional | team-size | disruption | "
                        "cohort | matched | scores")
        ->capture_default_str();
    analyze->add_option("--targets", ap.targets_path, "Target ids, one per line (matched)");
    analyze->add_option("--venue", ap.venue, "Cohort venue filter");
    analyze->add_option("--field", ap.field, "Cohort field filter");
    analyze->add_option("--c-lo", ap.c_lo, "Cohort windowed-citation band, low (inclusive)");
    analyze->add_option("--c-hi", ap.c_hi, "Cohort windowed-citation band, high (inclusive)");
    analyze->add_option("--horizon", ap.horizon, "Cohort trajectory years")->capture_default_str();
    analyze->add_option("--top-fraction", ap.top_fraction, "Cohort top/bottom group size")
        ->capture_default_str();
    analyze->add_option("--band", ap.band, "Matched-cohort relative citation band")
        ->capture_default_str();
    analyze->add_option("--min-bin", ap.min_bin, "Minimum per-bin count for ratio rows")
        ->capture_default_str();
    CLI::App* oracle_cmd =
        app.add_subcommand("oracle-check", "Compare the pipeline against the brute-force oracle");
    size_t oracle_cap = 2000;
    oracle_cmd->add_option("--max-papers", oracle_cap, "Oracle corpus size cap")
        ->capture_default_str();
    CLI::App* all_cmd = app.add_subcommand("all", "ingest -> giants -> metrics -> analyze all");

    CLI11_PARSE(app, argc, argv);

    try {
        if (synth->parsed()) {
            if (!sp.config_path.empty()) {
                GeneratorConfig flag_values = sp.gen;  // CLI values + defaults
                apply_synth_config_file(sp.gen, sp.config_path);
                for (const auto& [opt, apply] : synth_overrides)
                    if (opt->count() > 0) apply(sp.gen, flag_values);
            }
            sp.have_ref_dist_flag = rd->count() > 0;
            run_synth(sp);
            return 0;
        }
        if (ingest->parsed()) {
            Corpus corpus = load_corpus_cached(cfg);
            const IngestStats& s = corpus.stats();
            std::cout << "papers=" << corpus.size() << " years=" << corpus.year_min() << ".."
                      << corpus.year_max()
                      << " eligible=" << eligible_focal_papers(corpus, corpus.year_min(),
                                                               corpus.year_max())
                             .size()
                      << " dangling_refs=" << s.dangling_refs
                      << " future_refs_dropped=" << s.future_refs_dropped
                      << " self_refs_dropped=" << s.self_refs_dropped
                      << " duplicate_refs=" << s.duplicate_refs
                      << " unknown_pub_types=" << s.unknown_pub_types
                      << " corpus=" << hash_hex(corpus.content_hash()) << "\n";
            return 0;
        }
        if (build_cocite->parsed()) {
            Corpus corpus = load_corpus_cached(cfg);
            int year = cocite_year == 0 ? corpus.year_max() : cocite_year;
            std::string key_src = "cocite|stage=" + std::to_string(kStageVersion) +
                                  "|corpus=" + hash_hex(corpus.content_hash()) +
                                  "|year=" + std::to_string(year);
            std::string path = cfg.cache_dir + "/cocite_" + std::to_string(year) + "_" +
                               hash_hex(fnv1a64(key_src)) + ".bin";
            if (fs::exists(path)) {
                try {
                    CocitSnapshot snap = CocitSnapshot::load_cache(path, corpus);
                    std::cout << "stage=build-cocite status=cache-hit year=" << year
                              << " pairs=" << snap.pair_count() << "\n";
                    return 0;
                } catch (const std::exception& e) {
                    std::cout << "stage=build-cocite status=cache-invalid reason=\"" << e.what()
                              << "\" action=rebuild\n";
                }
            }
            auto t0 = std::chrono::steady_clock::now();
            CocitSnapshot snap = CocitSnapshot::build(corpus, year);
            double secs =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            snap.save_cache(path);
            std::cout << "stage=build-cocite status=built year=" << year
                      << " pairs=" << snap.pair_count() << " seconds=" << fmt_double(secs)
                      << " cache=" << path << "\n";
            return 0;
        }

        // The oracle path rebuilds everything from the raw rows on purpose.
        if (oracle_cmd->parsed()) return run_oracle_check(cfg, oracle_cap);

        // The remaining subcommands share the corpus -> giants spine.
        Corpus corpus = load_corpus_cached(cfg);
        resolve_years(corpus, cfg);

        std::vector<GiantResult> giants_res = giants_cached(cfg, corpus);
        if (giants_cmd->parsed()) {
            write_giants_output(cfg, corpus, giants_res);
            return 0;
        }
        MetricsResult metrics = compute_metrics(corpus, giants_res, metrics_options(cfg));
        if (metrics_cmd->parsed()) {
            write_metrics_output(cfg, corpus, metrics);
            return 0;
        }
        if (analyze->parsed()) {
            run_analyze(cfg, corpus, giants_res, metrics, ap);
            return 0;
        }
        if (all_cmd->parsed()) {
            write_giants_output(cfg, corpus, giants_res);
            write_metrics_output(cfg, corpus, metrics);
            AnalyzeParams all_params;
            run_analyze(cfg, corpus, giants_res, metrics, all_params);
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
