// topics: short-inquiry topic discovery from the command line.

#include "shorttopics/config.hpp"
#include "shorttopics/csv.hpp"
#include "shorttopics/pipeline.hpp"
#include "shorttopics/report.hpp"
#include "shorttopics/resources.hpp"
#include "shorttopics/synthetic.hpp"

#include "CLI11.hpp"

#include <fmt/format.h>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

namespace st = shorttopics;

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitData = 2;
constexpr int kExitInternal = 3;

// Flags that map one-to-one onto config keys; dashes become underscores.
const char* const kSettingFlags[] = {
    "corpus",   "corpus-format",    "resources",   "embeddings",          "output",    "reduction",
    "target-dim", "n-neighbors",    "epochs",      "metric",              "min-cluster-size",
    "min-samples", "selection",     "prob-threshold", "target-outlier-frac", "max-chars",
    "merge-threshold", "seed",      "product-stopwords", "oov-mode",      "similarity", "oov-top-n",
};

struct PipelineFlags {
    std::string config_file;
    std::map<std::string, std::string> values;
};

void add_pipeline_flags(CLI::App* cmd, PipelineFlags& flags) {
    cmd->add_option("-c,--config", flags.config_file, "key=value config file")->check(CLI::ExistingFile);
    for (const char* name : kSettingFlags) {
        std::string key = name;
        for (auto& ch : key) ch = ch == '-' ? '_' : ch;
        cmd->add_option_function<std::string>(
            std::string("--") + name, [&flags, key](const std::string& v) { flags.values[key] = v; },
            "overrides '" + key + "'");
    }
}

st::PipelineConfig resolve(const PipelineFlags& flags) {
    st::PipelineConfig cfg = flags.config_file.empty() ? st::PipelineConfig{} : st::load_config(flags.config_file);
    // Stable order so later keys (metric, seed) see earlier ones applied.
    for (const char* name : kSettingFlags) {
        std::string key = name;
        for (auto& ch : key) ch = ch == '-' ? '_' : ch;
        if (const auto it = flags.values.find(key); it != flags.values.end()) st::apply_setting(cfg, key, it->second);
    }
    return cfg;
}

void print_warnings(const std::vector<std::string>& warnings) {
    for (const auto& w : warnings) fmt::print(stderr, "warning: {}\n", w);
}

int cmd_run(const PipelineFlags& flags) {
    const auto cfg = resolve(flags);
    const auto report = st::run_pipeline(cfg);
    print_warnings(report.warnings);
    const auto& c = report.counts;
    fmt::print("{} inquiries, {} topics ({} before merging), {} outliers "
               "(low-probability {}, too-long {}, unrepresentable {}), threshold {:.3g}\n",
               c.inquiries, c.topics_after_merge, c.topics_before_merge, c.outliers(), c.low_probability, c.too_long,
               c.unrepresentable, report.config.cluster.prob_threshold.value_or(0.0));
    for (const auto& t : report.topics.topics) {
        fmt::print("  {:>4}  {:<40}  n={:<5} quality={:.2f}\n", t.id, t.label(), t.members.size(), t.metrics.quality);
    }
    fmt::print("outputs written to {}\n", cfg.output_dir.string());
    return 0;
}

int cmd_oov(const PipelineFlags& flags, std::optional<std::size_t> top_n) {
    const auto cfg = resolve(flags);
    const auto path = st::run_oov_report(cfg, top_n.value_or(cfg.oov_top_n));
    fmt::print("{}\n", path.string());
    return 0;
}

int cmd_cluster_only(const PipelineFlags& flags) {
    const auto cfg = resolve(flags);
    const auto stage = st::run_cluster_only(cfg);
    fmt::print("{} clusters, {} outliers; clusters.csv, mst.csv, condensed_tree.json in {}\n",
               stage.result.n_clusters(), stage.result.n_outliers(), cfg.output_dir.string());
    return 0;
}

int cmd_report_only(const std::string& topics_path, const std::string& output) {
    const auto stored = st::read_topics_json(topics_path);
    const std::filesystem::path out_dir = output.empty() ? std::filesystem::path(topics_path).parent_path() : std::filesystem::path(output);

    std::ostringstream csv;
    st::csv::write_row(csv, {"id", "label", "size", "compactness", "saliency", "quality"});
    std::vector<st::MapEntry> entries;
    for (const auto& t : stored) {
        st::csv::write_row(csv, {std::to_string(t.id), t.label, std::to_string(t.size), fmt::format("{:.6f}", t.compactness),
                                 fmt::format("{:.6f}", t.saliency), fmt::format("{:.6f}", t.quality)});
        if (t.map) entries.push_back({*t.map, t.label, t.size, t.quality});
    }
    st::write_text_file(out_dir / "metrics.csv", csv.str());
    if (entries.empty()) {
        fmt::print(stderr, "warning: no topic coordinates; map.svg not written\n");
    } else {
        st::write_text_file(out_dir / "map.svg", st::render_map_svg(entries));
    }
    fmt::print("{} topics reported in {}\n", stored.size(), out_dir.string());
    return 0;
}

struct SynthFlags {
    st::SyntheticOptions corpus;
    st::SyntheticEmbeddingOptions embeddings;
    std::string output = "synthetic";
};

int cmd_synth(SynthFlags flags) {
    namespace fs = std::filesystem;
    flags.embeddings.seed = flags.corpus.seed + 1;
    const auto data = st::generate_synthetic_corpus(flags.corpus);
    const auto store = st::synthetic_embeddings(data, flags.embeddings);
    const fs::path dir = flags.output;

    st::write_synthetic_workspace(data, store, dir);
    st::write_text_file(dir / "topics.conf", fmt::format("corpus = corpus.jsonl\n"
                                                         "embeddings = embeddings.txt\n"
                                                         "resources = resources\n"
                                                         "output = out\n"
                                                         "min_cluster_size = 5\n"
                                                         "selection = leaf\n"
                                                         "seed = {}\n",
                                                         flags.corpus.seed));
    fmt::print("{} inquiries, {} words of dimension {} in {}\n", data.corpus.size(), store.size(), store.dim(),
               dir.string());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Topic discovery for short free-text inquiries"};
    app.require_subcommand(1);

    PipelineFlags run_flags;
    auto* run = app.add_subcommand("run", "full pipeline: topics.json, metrics.csv, map.svg");
    add_pipeline_flags(run, run_flags);

    PipelineFlags oov_flags;
    std::optional<std::size_t> top_n;
    auto* oov = app.add_subcommand("oov-report", "most frequent out-of-vocabulary tokens");
    add_pipeline_flags(oov, oov_flags);
    oov->add_option("-n,--top-n", top_n, "number of tokens (default: oov_top_n)");

    PipelineFlags cluster_flags;
    auto* cluster = app.add_subcommand("cluster-only", "stop after clustering and dump the hierarchy");
    add_pipeline_flags(cluster, cluster_flags);

    std::string topics_path;
    std::string report_output;
    auto* report = app.add_subcommand("report-only", "re-render metrics.csv and map.svg from topics.json");
    report->add_option("topics", topics_path, "topics.json of an earlier run")->required()->check(CLI::ExistingFile);
    report->add_option("-o,--output", report_output, "output directory (default: next to topics.json)");

    SynthFlags synth_flags;
    auto* synth = app.add_subcommand("synth", "write a labelled synthetic corpus with matching embeddings");
    synth->add_option("--themes", synth_flags.corpus.themes)->capture_default_str();
    synth->add_option("--per-theme", synth_flags.corpus.per_theme)->capture_default_str();
    synth->add_option("--seed", synth_flags.corpus.seed)->capture_default_str();
    synth->add_option("--dim", synth_flags.embeddings.dim)->capture_default_str();
    synth->add_option("--noise-fraction", synth_flags.corpus.noise_fraction)->capture_default_str();
    synth->add_option("--long", synth_flags.corpus.long_inquiries, "inquiries padded past 800 characters")
        ->capture_default_str();
    synth->add_option("-o,--output", synth_flags.output)->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (*run) return cmd_run(run_flags);
        if (*oov) return cmd_oov(oov_flags, top_n);
        if (*cluster) return cmd_cluster_only(cluster_flags);
        if (*report) return cmd_report_only(topics_path, report_output);
        if (*synth) return cmd_synth(synth_flags);
    } catch (const st::StageError& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        switch (e.kind()) {
        case st::StageError::Kind::config: return kExitConfig;
        case st::StageError::Kind::data: return kExitData;
        case st::StageError::Kind::internal: return kExitInternal;
        }
    } catch (const st::ConfigError& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return kExitConfig;
    } catch (const st::DataError& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return kExitData;
    } catch (const std::exception& e) {
        fmt::print(stderr, "internal error: {}\n", e.what());
        return kExitInternal;
    }
    return kExitInternal;
}
