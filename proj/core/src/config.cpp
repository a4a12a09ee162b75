#include "shorttopics/config.hpp"

#include "shorttopics/utf8.hpp"

#include <fmt/format.h>

#include <charconv>
#include <fstream>

namespace shorttopics {

namespace {

std::string trim_copy(std::string_view s) { return std::string(utf8::trim(s)); }

template <typename T>
T parse_integer(std::string_view key, std::string_view value) {
    T out{};
    const auto* end = value.data() + value.size();
    const auto [ptr, ec] = std::from_chars(value.data(), end, out);
    if (ec != std::errc() || ptr != end) throw ConfigError(fmt::format("{}: expected an integer, got '{}'", key, value));
    return out;
}

double parse_double(std::string_view key, std::string_view value) {
    const std::string s(value);
    try {
        std::size_t used = 0;
        const double out = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument("trailing");
        return out;
    } catch (const std::logic_error&) {
        throw ConfigError(fmt::format("{}: expected a number, got '{}'", key, value));
    }
}

Metric parse_metric(std::string_view value) {
    if (value == "euclidean") return Metric::euclidean;
    if (value == "cosine") return Metric::cosine;
    throw ConfigError(fmt::format("metric: expected euclidean or cosine, got '{}'", value));
}

std::vector<std::string> split_list(std::string_view value) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= value.size()) {
        const auto comma = value.find(',', start);
        const auto piece = trim_copy(value.substr(start, comma == std::string_view::npos ? value.npos : comma - start));
        if (!piece.empty()) out.push_back(piece);
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

std::string format_double(double v) { return fmt::format("{}", v); }

} // namespace

void PipelineConfig::validate(bool require_embeddings) const {
    namespace fs = std::filesystem;
    if (corpus_path.empty()) throw ConfigError("corpus path is required");
    if (!fs::exists(corpus_path)) throw ConfigError("corpus not found: " + corpus_path.string());
    if (require_embeddings) {
        if (embeddings_path.empty()) throw ConfigError("embeddings path is required");
        if (!fs::exists(embeddings_path)) throw ConfigError("embeddings not found: " + embeddings_path.string());
    }
    if (!resources_dir.empty() && !fs::is_directory(resources_dir)) {
        throw ConfigError("resources directory not found: " + resources_dir.string());
    }
    if (!(merge_threshold > 0.0 && merge_threshold <= 1.0)) throw ConfigError("merge_threshold must lie in (0, 1]");
    if (reduction.target_dim == 1) throw ConfigError("target_dim must be 0 (automatic) or at least 2");
    if (reduction.n_neighbors < 2) throw ConfigError("n_neighbors must be at least 2");
    if (reduction.epochs < 1) throw ConfigError("epochs must be at least 1");
    cluster.validate();
}

void apply_setting(PipelineConfig& cfg, std::string_view key, std::string_view raw) {
    const std::string value = trim_copy(raw);
    if (key == "corpus") {
        cfg.corpus_path = value;
    } else if (key == "corpus_format") {
        const auto f = parse_corpus_format(value);
        if (!f) throw ConfigError("corpus_format: expected jsonl or csv, got '" + value + "'");
        cfg.corpus_format = f;
    } else if (key == "resources") {
        cfg.resources_dir = value;
    } else if (key == "embeddings") {
        cfg.embeddings_path = value;
    } else if (key == "output") {
        cfg.output_dir = value;
    } else if (key == "reduction") {
        const auto m = parse_reduction_method(value);
        if (!m) throw ConfigError("reduction: expected none, pca or neighbor-embedding, got '" + value + "'");
        cfg.reduction.method = *m;
    } else if (key == "target_dim") {
        cfg.reduction.target_dim = parse_integer<std::size_t>(key, value);
    } else if (key == "n_neighbors") {
        cfg.reduction.n_neighbors = parse_integer<std::size_t>(key, value);
    } else if (key == "epochs") {
        cfg.reduction.epochs = parse_integer<int>(key, value);
    } else if (key == "metric") {
        cfg.reduction.metric = parse_metric(value);
        cfg.cluster.metric = cfg.reduction.metric;
    } else if (key == "min_cluster_size") {
        cfg.cluster.min_cluster_size = parse_integer<std::size_t>(key, value);
    } else if (key == "min_samples") {
        cfg.cluster.min_samples = parse_integer<std::size_t>(key, value);
    } else if (key == "selection") {
        const auto s = parse_selection(value);
        if (!s) throw ConfigError("selection: expected leaf or excess-of-mass, got '" + value + "'");
        cfg.cluster.selection = *s;
    } else if (key == "prob_threshold") {
        if (value == "auto") {
            cfg.cluster.prob_threshold.reset();
        } else {
            cfg.cluster.prob_threshold = parse_double(key, value);
        }
    } else if (key == "target_outlier_frac") {
        cfg.cluster.target_outlier_frac = parse_double(key, value);
    } else if (key == "max_chars") {
        cfg.cluster.max_chars = parse_integer<std::size_t>(key, value);
    } else if (key == "merge_threshold") {
        cfg.merge_threshold = parse_double(key, value);
    } else if (key == "seed") {
        cfg.seed = parse_integer<std::uint64_t>(key, value);
        cfg.reduction.seed = cfg.seed;
    } else if (key == "product_stopwords") {
        cfg.product_stopwords = split_list(value);
    } else if (key == "oov_mode") {
        if (value == "skip") {
            cfg.oov_mode = OovMode::skip;
        } else if (value == "include-zeros" || value == "include_zeros") {
            cfg.oov_mode = OovMode::include_zeros;
        } else {
            throw ConfigError("oov_mode: expected skip or include-zeros, got '" + value + "'");
        }
    } else if (key == "similarity") {
        const auto m = parse_similarity_mode(value);
        if (!m) throw ConfigError("similarity: expected clamp or affine, got '" + value + "'");
        cfg.similarity = *m;
    } else if (key == "oov_top_n") {
        cfg.oov_top_n = parse_integer<std::size_t>(key, value);
    } else {
        throw ConfigError(fmt::format("unknown config key '{}'", key));
    }
}

PipelineConfig read_config(std::istream& in, const std::filesystem::path& base_dir) {
    PipelineConfig cfg;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto body = utf8::trim(line);
        if (body.empty() || body.front() == '#') continue;
        const auto eq = body.find('=');
        if (eq == std::string_view::npos) throw ConfigError(fmt::format("config line {}: expected key=value", lineno));
        const auto key = trim_copy(body.substr(0, eq));
        try {
            apply_setting(cfg, key, body.substr(eq + 1));
        } catch (const ConfigError& e) {
            throw ConfigError(fmt::format("config line {}: {}", lineno, e.what()));
        }
    }
    if (!base_dir.empty()) {
        for (auto* p : {&cfg.corpus_path, &cfg.resources_dir, &cfg.embeddings_path, &cfg.output_dir}) {
            if (!p->empty() && p->is_relative()) *p = base_dir / *p;
        }
    }
    return cfg;
}

PipelineConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    return read_config(in, path.parent_path());
}

std::vector<std::pair<std::string, std::string>> describe_config(const PipelineConfig& cfg) {
    std::vector<std::pair<std::string, std::string>> out;
    const auto add = [&](std::string key, std::string value) { out.emplace_back(std::move(key), std::move(value)); };
    add("corpus", cfg.corpus_path.generic_string());
    add("embeddings", cfg.embeddings_path.generic_string());
    add("resources", cfg.resources_dir.generic_string());
    add("reduction", to_string(cfg.reduction.method));
    add("target_dim", std::to_string(cfg.reduction.target_dim));
    add("n_neighbors", std::to_string(cfg.reduction.n_neighbors));
    add("epochs", std::to_string(cfg.reduction.epochs));
    add("metric", cfg.cluster.metric == Metric::euclidean ? "euclidean" : "cosine");
    add("min_cluster_size", std::to_string(cfg.cluster.min_cluster_size));
    add("min_samples", std::to_string(cfg.cluster.effective_min_samples()));
    add("selection", to_string(cfg.cluster.selection));
    add("prob_threshold", cfg.cluster.prob_threshold ? format_double(*cfg.cluster.prob_threshold) : "auto");
    add("target_outlier_frac", format_double(cfg.cluster.target_outlier_frac));
    add("max_chars", std::to_string(cfg.cluster.max_chars));
    add("merge_threshold", format_double(cfg.merge_threshold));
    add("seed", std::to_string(cfg.seed));
    std::string stop;
    for (const auto& w : cfg.product_stopwords) stop += (stop.empty() ? "" : ",") + w;
    add("product_stopwords", stop);
    add("oov_mode", cfg.oov_mode == OovMode::skip ? "skip" : "include-zeros");
    add("similarity", to_string(cfg.similarity));
    add("oov_top_n", std::to_string(cfg.oov_top_n));
    return out;
}

} // namespace shorttopics
