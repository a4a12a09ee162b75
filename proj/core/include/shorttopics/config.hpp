#pragma once

#include "shorttopics/cluster.hpp"
#include "shorttopics/corpus.hpp"
#include "shorttopics/embedding.hpp"
#include "shorttopics/metrics.hpp"
#include "shorttopics/reduce.hpp"

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace shorttopics {

struct PipelineConfig {
    std::filesystem::path corpus_path;
    std::optional<CorpusFormat> corpus_format;
    std::filesystem::path resources_dir;
    std::filesystem::path embeddings_path;
    std::filesystem::path output_dir = "out";
    ReductionConfig reduction;
    ClusterConfig cluster;
    double merge_threshold = 0.9;
    std::uint64_t seed = 42;
    std::vector<std::string> product_stopwords;
    OovMode oov_mode = OovMode::skip;
    SimilarityMode similarity = SimilarityMode::clamp;
    std::size_t oov_top_n = 50;

    /// Throws ConfigError for out-of-range values or missing input paths.
    void validate(bool require_embeddings = true) const;
};

/// Applies one key=value setting. Keys use underscores (min_cluster_size, merge_threshold, ...).
/// Throws ConfigError for unknown keys or unparsable values.
void apply_setting(PipelineConfig& cfg, std::string_view key, std::string_view value);

/// Plain-text config: one key=value per line, '#' comments. Relative paths resolve against
/// the file's directory.
PipelineConfig read_config(std::istream& in, const std::filesystem::path& base_dir = {});
PipelineConfig load_config(const std::filesystem::path& path);

/// Effective settings as ordered key/value strings (for the report's config echo).
std::vector<std::pair<std::string, std::string>> describe_config(const PipelineConfig& cfg);

} // namespace shorttopics
