#pragma once

#include "shorttopics/cluster.hpp"
#include "shorttopics/config.hpp"
#include "shorttopics/corpus.hpp"
#include "shorttopics/embedding.hpp"
#include "shorttopics/preprocess.hpp"
#include "shorttopics/topics.hpp"

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace shorttopics {

struct RunCounts {
    std::size_t inquiries = 0;
    std::size_t representable = 0;
    std::size_t low_probability = 0;
    std::size_t too_long = 0;
    std::size_t unrepresentable = 0;
    std::size_t clusters = 0;
    std::size_t topics_before_merge = 0;
    std::size_t topics_after_merge = 0;

    std::size_t outliers() const noexcept { return low_probability + too_long + unrepresentable; }
};

struct StageTiming {
    std::string stage;
    double seconds = 0.0;
};

/// In-memory result of a pipeline run.
struct RunReport {
    PipelineConfig config;       // effective values, including a calibrated threshold
    RunCounts counts;
    Corpus corpus;
    std::vector<TokenizedInquiry> tokenized;
    std::vector<InquiryVector> vectors;
    TopicSet topics;
    std::vector<StageTiming> timings;
    std::vector<std::string> warnings;
};

/// Clustering-stage artifacts, kept for the cluster-only command and debugging dumps.
struct ClusterStage {
    std::vector<std::size_t> points; // corpus indices that were clustered
    Hierarchy hierarchy;
    ClusterResult result;            // over the whole corpus
};

/// An error raised inside a named stage; `kind` mirrors the original exception class.
class StageError : public Error {
public:
    enum class Kind { config, data, internal };

    StageError(std::string stage, Kind kind, const std::string& message)
        : Error("[" + stage + "] " + message), stage_(std::move(stage)), kind_(kind) {}

    const std::string& stage() const noexcept { return stage_; }
    Kind kind() const noexcept { return kind_; }

private:
    std::string stage_;
    Kind kind_;
};

/// load -> preprocess -> embed -> reduce -> cluster -> topics -> metrics, without writing.
RunReport analyze(const PipelineConfig& cfg, ClusterStage* cluster_stage = nullptr);

/// analyze() followed by writing topics.json, metrics.csv and map.svg into cfg.output_dir.
/// Files written before a failure are removed.
RunReport run_pipeline(const PipelineConfig& cfg);

/// Loads corpus, resources and embeddings, augments the store, and writes oov_report.tsv with
/// the top-n tokens still out of vocabulary. Returns the path written.
std::filesystem::path run_oov_report(const PipelineConfig& cfg, std::size_t n);

/// Runs up to clustering and writes clusters.csv, mst.csv and condensed_tree.json.
ClusterStage run_cluster_only(const PipelineConfig& cfg);

} // namespace shorttopics
