#pragma once

#include "shorttopics/cluster.hpp"
#include "shorttopics/embedding.hpp"
#include "shorttopics/metrics.hpp"
#include "shorttopics/preprocess.hpp"
#include "shorttopics/reduce.hpp"

#include <array>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace shorttopics {

using WordFrequencies = std::vector<std::pair<std::string, std::size_t>>;

struct Topic {
    int id = 0;
    std::vector<std::size_t> members; // indices into the corpus
    std::vector<std::string> name_tokens;
    std::vector<double> name_vector;
    std::vector<double> topic_vector;
    WordFrequencies word_frequencies;
    TopicMetrics metrics;
    std::optional<std::array<double, 2>> map;

    /// Name tokens joined by spaces, or "topic-<id>" when the name is empty.
    std::string label() const;
};

struct Outlier {
    std::size_t index = 0;
    OutlierReason reason = OutlierReason::none;
};

struct TopicSet {
    std::vector<Topic> topics;
    std::vector<Outlier> outliers;
};

/// Corpus-wide inputs that topics are computed from.
struct TopicContext {
    std::span<const TokenizedInquiry> inquiries;
    std::span<const InquiryVector> vectors;
    const EmbeddingStore* store = nullptr;
    SimilarityMode similarity = SimilarityMode::clamp;
};

inline constexpr std::size_t kMaxNameTokens = 5;
inline constexpr double kNameMinDocFraction = 0.2;

/// Top five tokens by document frequency (ties: term frequency, then lexicographic), keeping
/// only those present in at least ceil(0.2 * |members|) member inquiries.
std::vector<std::string> name_topic(std::span<const TokenizedInquiry> inquiries,
                                    std::span<const std::size_t> members);

/// Mean of the in-store name-token vectors; zero vector for an empty name.
std::vector<double> name_vector(std::span<const std::string> name_tokens, const EmbeddingStore& store);

/// Mean of the member inquiry vectors.
std::vector<double> topic_vector(std::span<const InquiryVector> vectors, std::span<const std::size_t> members);

/// Full document-frequency table, descending, ties lexicographic.
WordFrequencies wordcloud_data(std::span<const TokenizedInquiry> inquiries, std::span<const std::size_t> members);

/// Fills name, name vector, topic vector, word frequencies and metrics from the members.
void describe_topic(Topic& topic, const TopicContext& ctx);

/// One topic per cluster that received members; outliers keep their reasons.
TopicSet build_topics(const ClusterResult& clusters, const TopicContext& ctx);

struct MergeOutcome {
    TopicSet topics;
    std::size_t merges = 0; // topics absorbed into another
};

/// Connected components of the graph linking topics whose name vectors have cosine >= threshold;
/// each component becomes one topic (id = smallest constituent id), described once afterwards.
MergeOutcome merge_topics(const TopicSet& topics, double threshold, const TopicContext& ctx);

/// Topic id pairs whose renamed name vectors still reach the merge threshold.
std::vector<std::pair<int, int>> unmerged_pairs(const TopicSet& topics, double threshold);

/// Projects topic vectors to 2-D with the reducer; fewer than two topics leaves the map unset
/// with a warning.
void semantic_map(TopicSet& topics, ReductionConfig reducer, Warnings* warnings = nullptr);

} // namespace shorttopics
