#pragma once

#include "shorttopics/matrix.hpp"

#include <optional>
#include <span>
#include <string_view>

namespace shorttopics {

enum class SimilarityMode {
    clamp,  // max(0, cosine)
    affine, // (1 + cosine) / 2
};

std::optional<SimilarityMode> parse_similarity_mode(std::string_view name);
const char* to_string(SimilarityMode m) noexcept;

/// Bounded similarity in [0, 1]; 0 when either vector is zero.
double similarity(std::span<const double> u, std::span<const double> v,
                  SimilarityMode mode = SimilarityMode::clamp) noexcept;

/// Semantic compactness: mean similarity over ordered pairs of distinct members.
/// A single member is maximally compact (1).
double compactness(const Matrix& members, SimilarityMode mode = SimilarityMode::clamp);

/// Name saliency: mean similarity between the name vector and each member.
double saliency(std::span<const double> name_vector, const Matrix& members,
                SimilarityMode mode = SimilarityMode::clamp);

inline double quality(double compactness, double saliency) noexcept { return (compactness + saliency) / 2.0; }

struct TopicMetrics {
    double compactness = 0.0;
    double saliency = 0.0;
    double quality = 0.0;
};

TopicMetrics topic_metrics(std::span<const double> name_vector, const Matrix& members,
                           SimilarityMode mode = SimilarityMode::clamp);

} // namespace shorttopics
