#include "shorttopics/metrics.hpp"

#include <algorithm>
#include <vector>

namespace shorttopics {

std::optional<SimilarityMode> parse_similarity_mode(std::string_view name) {
    if (name == "clamp") return SimilarityMode::clamp;
    if (name == "affine") return SimilarityMode::affine;
    return std::nullopt;
}

const char* to_string(SimilarityMode m) noexcept {
    return m == SimilarityMode::clamp ? "clamp" : "affine";
}

namespace {

double bound(double cos, SimilarityMode mode) noexcept {
    if (mode == SimilarityMode::affine) return std::clamp((1.0 + cos) / 2.0, 0.0, 1.0);
    return std::clamp(cos, 0.0, 1.0);
}

} // namespace

double similarity(std::span<const double> u, std::span<const double> v, SimilarityMode mode) noexcept {
    const double nu = norm(u);
    const double nv = norm(v);
    if (nu == 0.0 || nv == 0.0) return 0.0;
    return bound(cosine(u, v), mode);
}

double compactness(const Matrix& members, SimilarityMode mode) {
    const std::size_t n = members.rows();
    if (n == 0) return 0.0;
    if (n == 1) return 1.0;
    // S is symmetric: sum the upper triangle in a fixed order and count it twice.
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) sum += similarity(members.row(i), members.row(j), mode);
    }
    const double pairs = static_cast<double>(n) * static_cast<double>(n - 1);
    return std::clamp(2.0 * sum / pairs, 0.0, 1.0);
}

double saliency(std::span<const double> name_vector, const Matrix& members, SimilarityMode mode) {
    const std::size_t n = members.rows();
    if (n == 0) return 0.0;
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += similarity(name_vector, members.row(i), mode);
    return std::clamp(sum / static_cast<double>(n), 0.0, 1.0);
}

TopicMetrics topic_metrics(std::span<const double> name_vector, const Matrix& members, SimilarityMode mode) {
    TopicMetrics m;
    m.compactness = compactness(members, mode);
    m.saliency = saliency(name_vector, members, mode);
    m.quality = quality(m.compactness, m.saliency);
    return m;
}

} // namespace shorttopics
