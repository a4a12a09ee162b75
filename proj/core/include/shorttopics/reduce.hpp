#pragma once

#include "shorttopics/error.hpp"
#include "shorttopics/matrix.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace shorttopics {

enum class ReductionMethod { none, pca, neighbor_embedding };

const char* to_string(ReductionMethod m) noexcept;
std::optional<ReductionMethod> parse_reduction_method(std::string_view name);

struct ReductionConfig {
    ReductionMethod method = ReductionMethod::pca;
    std::size_t target_dim = 0; // 0 selects the size-based schedule
    std::size_t n_neighbors = 15;
    int epochs = 200;
    std::uint64_t seed = 42;
    Metric metric = Metric::euclidean;
};

/// 100 dimensions below 15,000 points, 20 above.
std::size_t scheduled_target_dim(std::size_t n_points) noexcept;

struct ReducedMatrix {
    Matrix rows;
    std::string method_used;
};

/// Reduces N x D data to N x target_dim. Throws ConfigError when target_dim > D or < 2
/// (method none excepted) and DataError when N < 2 or a row is all-NaN.
ReducedMatrix reduce(const Matrix& x, const ReductionConfig& cfg, Warnings* warnings = nullptr);

/// Principal component projection: mean-centred, components by descending eigenvalue of the
/// sample covariance, each oriented so its largest-magnitude entry is positive.
/// target_dim is capped at N - 1 (with a warning) when N < target_dim.
Matrix pca(const Matrix& x, std::size_t target_dim, Warnings* warnings = nullptr);

struct SigmaResult {
    double sigma = 0.0;
    double rho = 0.0;
    double residual = 0.0; // |sum_i exp(-max(0, d_i - rho)/sigma) - log2(k)|
    bool floored = false;
};

inline constexpr double kSigmaFloor = 1e-3;

/// Bandwidth of the fuzzy neighbor weights for one point: solves
/// sum_i exp(-max(0, d_i - rho)/sigma) = log2(k) by bisection (at most 64 steps), where rho is
/// the smallest distance. Distances must be sorted ascending with length k.
SigmaResult bisect_sigma(std::span<const double> distances, std::size_t n_neighbors, Warnings* warnings = nullptr);

/// Neighbor-embedding layout: exact k-NN graph, fuzzy weights, a+b-ab symmetrisation and
/// seeded stochastic gradient layout with negative sampling.
Matrix neighbor_embedding(const Matrix& x, const ReductionConfig& cfg, std::size_t target_dim,
                          Warnings* warnings = nullptr);

} // namespace shorttopics
