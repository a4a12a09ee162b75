#include "shorttopics/reduce.hpp"

#include <Eigen/Dense>

#include <algorithm>

#include <cmath>
#include <limits>

namespace shorttopics {

const char* to_string(ReductionMethod m) noexcept {
    switch (m) {
    case ReductionMethod::none: return "none";
    case ReductionMethod::pca: return "pca";
    case ReductionMethod::neighbor_embedding: return "neighbor-embedding";
    }
    return "unknown";
}

std::optional<ReductionMethod> parse_reduction_method(std::string_view name) {
    if (name == "none") return ReductionMethod::none;
    if (name == "pca") return ReductionMethod::pca;
    if (name == "neighbor-embedding" || name == "umap") return ReductionMethod::neighbor_embedding;
    return std::nullopt;
}

std::size_t scheduled_target_dim(std::size_t n_points) noexcept { return n_points < 15000 ? 100 : 20; }

Matrix pca(const Matrix& x, std::size_t target_dim, Warnings* warnings) {
    const std::size_t n = x.rows();
    const std::size_t d = x.cols();
    if (target_dim > d) {
        throw ConfigError("pca target dimension " + std::to_string(target_dim) + " exceeds input dimension " +
                          std::to_string(d));
    }
    if (n < 2) throw DataError("pca needs at least 2 points");
    if (n < target_dim) {
        warn(warnings, "pca: only " + std::to_string(n) + " points; target dimension capped at " +
                           std::to_string(n - 1));
        target_dim = n - 1;
    }

    using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    Eigen::Map<const RowMajor> data(x.data().data(), static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
    const Eigen::RowVectorXd mean = data.colwise().mean();
    const Eigen::MatrixXd centered = data.rowwise() - mean;
    const Eigen::MatrixXd cov = (centered.transpose() * centered) / static_cast<double>(n - 1);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
    if (solver.info() != Eigen::Success) throw DataError("pca: eigen-decomposition failed");

    // Eigenvalues come ascending; take the largest first.
    Eigen::MatrixXd components(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(target_dim));
    for (std::size_t c = 0; c < target_dim; ++c) {
        Eigen::VectorXd v = solver.eigenvectors().col(static_cast<Eigen::Index>(d - 1 - c));
        Eigen::Index arg = 0;
        for (Eigen::Index i = 1; i < v.size(); ++i) {
            if (std::abs(v(i)) > std::abs(v(arg))) arg = i;
        }
        if (v(arg) < 0) v = -v;
        components.col(static_cast<Eigen::Index>(c)) = v;
    }

    const Eigen::MatrixXd projected = centered * components;
    Matrix out(n, target_dim);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < target_dim; ++j) {
            out(i, j) = projected(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        }
    }
    return out;
}

SigmaResult bisect_sigma(std::span<const double> distances, std::size_t n_neighbors, Warnings* warnings) {
    SigmaResult result;
    if (distances.empty()) {
        result.sigma = kSigmaFloor;
        result.floored = true;
        return result;
    }
    const double rho = distances.front();
    result.rho = rho;
    const double target = std::log2(static_cast<double>(n_neighbors));

    const auto psum = [&](double sigma) {
        double s = 0.0;
        for (const double dist : distances) s += std::exp(-std::max(0.0, dist - rho) / sigma);
        return s;
    };

    const bool degenerate = std::all_of(distances.begin(), distances.end(), [&](double v) { return v == rho; });
    if (degenerate) {
        warn(warnings, "bisect_sigma: all neighbor distances equal; sigma floored");
        result.sigma = kSigmaFloor;
        result.floored = true;
        result.residual = std::abs(psum(kSigmaFloor) - target);
        return result;
    }

    constexpr double kTolerance = 1e-9;
    double lo = 0.0;
    double hi = std::numeric_limits<double>::infinity();
    double mid = 1.0;
    double residual = std::numeric_limits<double>::infinity();
    for (int iter = 0; iter < 64; ++iter) {
        const double s = psum(mid);
        residual = std::abs(s - target);
        if (residual < kTolerance) break;
        if (s > target) {
            hi = mid;
            mid = (lo + hi) / 2.0;
        } else {
            lo = mid;
            mid = std::isinf(hi) ? mid * 2.0 : (lo + hi) / 2.0;
        }
    }
    result.sigma = mid;
    result.residual = std::abs(psum(mid) - target);
    if (!(mid >= kSigmaFloor)) {
        warn(warnings, "bisect_sigma: bandwidth below floor; sigma floored");
        result.sigma = kSigmaFloor;
        result.floored = true;
        result.residual = std::abs(psum(kSigmaFloor) - target);
    }
    return result;
}

ReducedMatrix reduce(const Matrix& x, const ReductionConfig& cfg, Warnings* warnings) {
    if (x.rows() < 2) throw DataError("reduce needs at least 2 points, got " + std::to_string(x.rows()));
    for (std::size_t i = 0; i < x.rows(); ++i) {
        const auto r = x.row(i);
        if (!std::all_of(r.begin(), r.end(), [](double v) { return std::isfinite(v); })) {
            throw DataError("reduce: row " + std::to_string(i) + " has non-finite values");
        }
    }
    if (cfg.method == ReductionMethod::none) return {x, "none"};

    std::size_t target = cfg.target_dim;
    if (target == 0) target = std::min(scheduled_target_dim(x.rows()), x.cols());
    if (target > x.cols()) {
        throw ConfigError("target dimension " + std::to_string(target) + " exceeds input dimension " +
                          std::to_string(x.cols()));
    }
    if (target < 2 && x.cols() >= 2) throw ConfigError("target dimension must be at least 2");

    if (cfg.method == ReductionMethod::pca) return {pca(x, target, warnings), "pca"};
    return {neighbor_embedding(x, cfg, target, warnings), "neighbor-embedding"};
}

} // namespace shorttopics
