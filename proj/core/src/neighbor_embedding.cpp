#include "shorttopics/reduce.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>

namespace shorttopics {

namespace {

// Curve parameters for spread 1, min_dist 0.1.
constexpr double kA = 1.576943460405378;
constexpr double kB = 0.8950608781227859;
constexpr double kNegativeRate = 5.0;
constexpr double kClip = 4.0;

struct Neighbors {
    std::vector<std::size_t> index;
    std::vector<double> distance;
};

std::vector<Neighbors> exact_knn(const Matrix& x, std::size_t k, Metric metric) {
    const std::size_t n = x.rows();
    std::vector<Neighbors> out(n);
    std::vector<std::pair<double, std::size_t>> candidates;
    candidates.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        candidates.clear();
        for (std::size_t j = 0; j < n; ++j) {
            if (j != i) candidates.emplace_back(distance(x.row(i), x.row(j), metric), j);
        }
        std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(k), candidates.end());
        for (std::size_t m = 0; m < k; ++m) {
            out[i].index.push_back(candidates[m].second);
            out[i].distance.push_back(candidates[m].first);
        }
    }
    return out;
}

double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * (1.0 / 9007199254740992.0);
}

std::size_t uniform_index(std::mt19937_64& rng, std::size_t n) {
    return static_cast<std::size_t>(uniform01(rng) * static_cast<double>(n)) % n;
}

double clip(double v) { return std::clamp(v, -kClip, kClip); }

} // namespace

Matrix neighbor_embedding(const Matrix& x, const ReductionConfig& cfg, std::size_t target_dim, Warnings* warnings) {
    const std::size_t n = x.rows();
    const std::size_t k = std::min(std::max<std::size_t>(cfg.n_neighbors, 2), n - 1);
    const auto knn = exact_knn(x, k, cfg.metric);

    // Fuzzy membership strengths, then a + b - ab symmetrisation.
    std::map<std::pair<std::size_t, std::size_t>, std::pair<double, double>> pairs;
    std::size_t floored = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto sigma = bisect_sigma(knn[i].distance, k, nullptr);
        if (sigma.floored) ++floored;
        for (std::size_t m = 0; m < k; ++m) {
            const std::size_t j = knn[i].index[m];
            const double w = std::exp(-std::max(0.0, knn[i].distance[m] - sigma.rho) / sigma.sigma);
            auto& slot = pairs[{std::min(i, j), std::max(i, j)}];
            (i < j ? slot.first : slot.second) = w;
        }
    }
    if (floored > 0) warn(warnings, "neighbor-embedding: " + std::to_string(floored) + " bandwidths floored");

    struct WeightedEdge {
        std::size_t head;
        std::size_t tail;
        double weight;
    };
    std::vector<WeightedEdge> edges;
    edges.reserve(pairs.size());
    double max_weight = 0.0;
    for (const auto& [key, w] : pairs) {
        const double sym = w.first + w.second - w.first * w.second;
        if (sym <= 0.0) continue;
        edges.push_back({key.first, key.second, sym});
        max_weight = std::max(max_weight, sym);
    }

    // Deterministic initialisation from the leading principal components, scaled to [-10, 10].
    Matrix y = pca(x, std::min(target_dim, x.cols()), nullptr);
    if (y.cols() < target_dim) {
        Matrix padded(n, target_dim);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < y.cols(); ++j) padded(i, j) = y(i, j);
        }
        y = std::move(padded);
    }
    double max_abs = 0.0;
    for (const double v : y.data()) max_abs = std::max(max_abs, std::abs(v));
    std::mt19937_64 rng(cfg.seed);
    for (double& v : y.data()) {
        v = (max_abs > 0.0 ? v * (10.0 / max_abs) : 0.0) + (uniform01(rng) - 0.5) * 1e-4;
    }

    const int epochs = std::max(cfg.epochs, 1);
    std::vector<double> epochs_per_sample(edges.size());
    std::vector<double> next_sample(edges.size());
    std::vector<double> next_negative(edges.size());
    for (std::size_t e = 0; e < edges.size(); ++e) {
        epochs_per_sample[e] = max_weight / edges[e].weight;
        next_sample[e] = epochs_per_sample[e];
        next_negative[e] = epochs_per_sample[e] / kNegativeRate;
    }

    const std::size_t dim = target_dim;
    for (int epoch = 1; epoch <= epochs; ++epoch) {
        const double alpha = 1.0 - static_cast<double>(epoch - 1) / static_cast<double>(epochs);
        for (std::size_t e = 0; e < edges.size(); ++e) {
            if (next_sample[e] > epoch) continue;
            auto head = y.row(edges[e].head);
            auto tail = y.row(edges[e].tail);

            double d2 = 0.0;
            for (std::size_t c = 0; c < dim; ++c) d2 += (head[c] - tail[c]) * (head[c] - tail[c]);
            if (d2 > 0.0) {
                const double coef = (-2.0 * kA * kB * std::pow(d2, kB - 1.0)) / (1.0 + kA * std::pow(d2, kB));
                for (std::size_t c = 0; c < dim; ++c) {
                    const double g = clip(coef * (head[c] - tail[c])) * alpha;
                    head[c] += g;
                    tail[c] -= g;
                }
            }

            const auto n_neg = static_cast<std::size_t>((epoch - next_negative[e]) / (epochs_per_sample[e] / kNegativeRate));
            for (std::size_t s = 0; s < n_neg; ++s) {
                const std::size_t other = uniform_index(rng, n);
                if (other == edges[e].head) continue;
                auto neg = y.row(other);
                double nd2 = 0.0;
                for (std::size_t c = 0; c < dim; ++c) nd2 += (head[c] - neg[c]) * (head[c] - neg[c]);
                if (nd2 <= 0.0) continue;
                const double coef = (2.0 * kB) / ((0.001 + nd2) * (1.0 + kA * std::pow(nd2, kB)));
                for (std::size_t c = 0; c < dim; ++c) head[c] += clip(coef * (head[c] - neg[c])) * alpha;
            }
            next_sample[e] += epochs_per_sample[e];
            next_negative[e] += static_cast<double>(n_neg) * (epochs_per_sample[e] / kNegativeRate);
        }
    }
    return y;
}

} // namespace shorttopics
