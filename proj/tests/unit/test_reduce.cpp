#include "catch_amalgamated.hpp"

#include "shorttopics/reduce.hpp"

#include "support.hpp"

#include <cmath>
#include <cstring>

using namespace shorttopics;
using Catch::Approx;

namespace {

double column_variance(const Matrix& m, std::size_t c) {
    double mean = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i) mean += m(i, c);
    mean /= static_cast<double>(m.rows());
    double v = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i) v += (m(i, c) - mean) * (m(i, c) - mean);
    return v / static_cast<double>(m.rows() - 1);
}

bool same_bytes(const Matrix& a, const Matrix& b) {
    return a.rows() == b.rows() && a.cols() == b.cols() &&
           std::memcmp(a.data().data(), b.data().data(), a.data().size() * sizeof(double)) == 0;
}

} // namespace

TEST_CASE("target dimension schedule", "[reduce]") {
    CHECK(scheduled_target_dim(10) == 100);
    CHECK(scheduled_target_dim(14999) == 100);
    CHECK(scheduled_target_dim(15000) == 20);
}

TEST_CASE("method parsing", "[reduce]") {
    CHECK(parse_reduction_method("pca") == ReductionMethod::pca);
    CHECK(parse_reduction_method("none") == ReductionMethod::none);
    CHECK(parse_reduction_method("neighbor-embedding") == ReductionMethod::neighbor_embedding);
    CHECK_FALSE(parse_reduction_method("tsne").has_value());
}

TEST_CASE("method none is the identity", "[reduce]") {
    std::mt19937_64 rng(1);
    const auto x = test_support::random_matrix(10, 4, rng);
    ReductionConfig cfg;
    cfg.method = ReductionMethod::none;
    const auto r = reduce(x, cfg);
    CHECK(r.rows == x);
    CHECK(r.method_used == "none");
}

TEST_CASE("pca of three collinear points matches the hand projection", "[reduce]") {
    const auto x = Matrix::from_rows({{0, 0}, {1, 1}, {2, 2}});
    const auto p = pca(x, 1);
    REQUIRE(p.cols() == 1);
    // Covariance [[1,1],[1,1]]: leading eigenvector (1,1)/sqrt2; centred rows (-1,-1),(0,0),(1,1).
    CHECK(p(0, 0) == Approx(-std::sqrt(2.0)).margin(1e-9));
    CHECK(p(1, 0) == Approx(0.0).margin(1e-9));
    CHECK(p(2, 0) == Approx(std::sqrt(2.0)).margin(1e-9));
}

TEST_CASE("pca to full dimension preserves distances", "[reduce][property]") {
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 5; ++trial) {
        const auto x = test_support::random_matrix(30, 6, rng, -3, 3);
        const auto p = pca(x, 6);
        for (std::size_t i = 0; i < x.rows(); ++i) {
            for (std::size_t j = i + 1; j < x.rows(); ++j) {
                CHECK(euclidean_distance(p.row(i), p.row(j)) ==
                      Approx(euclidean_distance(x.row(i), x.row(j))).margin(1e-9));
            }
        }
    }
}

TEST_CASE("pca variance is non-increasing across components", "[reduce][property]") {
    std::mt19937_64 rng(3);
    auto x = test_support::random_matrix(200, 8, rng);
    for (std::size_t i = 0; i < x.rows(); ++i) {
        for (std::size_t j = 0; j < x.cols(); ++j) x(i, j) *= static_cast<double>(j % 3 + 1);
    }
    const auto p = pca(x, 8);
    for (std::size_t c = 1; c < p.cols(); ++c) CHECK(column_variance(p, c) <= column_variance(p, c - 1) + 1e-12);
}

TEST_CASE("pca sign convention and determinism", "[reduce]") {
    std::mt19937_64 rng(4);
    const auto x = test_support::random_matrix(40, 5, rng);
    CHECK(same_bytes(pca(x, 3), pca(x, 3)));
    // Flipping the input orientation of a column does not change which sign the components take
    // relative to their largest entry, so projecting -x gives -projection.
    Matrix neg = x;
    for (auto& v : neg.data()) v = -v;
    const auto a = pca(x, 3);
    const auto b = pca(neg, 3);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t c = 0; c < a.cols(); ++c) CHECK(b(i, c) == Approx(-a(i, c)).margin(1e-9));
    }
}

TEST_CASE("pca caps the target below the point count", "[reduce]") {
    std::mt19937_64 rng(5);
    const auto x = test_support::random_matrix(4, 10, rng);
    Warnings w;
    const auto p = pca(x, 8, &w);
    CHECK(p.cols() == 3);
    CHECK(w.size() == 1);
}

TEST_CASE("reduce input validation", "[reduce]") {
    std::mt19937_64 rng(6);
    const auto x = test_support::random_matrix(10, 4, rng);
    ReductionConfig cfg;
    cfg.target_dim = 5;
    CHECK_THROWS_AS(reduce(x, cfg), ConfigError);
    cfg.target_dim = 2;
    CHECK_THROWS_AS(reduce(test_support::random_matrix(1, 4, rng), cfg), DataError);
    Matrix bad = x;
    bad(3, 1) = std::nan("");
    CHECK_THROWS_AS(reduce(bad, cfg), DataError);
    cfg.target_dim = 0;
    CHECK(reduce(x, cfg).rows.cols() == 4); // schedule capped at D
}

TEST_CASE("bisect_sigma", "[reduce]") {
    SECTION("all distances equal take the floor") {
        Warnings w;
        const std::vector<double> d{0.5, 0.5, 0.5};
        const auto r = bisect_sigma(d, 3, &w);
        CHECK(r.floored);
        CHECK(r.sigma == kSigmaFloor);
        CHECK(w.size() == 1);
    }
    SECTION("two neighbours at (0, d): converge or floor") {
        const std::vector<double> d{0.0, 0.7};
        const auto r = bisect_sigma(d, 2);
        CHECK((r.residual < 1e-5 || r.floored));
        CHECK(r.sigma >= kSigmaFloor);
    }
    SECTION("residual below tolerance on random inputs") {
        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> u(0.0, 3.0);
        for (int trial = 0; trial < 100; ++trial) {
            std::vector<double> d(15);
            for (auto& v : d) v = u(rng);
            std::sort(d.begin(), d.end());
            const auto r = bisect_sigma(d, 15);
            CHECK(r.sigma > 0.0);
            CHECK((r.residual < 1e-5 || r.floored));
        }
    }
}

TEST_CASE("doubling distances doubles sigma", "[reduce][property]") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0.1, 2.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> d(10);
        for (auto& v : d) v = u(rng);
        std::sort(d.begin(), d.end());
        std::vector<double> d2 = d;
        for (auto& v : d2) v *= 2.0;
        const auto a = bisect_sigma(d, 10);
        const auto b = bisect_sigma(d2, 10);
        if (a.floored || b.floored) continue;
        CHECK(b.sigma == Approx(2.0 * a.sigma).epsilon(1e-6));
    }
}

TEST_CASE("neighbor embedding is seeded and separates blobs", "[reduce]") {
    std::mt19937_64 rng(9);
    std::vector<std::vector<double>> rows;
    for (const auto& p : test_support::blob(std::vector<double>(10, 0.0), 40, 0.2, rng)) rows.push_back(p);
    for (const auto& p : test_support::blob(std::vector<double>(10, 5.0), 40, 0.2, rng)) rows.push_back(p);
    const auto x = Matrix::from_rows(rows);

    ReductionConfig cfg;
    cfg.method = ReductionMethod::neighbor_embedding;
    cfg.target_dim = 2;
    cfg.epochs = 100;
    const auto a = reduce(x, cfg).rows;
    const auto b = reduce(x, cfg).rows;
    CHECK(same_bytes(a, b));
    for (const double v : a.data()) CHECK(std::isfinite(v));

    cfg.seed = 43;
    CHECK_FALSE(same_bytes(a, reduce(x, cfg).rows));

    // Mean within-blob distance is well below the between-blob distance.
    double within = 0.0, between = 0.0;
    std::size_t nw = 0, nb = 0;
    for (std::size_t i = 0; i < 80; ++i) {
        for (std::size_t j = i + 1; j < 80; ++j) {
            const double d = euclidean_distance(a.row(i), a.row(j));
            if ((i < 40) == (j < 40)) {
                within += d;
                ++nw;
            } else {
                between += d;
                ++nb;
            }
        }
    }
    CHECK(within / static_cast<double>(nw) < 0.5 * between / static_cast<double>(nb));
}
