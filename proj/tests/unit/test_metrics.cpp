#include "catch_amalgamated.hpp"

#include "shorttopics/embedding.hpp"
#include "shorttopics/metrics.hpp"

#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <random>

using namespace shorttopics;
using Catch::Approx;

namespace {

// Unit vectors in 3-D with the given pairwise cosines (Cholesky of the Gram matrix); needs |ab| < 1.
Matrix with_cosines(double ab, double ac, double bc) {
    const double c1 = ac;
    const double c2 = (bc - ab * ac) / std::sqrt(1 - ab * ab);
    const double c3 = std::sqrt(1 - c1 * c1 - c2 * c2);
    return Matrix::from_rows({{1, 0, 0}, {ab, std::sqrt(1 - ab * ab), 0}, {c1, c2, c3}});
}

} // namespace

TEST_CASE("bounded similarity", "[metrics]") {
    const std::vector<double> u{1, 2, 3}, o{3, 0, -1}, neg{-1, -2, -3}, zero{0, 0, 0};
    CHECK(similarity(u, u) == Approx(1.0));
    CHECK(similarity(u, o) == 0.0);
    CHECK(similarity(u, neg) == 0.0);
    CHECK(similarity(u, zero) == 0.0);
    CHECK(similarity(zero, zero) == 0.0);
    CHECK(similarity(u, neg, SimilarityMode::affine) == Approx(0.0).margin(1e-15));
    CHECK(similarity(u, o, SimilarityMode::affine) == Approx(0.5));
    CHECK(parse_similarity_mode("affine") == SimilarityMode::affine);
    CHECK_FALSE(parse_similarity_mode("cubic"));
}

TEST_CASE("compactness examples", "[metrics]") {
    CHECK(compactness(Matrix::from_rows({{1, 1}, {1, 1}, {1, 1}})) == Approx(1.0));
    CHECK(compactness(Matrix::from_rows({{1, 0}, {0, 1}})) == 0.0);
    CHECK(compactness(Matrix::from_rows({{3, 4}})) == 1.0);
    // S values {1, 0.25, 0.25}: (2 + 0.5 + 0.5) / 6.
    const double c = std::sqrt(1 - 0.0625);
    CHECK(compactness(Matrix::from_rows({{1, 0}, {1, 0}, {0.25, c}})) == Approx(0.5));
    // S values {0.8, 0, 0.5}: (1.6 + 0 + 1) / 6.
    CHECK(compactness(with_cosines(0.8, 0.0, 0.5)) == Approx(2.6 / 6));
}

TEST_CASE("saliency and quality examples", "[metrics]") {
    const auto members = Matrix::from_rows({{1, 0}, {0, 1}});
    const std::vector<double> t{1, 0};
    CHECK(saliency(t, Matrix::from_rows({{2, 0}, {5, 0}})) == Approx(1.0));
    CHECK(saliency(std::vector<double>{0, 1}, Matrix::from_rows({{2, 0}, {5, 0}})) == 0.0);
    CHECK(saliency(t, members) == Approx(0.5));
    CHECK(saliency(std::vector<double>{0, 0}, members) == 0.0);
    CHECK(quality(1, 1) == 1.0);
    CHECK(quality(0, 0) == 0.0);
    CHECK(quality(1, 0) == 0.5);
    const auto m = topic_metrics(t, members);
    CHECK(m.compactness == 0.0);
    CHECK(m.saliency == Approx(0.5));
    CHECK(m.quality == (m.compactness + m.saliency) / 2);
}

TEST_CASE("metrics match naive oracles", "[metrics][property]") {
    std::mt19937_64 rng(21);
    std::uniform_int_distribution<std::size_t> size(1, 6);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = size(rng);
        const std::size_t d = 2 + trial % 7;
        std::vector<std::vector<double>> q(n, std::vector<double>(d));
        for (auto& row : q) {
            for (auto& x : row) x = g(rng) + (trial % 2 ? 1.0 : 0.0);
        }
        std::vector<double> t(d);
        for (auto& x : t) x = g(rng);
        const auto m = Matrix::from_rows(q);
        const double c = compactness(m), s = saliency(t, m);
        CHECK(c == Approx(oracle::naive_compactness(q)).margin(1e-12));
        CHECK(s == Approx(oracle::naive_saliency(t, q)).margin(1e-12));
        CHECK(c >= 0.0);
        CHECK(c <= 1.0);
        CHECK(s >= 0.0);
        CHECK(s <= 1.0);

        auto shuffled = q;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        const auto p = Matrix::from_rows(shuffled);
        CHECK(compactness(p) == Approx(c).margin(1e-12));
        CHECK(saliency(t, p) == Approx(s).margin(1e-12));
    }
}

TEST_CASE("compactness reaches 1 only for a shared direction", "[metrics][property]") {
    std::mt19937_64 rng(22);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> dir(5);
        for (auto& x : dir) x = u(rng) + 0.01;
        std::vector<std::vector<double>> same;
        for (int i = 0; i < 4; ++i) {
            auto r = dir;
            const double scale = 0.5 + u(rng);
            for (auto& x : r) x *= scale;
            same.push_back(r);
        }
        CHECK(compactness(Matrix::from_rows(same)) == Approx(1.0).margin(1e-12));
        same[2][trial % 5] += 0.2;
        CHECK(compactness(Matrix::from_rows(same)) < 1.0);
    }
}

TEST_CASE("synonym substitution barely moves compactness", "[metrics][property]") {
    std::mt19937_64 rng(23);
    std::normal_distribution<double> g(0.0, 1.0);
    const std::size_t dim = 50, words = 12;
    for (int trial = 0; trial < 20; ++trial) {
        EmbeddingStore store(dim);
        std::vector<double> theme(dim);
        for (auto& x : theme) x = g(rng);
        std::vector<std::vector<double>> base(words);
        for (std::size_t w = 0; w < words; ++w) {
            base[w] = theme;
            for (auto& x : base[w]) x += 0.8 * g(rng);
            store.insert("w" + std::to_string(w), std::span<const double>(base[w]), Provenance::file);
        }
        for (std::size_t w = 0; w < words; ++w) {
            std::vector<double> syn;
            do {
                syn = base[w];
                for (auto& x : syn) x += 0.3 * g(rng) * std::sqrt(dot(base[w], base[w]) / dim);
            } while (cosine(syn, base[w]) < 0.9);
            store.insert("s" + std::to_string(w), std::span<const double>(syn), Provenance::file);
        }

        std::vector<TokenizedInquiry> members;
        std::uniform_int_distribution<std::size_t> pick(0, words - 1);
        for (int i = 0; i < 6; ++i) {
            TokenizedInquiry t{"q" + std::to_string(i), {}, 10};
            for (int k = 0; k < 3; ++k) t.tokens.push_back("w" + std::to_string(pick(rng)));
            members.push_back(t);
        }
        const auto gamma = [&](const std::vector<TokenizedInquiry>& qs) {
            std::vector<std::vector<double>> rows;
            for (const auto& q : qs) rows.push_back(embed_inquiry(q, store).vector);
            return compactness(Matrix::from_rows(rows));
        };
        const double before = gamma(members);
        auto swapped = members;
        for (auto& tok : swapped[trial % 6].tokens) tok[0] = 's';
        CHECK(before - gamma(swapped) < 0.1);
    }
}
