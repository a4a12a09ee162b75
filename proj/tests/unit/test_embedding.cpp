#include "catch_amalgamated.hpp"

#include "shorttopics/embedding.hpp"

#include <random>
#include <sstream>

using namespace shorttopics;
using Catch::Approx;

namespace {

EmbeddingStore parse(const std::string& text, Warnings* w = nullptr) {
    std::istringstream in(text);
    return read_embeddings(in, "mem", w);
}

TokenizedInquiry tokens(std::vector<std::string> t) { return {"q", std::move(t), 0}; }

std::vector<double> vec(const EmbeddingStore& s, const std::string& tok) { return to_double(s.find(tok)); }

} // namespace

TEST_CASE("word-vector text format", "[embedding]") {
    const auto s = parse("2 2\na 1 0\nb 0 1\n");
    CHECK(s.dim() == 2);
    CHECK(s.size() == 2);
    CHECK(vec(s, "a") == std::vector<double>{1, 0});
    CHECK(vec(s, "b") == std::vector<double>{0, 1});
    CHECK(s.provenance("a") == Provenance::file);
    CHECK(s.find("zzz").empty());
}

TEST_CASE("loader errors", "[embedding]") {
    CHECK_THROWS_WITH(parse("2 2\na 1 0 5\nb 0 1\n"), Catch::Matchers::ContainsSubstring("mem:2"));
    CHECK_THROWS_AS(parse("2 2\na 1 x\nb 0 1\n"), DataError);
    CHECK_THROWS_AS(parse("3 2\na 1 0\nb 0 1\n"), DataError);
    CHECK_THROWS_AS(parse("1 2\na 1 0\nb 0 1\n"), DataError);
    CHECK_THROWS_AS(parse("garbage\n"), DataError);
    CHECK_THROWS_AS(parse("1 2\na nan 0\n"), DataError);
}

TEST_CASE("duplicate tokens keep the first vector and warn", "[embedding]") {
    Warnings w;
    const auto s = parse("2 2\na 1 0\na 0 1\n", &w);
    CHECK(vec(s, "a") == std::vector<double>{1, 0});
    CHECK(w.size() == 1);
}

TEST_CASE("write then read round trip", "[embedding]") {
    const auto s = parse("3 3\nx 0.25 -1.5 3\ny 1e-3 2 0\nz 0 0 1\n");
    std::ostringstream out;
    write_embeddings(s, out);
    const auto back = parse(out.str());
    for (const auto& t : s.tokens()) CHECK(vec(back, t) == vec(s, t));
}

TEST_CASE("detect_top_oov ranks by document frequency", "[embedding]") {
    const auto s = parse("1 2\nok 1 0\n");
    std::vector<TokenizedInquiry> corpus;
    for (int i = 0; i < 5; ++i) corpus.push_back(tokens({"redos", "ok", "redos"}));
    for (int i = 0; i < 2; ++i) corpus.push_back(tokens({"xyz"}));
    const auto top = detect_top_oov(corpus, s, 10);
    REQUIRE(top.size() == 2);
    CHECK(top[0] == std::pair<std::string, std::size_t>{"redos", 5});
    CHECK(top[1] == std::pair<std::string, std::size_t>{"xyz", 2});
    CHECK(detect_top_oov(corpus, s, 1).size() == 1);
    CHECK(detect_top_oov(corpus, s, 0).empty());
    CHECK(detect_top_oov({corpus.begin(), corpus.begin() + 0}, s, 3).empty());
    CHECK(detect_top_oov(std::vector<TokenizedInquiry>{tokens({"ok"})}, s, 3).empty());
}

TEST_CASE("definitions are embedded through their phrase", "[embedding]") {
    const auto base = parse("4 3\ndose 1 0 0\noptimization 0 1 0\nstudy 0 0 1\nrash 1 1 1\n");
    const auto s = augment_with_definitions(base, {{"redos", "dose optimization study"}, {"itch", "rash"}});
    // The term is stored under its normalized token so inquiry text finds it.
    const auto key = lemmatize("redos");
    REQUIRE(s.contains(key));
    CHECK(s.provenance(key) == Provenance::oov_definition);
    const auto v = vec(s, key);
    for (const double x : v) CHECK(x == Approx(1.0 / 3.0).epsilon(1e-6));
    CHECK(vec(s, "itch") == vec(s, "rash"));
    CHECK(cosine(vec(s, "itch"), vec(s, "rash")) == Approx(1.0));
}

TEST_CASE("definitions never overwrite file vectors and reject fully OOV phrases", "[embedding]") {
    const auto base = parse("2 2\nrash 1 0\nskin 0 1\n");
    const auto s = augment_with_definitions(base, {{"rash", "skin"}});
    CHECK(vec(s, "rash") == std::vector<double>{1, 0});
    CHECK(s.provenance("rash") == Provenance::file);
    CHECK_THROWS_WITH(augment_with_definitions(base, {{"qwerty", "nothing known here"}}),
                      Catch::Matchers::ContainsSubstring("qwerty"));
}

TEST_CASE("trade names map to their preferred name or the generic fallback", "[embedding]") {
    const auto base = parse("5 2\nregorafenib 0.6 0.8\npharmaceutical 1 0\nmedication 0 1\ndrug 1 1\nstivarga 9 9\n");
    const auto s = augment_with_trade_names(base, {{"nexavar", "regorafenib"}, {"plainbrand", ""}, {"odd", "unknownword"},
                                                   {"stivarga", "regorafenib"}});
    CHECK(vec(s, "nexavar") == vec(s, "regorafenib"));
    CHECK(s.provenance("nexavar") == Provenance::trade_name);
    const auto fb = vec(s, "plainbrand");
    CHECK(fb[0] == Approx(2.0 / 3.0).epsilon(1e-6));
    CHECK(fb[1] == Approx(2.0 / 3.0).epsilon(1e-6));
    CHECK(vec(s, "odd") == fb);
    CHECK(vec(s, "stivarga") == std::vector<double>{9, 9}); // already in the file

    const auto bare = parse("1 2\nregorafenib 1 0\n");
    CHECK_NOTHROW(augment_with_trade_names(bare, {{"stivarga", "regorafenib"}}));
    CHECK_THROWS_AS(augment_with_trade_names(bare, {{"plainbrand", ""}}), ConfigError);
}

TEST_CASE("inquiry vectors average covered tokens", "[embedding]") {
    const auto s = parse("2 2\na 1 0\nb 0 1\n");
    const auto ab = embed_inquiry(tokens({"a", "b"}), s);
    CHECK(ab.vector == std::vector<double>{0.5, 0.5});
    CHECK(ab.representable);

    const auto az = embed_inquiry(tokens({"a", "zzz"}), s);
    CHECK(az.vector == std::vector<double>{1, 0});
    CHECK(az.covered_tokens == 1);
    CHECK(az.total_tokens == 2);

    const auto zeros = embed_inquiry(tokens({"a", "zzz"}), s, OovMode::include_zeros);
    CHECK(zeros.vector == std::vector<double>{0.5, 0});

    const auto none = embed_inquiry(tokens({"zzz", "yyy"}), s);
    CHECK_FALSE(none.representable);
    CHECK(none.vector == std::vector<double>{0, 0});
    CHECK_FALSE(embed_inquiry(tokens({}), s).representable);
}

TEST_CASE("mean pooling properties", "[embedding][property]") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g;
    EmbeddingStore s(8);
    std::vector<std::string> vocab;
    for (int i = 0; i < 20; ++i) {
        std::vector<double> v(8);
        for (auto& x : v) x = g(rng);
        vocab.push_back("w" + std::to_string(i));
        s.insert(vocab.back(), std::span<const double>(v), Provenance::file);
    }
    std::vector<double> same(8, 0.125);
    s.insert("same", std::span<const double>(same), Provenance::file);
    CHECK(embed_inquiry(tokens({"same", "same", "same"}), s).vector == std::vector<double>(8, 0.125));

    for (int trial = 0; trial < 50; ++trial) {
        std::vector<std::string> t;
        for (int i = 0; i < 6; ++i) t.push_back(vocab[std::uniform_int_distribution<std::size_t>(0, 19)(rng)]);
        const auto a = embed_inquiry(tokens(t), s);
        std::shuffle(t.begin(), t.end(), rng);
        const auto b = embed_inquiry(tokens(t), s);
        for (std::size_t d = 0; d < 8; ++d) CHECK(a.vector[d] == Approx(b.vector[d]).margin(1e-12));
        CHECK(embed_inquiry(tokens(t), s).vector == b.vector);
    }
}

TEST_CASE("cosine", "[embedding]") {
    CHECK(cosine(std::vector<double>{1, 0}, std::vector<double>{0, 1}) == 0.0);
    CHECK(cosine(std::vector<double>{2, 0}, std::vector<double>{1, 0}) == Approx(1.0));
    CHECK(cosine(std::vector<double>{1, 0}, std::vector<double>{-1, 0}) == Approx(-1.0));
    CHECK(cosine(std::vector<double>{0, 0}, std::vector<double>{1, 0}) == 0.0);
    const std::vector<double> u{0.3, -2, 5}, v{1, 1, -0.5};
    CHECK(cosine(u, v) == cosine(v, u));
    CHECK(cosine(u, u) == Approx(1.0));
}

TEST_CASE("most_similar", "[embedding]") {
    const auto s = parse("3 2\na 1 0\nb 0.9 0.1\nc 0 1\n");
    const auto top = most_similar(s, "a", 1);
    REQUIRE(top.size() == 1);
    CHECK(top[0].first == "b");
    // brute force: 0.9 / sqrt(0.82)
    CHECK(top[0].second == Approx(0.9 / std::sqrt(0.82)).epsilon(1e-6));
    CHECK(most_similar(s, "a", 5).size() == 2);
    CHECK_THROWS_AS(most_similar(s, "zzz", 1), DataError);
}
