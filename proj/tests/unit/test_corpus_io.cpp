#include "catch_amalgamated.hpp"

#include "shorttopics/corpus.hpp"
#include "shorttopics/resources.hpp"
#include "shorttopics/synthetic.hpp"

#include "support.hpp"

#include <map>
#include <sstream>

using namespace shorttopics;
using Catch::Matchers::ContainsSubstring;
using test_support::TempDir;

namespace {

Corpus parse(const std::string& text, CorpusFormat format) {
    std::istringstream in(text);
    return read_corpus(in, format, "mem");
}

} // namespace

TEST_CASE("jsonl corpus loads a single record", "[corpus]") {
    const auto c = parse(R"({"id":"a","text":"can I take it with food","product":"P"})" "\n", CorpusFormat::jsonl);
    REQUIRE(c.size() == 1);
    CHECK(c.product == "P");
    CHECK(c.inquiries[0].id == "a");
    CHECK(c.inquiries[0].text == "can I take it with food");
    CHECK_FALSE(c.inquiries[0].received_at.has_value());
}

TEST_CASE("jsonl keeps input order, trims text and reads received_at", "[corpus]") {
    const auto c = parse(R"({"id":"b","text":"  second  ","product":"P","received_at":"2021-03-04"})"
                         "\n\n"
                         R"({"id":"a","text":"first","product":"P"})"
                         "\n",
                         CorpusFormat::jsonl);
    REQUIRE(c.size() == 2);
    CHECK(c.inquiries[0].id == "b");
    CHECK(c.inquiries[0].text == "second");
    CHECK(c.inquiries[0].received_at == std::optional<std::string>("2021-03-04"));
    CHECK(c.inquiries[1].id == "a");
}

TEST_CASE("duplicate ids are rejected with a line number", "[corpus]") {
    const std::string text = R"({"id":"a","text":"x","product":"P"})"
                             "\n"
                             R"({"id":"a","text":"y","product":"P"})"
                             "\n";
    CHECK_THROWS_MATCHES(parse(text, CorpusFormat::jsonl), DataError,
                         Catch::Matchers::MessageMatches(ContainsSubstring("duplicate id") && ContainsSubstring(":2")));
}

TEST_CASE("malformed and invalid records fail with located errors", "[corpus]") {
    CHECK_THROWS_MATCHES(parse("{\"id\":\"a\",\n", CorpusFormat::jsonl), DataError,
                         Catch::Matchers::MessageMatches(ContainsSubstring("mem:1")));
    CHECK_THROWS_AS(parse(R"({"id":"a","text":"   ","product":"P"})", CorpusFormat::jsonl), DataError);
    CHECK_THROWS_AS(parse(R"({"id":"","text":"x","product":"P"})", CorpusFormat::jsonl), DataError);
    CHECK_THROWS_AS(parse(R"({"id":"a","product":"P"})", CorpusFormat::jsonl), DataError);
    CHECK_THROWS_AS(parse("", CorpusFormat::jsonl), DataError);
    CHECK_THROWS_AS(parse("\n\n", CorpusFormat::jsonl), DataError);
}

TEST_CASE("mixed product tags are rejected", "[corpus]") {
    const std::string text = R"({"id":"a","text":"x","product":"P"})"
                             "\n"
                             R"({"id":"b","text":"y","product":"Q"})"
                             "\n";
    CHECK_THROWS_AS(parse(text, CorpusFormat::jsonl), DataError);
}

TEST_CASE("csv corpus with RFC-4180 quoting", "[corpus]") {
    const auto c = parse("id,text,product\r\n"
                         "a,\"hello, \"\"world\"\"\",P\r\n"
                         "b,\"multi\nline\",P\r\n",
                         CorpusFormat::csv);
    REQUIRE(c.size() == 2);
    CHECK(c.inquiries[0].text == "hello, \"world\"");
    CHECK(c.inquiries[1].text == "multi\nline");
}

TEST_CASE("csv without a text column is a schema error", "[corpus]") {
    CHECK_THROWS_MATCHES(parse("id,product\na,P\n", CorpusFormat::csv), DataError,
                         Catch::Matchers::MessageMatches(ContainsSubstring("schema error")));
}

TEST_CASE("corpus round trip through both formats", "[corpus][property]") {
    Corpus c;
    c.product = "P";
    c.inquiries.push_back({"q1", "Does it, \"really\", work?", "P", std::string("2020-01-01")});
    c.inquiries.push_back({"q2", "ünïcödé text\nwith newline", "P", std::nullopt});
    for (const auto format : {CorpusFormat::jsonl, CorpusFormat::csv}) {
        std::ostringstream out;
        write_corpus(c, out, format);
        const auto back = parse(out.str(), format);
        REQUIRE(back.size() == c.size());
        for (std::size_t i = 0; i < c.size(); ++i) {
            CHECK(back.inquiries[i].id == c.inquiries[i].id);
            CHECK(back.inquiries[i].text == c.inquiries[i].text);
            CHECK(back.inquiries[i].product == c.inquiries[i].product);
        }
    }
}

TEST_CASE("format is guessed from the extension", "[corpus]") {
    CHECK(format_from_path("x/data.csv") == CorpusFormat::csv);
    CHECK(format_from_path("x/data.jsonl") == CorpusFormat::jsonl);
    CHECK(parse_corpus_format("csv") == CorpusFormat::csv);
    CHECK_FALSE(parse_corpus_format("xml").has_value());
}

TEST_CASE("resources: acronym file maps lode", "[resources]") {
    TempDir dir("res");
    test_support::write_file(dir / "acronyms.tsv", "# comment\nLODE\tlack of product effect\n");
    const auto b = load_resources(dir.path());
    REQUIRE(b.acronyms.count("lode") == 1);
    CHECK(b.acronyms.at("lode") == "lack of product effect");
}

TEST_CASE("resources: empty directory gives an empty bundle", "[resources]") {
    TempDir dir("res");
    const auto b = load_resources(dir.path());
    CHECK(b.acronyms.empty());
    CHECK(b.noise_patterns.empty());
    CHECK(b.stopwords.empty());
    CHECK(b.stop_ngrams.empty());
    CHECK(b.oov_definitions.empty());
    CHECK(b.trade_names.empty());
}

TEST_CASE("resources: invalid regex is named", "[resources]") {
    TempDir dir("res");
    test_support::write_file(dir / "noise_patterns.txt", "([\n");
    CHECK_THROWS_MATCHES(load_resources(dir.path()), DataError,
                         Catch::Matchers::MessageMatches(ContainsSubstring("'(['")));
}

TEST_CASE("resources: validation errors", "[resources]") {
    SECTION("case-insensitive duplicate acronym") {
        TempDir dir("res");
        test_support::write_file(dir / "acronyms.tsv", "ae\tadverse event\nAE\tsomething else\n");
        CHECK_THROWS_AS(load_resources(dir.path()), DataError);
    }
    SECTION("one-token stop n-gram") {
        TempDir dir("res");
        test_support::write_file(dir / "stop_ngrams.txt", "hello\n");
        CHECK_THROWS_AS(load_resources(dir.path()), DataError);
    }
    SECTION("non-UTF-8 content") {
        TempDir dir("res");
        test_support::write_file(dir / "stopwords.txt", "ok\n\xff\xfe\n");
        CHECK_THROWS_AS(load_resources(dir.path()), DataError);
    }
    SECTION("missing directory") {
        CHECK_THROWS_AS(load_resources("/nonexistent/shorttopics"), DataError);
    }
}

TEST_CASE("resources: trade names may map to an empty phrase", "[resources]") {
    TempDir dir("res");
    test_support::write_file(dir / "trade_names.tsv", "stivarga\tregorafenib\nplainbrand\t\n");
    const auto b = load_resources(dir.path());
    CHECK(b.trade_names.at("stivarga") == "regorafenib");
    CHECK(b.trade_names.at("plainbrand").empty());
}

TEST_CASE("shipped default resources load", "[resources]") {
    const auto b = load_resources(default_resources_dir());
    CHECK(b.acronyms.at("lode") == "lack of product effect");
    CHECK(b.trade_names.at("stivarga") == "regorafenib");
    CHECK(b.oov_definitions.at("redos") == "dose optimization study");
    CHECK(b.stop_ngrams.size() >= 20);
    CHECK_FALSE(b.noise_patterns.empty());
}

TEST_CASE("synthetic corpus: single theme", "[synthetic]") {
    const auto s = generate_synthetic_corpus(1, 3, 7);
    REQUIRE(s.corpus.size() == 3);
    for (const int l : s.labels) CHECK(l == 0);
}

TEST_CASE("synthetic corpus: deterministic bytes", "[synthetic]") {
    const auto a = generate_synthetic_corpus(5, 40, 1);
    const auto b = generate_synthetic_corpus(5, 40, 1);
    std::ostringstream oa;
    std::ostringstream ob;
    write_corpus(a.corpus, oa, CorpusFormat::jsonl);
    write_corpus(b.corpus, ob, CorpusFormat::jsonl);
    CHECK(oa.str() == ob.str());
    CHECK(a.labels == b.labels);

    const auto c = generate_synthetic_corpus(5, 40, 2);
    std::ostringstream oc;
    write_corpus(c.corpus, oc, CorpusFormat::jsonl);
    CHECK(oc.str() != oa.str());
}

TEST_CASE("synthetic corpus: labels partition ids into equal groups", "[synthetic]") {
    const auto s = generate_synthetic_corpus(5, 40, 1);
    TempDir dir("labels");
    write_labels(s, dir / "labels.tsv");
    const auto labels = load_labels(dir / "labels.tsv");
    REQUIRE(labels.size() == 200);
    std::map<int, int> counts;
    std::set<std::string> ids;
    for (const auto& [id, label] : labels) {
        ++counts[label];
        ids.insert(id);
    }
    CHECK(ids.size() == 200);
    REQUIRE(counts.size() == 5);
    for (const auto& [label, n] : counts) {
        CHECK(label >= 0);
        CHECK(n == 40);
    }
}

TEST_CASE("synthetic embeddings honour the cosine bounds", "[synthetic]") {
    const auto s = generate_synthetic_corpus(5, 10, 3);
    const auto store = synthetic_embeddings(s, {});
    for (std::size_t a = 0; a < s.theme_words.size(); ++a) {
        for (std::size_t b = a; b < s.theme_words.size(); ++b) {
            for (const auto& wa : s.theme_words[a]) {
                for (const auto& wb : s.theme_words[b]) {
                    if (wa == wb) continue;
                    const double c = cosine(to_double(store.find(wa)), to_double(store.find(wb)));
                    if (a == b) {
                        CHECK(c >= 0.8);
                    } else {
                        CHECK(c <= 0.2);
                    }
                }
            }
        }
    }
    SyntheticEmbeddingOptions tiny;
    tiny.dim = 3;
    CHECK_THROWS_AS(synthetic_embeddings(s, tiny), ConfigError);
}

TEST_CASE("synthetic noise and long inquiries", "[synthetic]") {
    SyntheticOptions o;
    o.themes = 3;
    o.per_theme = 30;
    o.noise_fraction = 0.10;
    o.long_inquiries = 4;
    const auto s = generate_synthetic_corpus(o);
    const auto noise = std::count(s.labels.begin(), s.labels.end(), -1);
    CHECK(noise == 10); // 94 / 0.9 * 0.1, rounded
    std::size_t long_count = 0;
    for (const auto& q : s.corpus.inquiries) long_count += q.text.size() > 800 ? 1 : 0;
    CHECK(long_count == 4);
}
