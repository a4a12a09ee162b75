#include "catch_amalgamated.hpp"

#include "shorttopics/preprocess.hpp"
#include "shorttopics/synthetic.hpp"

#include <algorithm>
#include <random>

using namespace shorttopics;
using Tokens = std::vector<std::string>;

namespace {

const ResourceBundle& defaults() {
    static const ResourceBundle bundle = load_resources(default_resources_dir());
    return bundle;
}

std::string join(const Tokens& tokens) {
    std::string out;
    for (const auto& t : tokens) out += (out.empty() ? "" : " ") + t;
    return out;
}

Tokens sorted(Tokens t) {
    std::sort(t.begin(), t.end());
    return t;
}

} // namespace

TEST_CASE("acronyms are resolved as whole words", "[preprocess]") {
    const std::map<std::string, std::string> acronyms{{"lode", "lack of product effect"}};
    CHECK(resolve_acronyms("pt reports lode", acronyms) == "pt reports lack of product effect");
    CHECK(resolve_acronyms("nothing to expand", acronyms) == "nothing to expand");
    CHECK(resolve_acronyms("melodey", acronyms) == "melodey");
    CHECK(resolve_acronyms("LODE, again: Lode.", acronyms) == "lack of product effect, again: lack of product effect.");
}

TEST_CASE("acronym expansion is single pass", "[preprocess]") {
    const std::map<std::string, std::string> acronyms{{"ae", "adverse event ae"}, {"event", "EVT"}};
    CHECK(resolve_acronyms("one ae", acronyms) == "one adverse event ae");
}

TEST_CASE("longest acronym key wins", "[preprocess]") {
    const std::map<std::string, std::string> acronyms{{"ae", "adverse event"}, {"ae-x", "special"}};
    CHECK(resolve_acronyms("ae-x and ae", acronyms) == "special and adverse event");
}

TEST_CASE("noise patterns", "[preprocess]") {
    // Expected strings produced independently with Python's `re` module (IGNORECASE) on the
    // shipped pattern file.
    const auto& p = defaults().noise_patterns;
    CHECK(strip_noise("lot AB1234 leaking", p) == "leaking");
    CHECK(strip_noise("Lot no. 55-X expired, batch #A12", p) == "expired,");
    CHECK(strip_noise("write to info@example.com or see www.example.com/faq today", p) == "write to or see today");
    CHECK(strip_noise("some text", {}) == "some text");
    CHECK(strip_noise("lot 12345", p).empty());
}

TEST_CASE("tokenize and lemmatize", "[preprocess]") {
    CHECK(tokenize_lemmatize("Tablets splitting") == Tokens{"tablet", "split"});
    CHECK(tokenize_lemmatize("blood") == Tokens{"blood"});
    CHECK(tokenize_lemmatize("2020").empty());
    CHECK(tokenize_lemmatize("well-differentiated tumour") == Tokens{"well-differentiated", "tumour"});
    CHECK(tokenize_lemmatize("film-coated side-effects") == Tokens{"film-coated", "side-effect"});
    CHECK(tokenize_lemmatize("\"studies\" (dosed), patients; x2") == Tokens{"study", "dose", "patient", "x2"});
    CHECK(tokenize_lemmatize("patient's  --  ...").front() == "patient");
}

TEST_CASE("lemmatizer suffix rules", "[preprocess]") {
    CHECK(lemmatize("studies") == "study");
    CHECK(lemmatize("glasses") == "glass");
    CHECK(lemmatize("boxes") == "box");
    CHECK(lemmatize("virus") == "virus");
    CHECK(lemmatize("tablets") == "tablet");
    CHECK(lemmatize("its") == "its"); // stem below the minimum
    CHECK(lemmatize("stopped") == "stop");
    CHECK(lemmatize("swelling") == "swell");
    CHECK(lemmatize("taking") == "take");
    CHECK(lemmatize("morning") == "morning");
    CHECK(lemmatize("need") == "need");
    CHECK(lemmatize("blood") == "blood");
}

TEST_CASE("lemmatizer is idempotent", "[preprocess][property]") {
    for (const char* w : {"studies", "tablets", "splitting", "dosing", "pressures", "infections", "caused",
                          "reported", "injections", "mornings", "babies", "cases", "worried", "using"}) {
        const auto once = lemmatize(w);
        CHECK(lemmatize(once) == once);
    }
}

TEST_CASE("remove_stop examples", "[preprocess]") {
    const std::vector<std::vector<std::string>> year_old{{"year", "old"}};
    CHECK(remove_stop(tokenize_lemmatize("10 years old morning dose"), {}, year_old) == Tokens{"morning", "dose"});
    CHECK(remove_stop({"good", "morning", "pain"}, {}, {{"good", "morning"}}) == Tokens{"pain"});
    CHECK(remove_stop({"a", "b"}, {}, {}) == Tokens{"a", "b"});
}

TEST_CASE("stop n-grams take precedence and longest match wins", "[preprocess]") {
    const std::set<std::string> stop{"the"};
    const std::vector<std::vector<std::string>> grams{{"thank", "you"}, {"thank", "you", "very", "much"}};
    CHECK(remove_stop({"thank", "you", "very", "much", "pain"}, stop, grams) == Tokens{"pain"});
    // Removing a stopword can join a new n-gram; it is removed as well.
    CHECK(remove_stop({"thank", "the", "you", "rash"}, stop, grams) == Tokens{"rash"});
}

TEST_CASE("full preprocessing golden examples", "[preprocess]") {
    const Preprocessor pre(defaults());
    const auto t = pre({"g1", "Good morning, does LODE occur with 2 tablets?", "P", std::nullopt});
    for (const char* want : {"lack", "product", "effect", "occur", "tablet"}) {
        CHECK(std::find(t.tokens.begin(), t.tokens.end(), want) != t.tokens.end());
    }
    for (const char* banned : {"good", "morning"}) {
        CHECK(std::find(t.tokens.begin(), t.tokens.end(), banned) == t.tokens.end());
    }
    CHECK(t.raw_char_len == 45);

    CHECK(pre({"g2", "lot AB1234", "P", std::nullopt}).tokens.empty());
    CHECK(pre({"g3", "the", "P", std::nullopt}).tokens.empty());
}

TEST_CASE("raw_char_len counts code points before any change", "[preprocess]") {
    const Preprocessor pre(defaults());
    const auto t = pre({"u", "ÄÖÜ lode", "P", std::nullopt});
    CHECK(t.raw_char_len == 8);
}

TEST_CASE("product names are stopwords", "[preprocess]") {
    ResourceBundle b;
    b.trade_names = {{"stivarga", "regorafenib"}};
    const auto words = product_stopwords(b, "Stivarga");
    CHECK(std::find(words.begin(), words.end(), "stivarga") != words.end());
    CHECK(std::find(words.begin(), words.end(), "regorafenib") != words.end());

    const Preprocessor pre(b, words);
    const auto t = pre({"s", "Is Stivarga (regorafenib) safe with grapefruit?", "Stivarga", std::nullopt});
    CHECK(std::find(t.tokens.begin(), t.tokens.end(), "stivarga") == t.tokens.end());
    CHECK(std::find(t.tokens.begin(), t.tokens.end(), "regorafenib") == t.tokens.end());
    CHECK(std::find(t.tokens.begin(), t.tokens.end(), "grapefruit") != t.tokens.end());
}

TEST_CASE("preprocess invariants over a mixed corpus", "[preprocess][property]") {
    auto synthetic = generate_synthetic_corpus(4, 25, 11).corpus.inquiries;
    const std::vector<std::string> texts{
        "Good morning, my 45 years old patient reports LODE after switching tablets. Kind regards",
        "Dear Sir or Madam, is it safe to take the drug with alcohol? Thank you very much.",
        "Can the injection be stored at room temperature? Lot 7781-B was left out overnight.",
        "Hello, the pt had nausea and vomiting after the first dose; should the dosing be reduced?",
        "Please send the SmPC and information regarding pregnancy, I would like to know more.",
        "Is the medication gluten-free?",
        "Thank you",
    };
    for (std::size_t i = 0; i < texts.size(); ++i) synthetic.push_back({"r" + std::to_string(i), texts[i], "P", std::nullopt});

    const Preprocessor pre(defaults());
    for (const auto& q : synthetic) {
        const auto t = pre(q);
        for (const auto& tok : t.tokens) {
            CHECK_FALSE(pre.stopwords().count(tok));
            CHECK(std::any_of(tok.begin(), tok.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || (c & 0x80); }));
        }
        for (const auto& gram : pre.stop_ngrams()) {
            CHECK(std::search(t.tokens.begin(), t.tokens.end(), gram.begin(), gram.end()) == t.tokens.end());
        }
        // Idempotence on the detokenized output.
        const auto again = pre({q.id, join(t.tokens).empty() ? std::string("x") : join(t.tokens), q.product, std::nullopt});
        if (!t.tokens.empty()) CHECK(sorted(again.tokens) == sorted(t.tokens));
    }
}

TEST_CASE("surviving tokens keep their relative order", "[preprocess][property]") {
    std::mt19937_64 rng(5);
    const Tokens vocab{"pain", "the", "dose", "good", "morning", "rash", "of", "year", "old", "liver"};
    const std::set<std::string> stop{"the", "of"};
    const std::vector<std::vector<std::string>> grams{{"good", "morning"}, {"year", "old"}};
    for (int trial = 0; trial < 200; ++trial) {
        Tokens in;
        const auto n = std::uniform_int_distribution<int>(0, 12)(rng);
        for (int i = 0; i < n; ++i) in.push_back(vocab[std::uniform_int_distribution<std::size_t>(0, vocab.size() - 1)(rng)]);
        const auto out = remove_stop(in, stop, grams);
        // out is a subsequence of in
        auto it = in.begin();
        for (const auto& tok : out) {
            it = std::find(it, in.end(), tok);
            REQUIRE(it != in.end());
            ++it;
        }
        CHECK(remove_stop(out, stop, grams) == out);
    }
}
