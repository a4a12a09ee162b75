#pragma once

#include "shorttopics/corpus.hpp"
#include "shorttopics/resources.hpp"

#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace shorttopics {

struct TokenizedInquiry {
    std::string id;
    std::vector<std::string> tokens;
    std::size_t raw_char_len = 0; // code points of the raw text

    bool operator==(const TokenizedInquiry&) const = default;
};

/// Replaces whole-word, case-insensitive acronym occurrences by their expansion.
/// Keys must be lowercase. Single pass: expansions are never re-scanned.
std::string resolve_acronyms(std::string_view text, const std::map<std::string, std::string>& acronyms);

/// Replaces every match of each pattern (in order) by a space, then collapses whitespace.
std::string strip_noise(std::string_view text, std::span<const NoisePattern> patterns);

/// Rule-based lemma of one lowercase token: exception table, then suffix rules.
std::string lemmatize(std::string_view token);

/// Lowercases, splits on whitespace and punctuation (keeping intra-word hyphens),
/// lemmatizes, and drops digit-only tokens.
std::vector<std::string> tokenize_lemmatize(std::string_view text);

/// Removes stop n-grams (longest match, left to right) and then stopwords, repeating
/// until no stop n-gram remains, so the output never contains either.
std::vector<std::string> remove_stop(std::vector<std::string> tokens,
                                     const std::set<std::string>& stopwords,
                                     const std::vector<std::vector<std::string>>& stop_ngrams);

/// Brand and chemical names of the corpus product: the product tag itself and, when it is a
/// trade name, the tokens of its mapped phrase.
std::vector<std::string> product_stopwords(const ResourceBundle& bundle, std::string_view product);

/// Preprocessing pipeline bound to one resource bundle.
///
/// Stopword and stop n-gram entries are normalized with the same tokenizer and lemmatizer as
/// the text, so "years old" in the resource file matches the tokens ["year", "old"].
class Preprocessor {
public:
    explicit Preprocessor(const ResourceBundle& bundle, std::span<const std::string> extra_stopwords = {});

    TokenizedInquiry operator()(const Inquiry& inquiry) const;
    std::vector<TokenizedInquiry> operator()(const Corpus& corpus) const;

    const std::set<std::string>& stopwords() const noexcept { return stopwords_; }
    const std::vector<std::vector<std::string>>& stop_ngrams() const noexcept { return stop_ngrams_; }

private:
    const ResourceBundle* bundle_;
    std::set<std::string> stopwords_;
    std::vector<std::vector<std::string>> stop_ngrams_;
};

/// resolve_acronyms -> strip_noise -> tokenize_lemmatize -> remove_stop with the bundle's lists.
TokenizedInquiry preprocess(const Inquiry& inquiry, const ResourceBundle& bundle);

} // namespace shorttopics
