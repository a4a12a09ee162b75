#include "shorttopics/preprocess.hpp"

#include "shorttopics/utf8.hpp"

#include <algorithm>
#include <array>
#include <string_view>
#include <unordered_map>

namespace shorttopics {

namespace {

bool is_word_char(char32_t cp) { return utf8::is_alnum(cp) || cp == U'_'; }

struct CodePoint {
    char32_t lower;
    std::size_t begin; // byte range in the original text
    std::size_t end;
};

std::vector<CodePoint> decode_lower(std::string_view text) {
    std::vector<CodePoint> out;
    out.reserve(text.size());
    std::size_t pos = 0;
    while (pos < text.size()) {
        const std::size_t begin = pos;
        const char32_t cp = utf8::next(text, pos);
        out.push_back({utf8::to_lower(cp), begin, pos});
    }
    return out;
}

std::u32string decode(std::string_view text) {
    std::u32string out;
    std::size_t pos = 0;
    while (pos < text.size()) out.push_back(utf8::to_lower(utf8::next(text, pos)));
    return out;
}

std::string collapse_whitespace(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    bool pending_space = false;
    std::size_t pos = 0;
    while (pos < text.size()) {
        const std::size_t begin = pos;
        const char32_t cp = utf8::next(text, pos);
        if (utf8::is_space(cp)) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) out.push_back(' ');
        pending_space = false;
        out.append(text.substr(begin, pos - begin));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Lemmatizer

const std::unordered_map<std::string_view, std::string_view>& exceptions() {
    static const std::unordered_map<std::string_view, std::string_view> table = {
        // irregular forms
        {"am", "be"}, {"is", "be"}, {"are", "be"}, {"was", "be"}, {"were", "be"}, {"been", "be"},
        {"being", "be"}, {"has", "have"}, {"had", "have"}, {"having", "have"}, {"does", "do"},
        {"did", "do"}, {"done", "do"}, {"doing", "do"}, {"went", "go"}, {"gone", "go"}, {"going", "go"},
        {"took", "take"}, {"taken", "take"}, {"taking", "take"}, {"gave", "give"}, {"given", "give"},
        {"giving", "give"}, {"made", "make"}, {"making", "make"}, {"used", "use"}, {"using", "use"},
        {"felt", "feel"}, {"ate", "eat"}, {"eaten", "eat"}, {"began", "begin"}, {"begun", "begin"},
        {"got", "get"}, {"gotten", "get"}, {"getting", "get"}, {"said", "say"}, {"told", "tell"},
        {"knew", "know"}, {"known", "know"}, {"thought", "think"}, {"bought", "buy"}, {"brought", "bring"},
        {"kept", "keep"}, {"left", "leave"}, {"lost", "lose"}, {"paid", "pay"}, {"sent", "send"},
        {"spent", "spend"}, {"stood", "stand"}, {"understood", "understand"}, {"wrote", "write"},
        {"written", "write"}, {"saw", "see"}, {"seen", "see"}, {"came", "come"}, {"coming", "come"},
        {"found", "find"}, {"forgot", "forget"}, {"forgotten", "forget"}, {"swollen", "swell"},
        {"children", "child"}, {"women", "woman"}, {"men", "man"}, {"feet", "foot"}, {"teeth", "tooth"},
        {"mice", "mouse"}, {"people", "person"}, {"lives", "life"}, {"wives", "wife"}, {"knives", "knife"},
        {"leaves", "leaf"}, {"halves", "half"}, {"focused", "focus"}, {"focusing", "focus"},
        {"required", "require"}, {"requiring", "require"}, {"desired", "desire"}, {"dosing", "dose"}, {"dosed", "dose"},
        {"hundred", "hundred"}, {"indeed", "indeed"}, {"naked", "naked"}, {"wicked", "wicked"},
        {"sacred", "sacred"}, {"kindred", "kindred"}, {"asked", "ask"}, {"asking", "ask"},
        {"controlled", "control"}, {"controlling", "control"}, {"cancelled", "cancel"},
        {"travelled", "travel"}, {"labelled", "label"},
        // words that only look inflected
        {"morning", "morning"}, {"evening", "evening"}, {"nothing", "nothing"}, {"something", "something"},
        {"anything", "anything"}, {"everything", "everything"}, {"thing", "thing"}, {"during", "during"},
        {"spring", "spring"}, {"string", "string"}, {"ceiling", "ceiling"}, {"wedding", "wedding"},
        {"pudding", "pudding"}, {"sibling", "sibling"}, {"offspring", "offspring"}, {"earring", "earring"},
        {"news", "news"}, {"series", "series"}, {"species", "species"}, {"diabetes", "diabetes"},
        {"herpes", "herpes"}, {"measles", "measles"}, {"mumps", "mumps"}, {"scabies", "scabies"},
        {"rabies", "rabies"}, {"feces", "feces"}, {"faeces", "faeces"}, {"pancreas", "pancreas"},
        {"lens", "lens"}, {"always", "always"}, {"perhaps", "perhaps"}, {"sometimes", "sometimes"},
        {"whereas", "whereas"}, {"aids", "aids"}, {"covid", "covid"},
    };
    return table;
}

bool is_vowel(char c) { return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u'; }
bool is_consonant(char c) { return c >= 'a' && c <= 'z' && !is_vowel(c); }

std::size_t cp_length(std::string_view s) { return utf8::length(s); }

// Restores the stem of an -ed/-ing form: undoubles a final double consonant, or appends the
// 'e' dropped before the suffix for common stem endings.
std::string fix_stem(std::string stem) {
    const std::size_t n = stem.size();
    if (n >= 2) {
        const char a = stem[n - 2];
        const char b = stem[n - 1];
        if (a == b && is_consonant(b) && b != 'l' && b != 's' && b != 'z') {
            stem.pop_back();
            return stem;
        }
        const char before = n >= 3 ? stem[n - 3] : '\0';
        const bool restore = (b == 's' && a != 's') || b == 'v' || (b == 'z' && a != 'z') || b == 'c' ||
                             (b == 'l' && is_consonant(a) && a != 'l') || (a == 'a' && b == 'g') ||
                             (a == 'i' && b == 'b') ||
                             (a == 'a' && b == 't' && (is_consonant(before) || before == 'i')) ||
                             ((a == 'i' || a == 'a' || a == 'u') && (b == 'd' || b == 'n' || b == 'r' || b == 'k') &&
                              is_consonant(before) && !(a == 'a' && b == 'n') && !(a == 'u' && b == 'n')) ||
                             (a == 'o' && b == 'k' && is_consonant(before));
        if (restore) stem.push_back('e');
    }
    return stem;
}

// One application of the rule table; returns the input unchanged when no rule applies.
// Without inflections only the plural rules run.
std::string lemma_step(const std::string& w, bool inflections) {
    if (cp_length(w) <= 3) return w;
    if (const auto it = exceptions().find(w); it != exceptions().end()) return std::string(it->second);

    const auto stem_len = [&](std::size_t suffix) { return cp_length(std::string_view(w).substr(0, w.size() - suffix)); };

    if (w.ends_with("ies") && stem_len(3) >= 2) return w.substr(0, w.size() - 3) + "y";
    if (w.ends_with("ss") || w.ends_with("us") || w.ends_with("is")) return w;
    if (w.ends_with("es")) {
        const std::string stem = w.substr(0, w.size() - 2);
        if (stem_len(2) >= 3 && (stem.ends_with("ss") || stem.ends_with("x") || stem.ends_with("zz") ||
                                 stem.ends_with("ch") || stem.ends_with("sh"))) {
            return stem;
        }
    }
    if (w.ends_with("s") && stem_len(1) >= 3) return w.substr(0, w.size() - 1);
    if (!inflections) return w;
    if (w.ends_with("ing") && stem_len(3) >= 4) return fix_stem(w.substr(0, w.size() - 3));
    if (w.ends_with("ied") && stem_len(3) >= 2) return w.substr(0, w.size() - 3) + "y";
    if (w.ends_with("eed")) return w;
    if (w.ends_with("ed") && stem_len(2) >= 4) return fix_stem(w.substr(0, w.size() - 2));
    return w;
}

std::string lemmatize_word(std::string w, bool inflections = true) {
    // Iterate to a fixed point so lemmatize(lemmatize(x)) == lemmatize(x).
    for (int i = 0; i < 8; ++i) {
        std::string next = lemma_step(w, inflections);
        if (next == w) break;
        w = std::move(next);
    }
    return w;
}

bool all_digits(std::string_view token) {
    return !token.empty() && std::all_of(token.begin(), token.end(), [](char c) { return c >= '0' && c <= '9'; });
}

bool is_hyphen(char32_t cp) { return cp == U'-' || cp == 0x2010 || cp == 0x2011; }

bool contains_ngram_at(const std::vector<std::string>& tokens, std::size_t i, const std::vector<std::string>& ngram) {
    if (ngram.empty() || i + ngram.size() > tokens.size()) return false;
    return std::equal(ngram.begin(), ngram.end(), tokens.begin() + static_cast<std::ptrdiff_t>(i));
}

// Longest-match, left-to-right removal of contiguous stop n-grams. Returns true if anything was removed.
bool strip_ngrams(std::vector<std::string>& tokens, const std::vector<std::vector<std::string>>& ngrams) {
    if (ngrams.empty()) return false;
    std::vector<std::string> out;
    out.reserve(tokens.size());
    bool removed = false;
    std::size_t i = 0;
    while (i < tokens.size()) {
        std::size_t best = 0;
        for (const auto& ngram : ngrams) {
            if (ngram.size() > best && contains_ngram_at(tokens, i, ngram)) best = ngram.size();
        }
        if (best > 0) {
            i += best;
            removed = true;
        } else {
            out.push_back(std::move(tokens[i]));
            ++i;
        }
    }
    tokens = std::move(out);
    return removed;
}

} // namespace

std::string resolve_acronyms(std::string_view text, const std::map<std::string, std::string>& acronyms) {
    if (acronyms.empty()) return std::string(text);

    struct Key {
        std::u32string cps;
        const std::string* expansion;
    };
    std::vector<Key> keys;
    keys.reserve(acronyms.size());
    for (const auto& [key, expansion] : acronyms) {
        auto cps = decode(key);
        if (!cps.empty()) keys.push_back({std::move(cps), &expansion});
    }
    std::stable_sort(keys.begin(), keys.end(), [](const Key& a, const Key& b) { return a.cps.size() > b.cps.size(); });

    const auto cps = decode_lower(text);
    std::string out;
    out.reserve(text.size());
    std::size_t i = 0;
    while (i < cps.size()) {
        const bool at_boundary = i == 0 || !is_word_char(cps[i - 1].lower);
        const Key* match = nullptr;
        for (const auto& key : keys) {
            const std::size_t n = key.cps.size();
            if (i + n > cps.size()) continue;
            if (is_word_char(key.cps.front()) && !at_boundary) continue;
            bool equal = true;
            for (std::size_t k = 0; k < n && equal; ++k) equal = cps[i + k].lower == key.cps[k];
            if (!equal) continue;
            if (is_word_char(key.cps.back()) && i + n < cps.size() && is_word_char(cps[i + n].lower)) continue;
            match = &key;
            break;
        }
        if (match != nullptr) {
            out += *match->expansion;
            i += match->cps.size();
        } else {
            out.append(text.substr(cps[i].begin, cps[i].end - cps[i].begin));
            ++i;
        }
    }
    return out;
}

std::string strip_noise(std::string_view text, std::span<const NoisePattern> patterns) {
    if (patterns.empty()) return std::string(text);
    std::string current(text);
    for (const auto& pattern : patterns) {
        current = std::regex_replace(current, pattern.regex, " ");
    }
    return collapse_whitespace(current);
}

std::string lemmatize(std::string_view token) {
    const auto hyphen = token.rfind('-');
    if (hyphen != std::string_view::npos && hyphen + 1 < token.size()) {
        // Compounds are mostly adjectival ("film-coated", "long-acting"): fold plurals only.
        return std::string(token.substr(0, hyphen + 1)) +
               lemmatize_word(std::string(token.substr(hyphen + 1)), false);
    }
    return lemmatize_word(std::string(token));
}

std::vector<std::string> tokenize_lemmatize(std::string_view text) {
    std::vector<std::string> tokens;
    const auto cps = decode_lower(text);
    std::string current;

    const auto flush = [&] {
        if (current.empty()) return;
        if (!all_digits(current)) tokens.push_back(lemmatize(current));
        current.clear();
    };

    for (std::size_t i = 0; i < cps.size(); ++i) {
        const char32_t cp = cps[i].lower;
        if (utf8::is_alnum(cp)) {
            utf8::append(current, cp);
        } else if (is_hyphen(cp) && !current.empty() && i + 1 < cps.size() && utf8::is_alnum(cps[i + 1].lower)) {
            current.push_back('-');
        } else {
            flush();
        }
    }
    flush();
    return tokens;
}

std::vector<std::string> remove_stop(std::vector<std::string> tokens, const std::set<std::string>& stopwords,
                                     const std::vector<std::vector<std::string>>& stop_ngrams) {
    // Dropping stopwords can make new n-grams contiguous, so repeat until none remain.
    while (true) {
        const bool removed_ngram = strip_ngrams(tokens, stop_ngrams);
        if (!stopwords.empty()) {
            std::erase_if(tokens, [&](const std::string& t) { return stopwords.contains(t); });
        }
        if (!removed_ngram) {
            bool any = false;
            for (std::size_t i = 0; i < tokens.size() && !any; ++i) {
                for (const auto& ngram : stop_ngrams) {
                    if (contains_ngram_at(tokens, i, ngram)) {
                        any = true;
                        break;
                    }
                }
            }
            if (!any) return tokens;
        }
    }
}

std::vector<std::string> product_stopwords(const ResourceBundle& bundle, std::string_view product) {
    std::vector<std::string> out;
    if (product.empty()) return out;
    for (auto& t : tokenize_lemmatize(product)) out.push_back(std::move(t));
    std::string key;
    std::size_t pos = 0;
    while (pos < product.size()) utf8::append(key, utf8::to_lower(utf8::next(product, pos)));
    if (const auto it = bundle.trade_names.find(key); it != bundle.trade_names.end()) {
        for (auto& t : tokenize_lemmatize(it->second)) out.push_back(std::move(t));
    }
    return out;
}

Preprocessor::Preprocessor(const ResourceBundle& bundle, std::span<const std::string> extra_stopwords)
    : bundle_(&bundle) {
    const auto add_stopword = [this](const std::string& word) {
        stopwords_.insert(word);
        for (auto& t : tokenize_lemmatize(word)) stopwords_.insert(std::move(t));
    };
    for (const auto& w : bundle.stopwords) add_stopword(w);
    for (const auto& w : extra_stopwords) {
        std::string lower;
        std::size_t pos = 0;
        while (pos < w.size()) utf8::append(lower, utf8::to_lower(utf8::next(w, pos)));
        add_stopword(lower);
    }
    for (const auto& ngram : bundle.stop_ngrams) {
        std::string joined;
        for (const auto& t : ngram) {
            if (!joined.empty()) joined.push_back(' ');
            joined += t;
        }
        auto normalized = tokenize_lemmatize(joined);
        stop_ngrams_.push_back(normalized.size() >= 2 ? std::move(normalized) : ngram);
    }
}

TokenizedInquiry Preprocessor::operator()(const Inquiry& inquiry) const {
    TokenizedInquiry out;
    out.id = inquiry.id;
    out.raw_char_len = utf8::length(inquiry.text);
    const std::string expanded = resolve_acronyms(inquiry.text, bundle_->acronyms);
    const std::string cleaned = strip_noise(expanded, bundle_->noise_patterns);
    out.tokens = remove_stop(tokenize_lemmatize(cleaned), stopwords_, stop_ngrams_);
    return out;
}

std::vector<TokenizedInquiry> Preprocessor::operator()(const Corpus& corpus) const {
    std::vector<TokenizedInquiry> out;
    out.reserve(corpus.size());
    for (const auto& inquiry : corpus.inquiries) out.push_back((*this)(inquiry));
    return out;
}

TokenizedInquiry preprocess(const Inquiry& inquiry, const ResourceBundle& bundle) {
    const auto extra = product_stopwords(bundle, inquiry.product);
    return Preprocessor(bundle, extra)(inquiry);
}

} // namespace shorttopics
