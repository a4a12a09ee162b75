#include "shorttopics/embedding.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>

namespace shorttopics {

const char* to_string(Provenance p) noexcept {
    switch (p) {
    case Provenance::file: return "file";
    case Provenance::oov_definition: return "oov-definition";
    case Provenance::trade_name: return "trade-name";
    }
    return "unknown";
}

bool EmbeddingStore::contains(std::string_view token) const { return index_.find(token) != index_.end(); }

std::span<const float> EmbeddingStore::find(std::string_view token) const {
    const auto it = index_.find(token);
    if (it == index_.end()) return {};
    return vector_at(it->second);
}

std::optional<Provenance> EmbeddingStore::provenance(std::string_view token) const {
    const auto it = index_.find(token);
    if (it == index_.end()) return std::nullopt;
    return provenance_[it->second];
}

bool EmbeddingStore::insert(std::string token, std::span<const float> vector, Provenance provenance) {
    if (vector.size() != dim_) {
        throw DataError("vector for '" + token + "' has " + std::to_string(vector.size()) + " components, expected " +
                        std::to_string(dim_));
    }
    if (!std::all_of(vector.begin(), vector.end(), [](float v) { return std::isfinite(v); })) {
        throw DataError("vector for '" + token + "' has non-finite components");
    }
    if (contains(token)) return false;
    index_.emplace(token, tokens_.size());
    tokens_.push_back(std::move(token));
    values_.insert(values_.end(), vector.begin(), vector.end());
    provenance_.push_back(provenance);
    return true;
}

bool EmbeddingStore::insert(std::string token, std::span<const double> vector, Provenance provenance) {
    std::vector<float> v(vector.begin(), vector.end());
    return insert(std::move(token), std::span<const float>(v), provenance);
}

std::vector<double> to_double(std::span<const float> v) { return {v.begin(), v.end()}; }

namespace {

std::string at(std::string_view source, std::size_t line) {
    return std::string(source) + ":" + std::to_string(line) + ": ";
}

bool parse_size(std::string_view s, std::size_t& out) {
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size();
}

} // namespace

EmbeddingStore read_embeddings(std::istream& in, std::string_view source, Warnings* warnings) {
    std::string line;
    if (!std::getline(in, line)) throw DataError(std::string(source) + ": empty embedding file");
    std::size_t vocab = 0;
    std::size_t dim = 0;
    {
        std::istringstream header(line);
        std::string v, d, extra;
        header >> v >> d;
        if (!parse_size(v, vocab) || !parse_size(d, dim) || (header >> extra) || dim == 0) {
            throw DataError(at(source, 1) + "expected header 'V D'");
        }
    }

    EmbeddingStore store(dim);
    std::vector<float> values(dim);
    std::size_t line_no = 1;
    std::size_t records = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;

        std::istringstream fields(line);
        std::string token;
        fields >> token;
        std::size_t count = 0;
        std::string component;
        while (fields >> component) {
            if (count >= dim) {
                ++count;
                continue;
            }
            char* end = nullptr;
            const float value = std::strtof(component.c_str(), &end);
            if (end != component.c_str() + component.size() || !std::isfinite(value)) {
                throw DataError(at(source, line_no) + "non-numeric component '" + component + "'");
            }
            values[count++] = value;
        }
        if (count != dim) {
            throw DataError(at(source, line_no) + "dimension error: '" + token + "' has " + std::to_string(count) +
                            " components, expected " + std::to_string(dim));
        }
        ++records;
        if (!store.insert(token, std::span<const float>(values), Provenance::file)) {
            warn(warnings, at(source, line_no) + "duplicate token '" + token + "' ignored (first vector kept)");
        }
    }
    if (records != vocab) {
        throw DataError(std::string(source) + ": header declares " + std::to_string(vocab) + " vectors but body has " +
                        std::to_string(records));
    }
    return store;
}

EmbeddingStore load_embeddings(const std::filesystem::path& path, Warnings* warnings) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open embedding file '" + path.string() + "'");
    return read_embeddings(in, path.string(), warnings);
}

void write_embeddings(const EmbeddingStore& store, std::ostream& out) {
    out << store.size() << ' ' << store.dim() << '\n';
    char buf[32];
    for (std::size_t i = 0; i < store.size(); ++i) {
        out << store.tokens()[i];
        for (const float v : store.vector_at(i)) {
            const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
            out << ' ';
            out.write(buf, ptr - buf);
        }
        out << '\n';
    }
}

std::vector<std::pair<std::string, std::size_t>> detect_top_oov(std::span<const TokenizedInquiry> corpus,
                                                                const EmbeddingStore& store, std::size_t n) {
    std::unordered_map<std::string, std::size_t> df;
    for (const auto& inquiry : corpus) {
        std::vector<std::string_view> seen;
        for (const auto& token : inquiry.tokens) {
            if (store.contains(token)) continue;
            if (std::find(seen.begin(), seen.end(), token) != seen.end()) continue;
            seen.push_back(token);
            ++df[token];
        }
    }
    std::vector<std::pair<std::string, std::size_t>> ranked(df.begin(), df.end());
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        return a.second != b.second ? a.second > b.second : a.first < b.first;
    });
    if (ranked.size() > n) ranked.resize(n);
    return ranked;
}

std::optional<std::vector<double>> embed_phrase(std::string_view phrase, const EmbeddingStore& store) {
    std::vector<double> sum(store.dim(), 0.0);
    std::size_t covered = 0;
    for (const auto& token : tokenize_lemmatize(phrase)) {
        const auto v = store.find(token);
        if (v.empty()) continue;
        for (std::size_t j = 0; j < sum.size(); ++j) sum[j] += v[j];
        ++covered;
    }
    if (covered == 0) return std::nullopt;
    for (double& x : sum) x /= static_cast<double>(covered);
    return sum;
}

namespace {

// A curated term becomes the single token the tokenizer produces for it.
std::string normalized_term(const std::string& term) {
    auto tokens = tokenize_lemmatize(term);
    if (tokens.size() != 1) {
        throw DataError("term '" + term + "' must normalize to exactly one token");
    }
    return std::move(tokens.front());
}

} // namespace

EmbeddingStore augment_with_definitions(EmbeddingStore store, const std::map<std::string, std::string>& definitions) {
    std::vector<std::string> failed;
    std::vector<std::pair<std::string, std::vector<double>>> additions;
    for (const auto& [term, phrase] : definitions) {
        const std::string key = normalized_term(term);
        if (store.contains(key)) continue;
        auto vec = embed_phrase(phrase, store);
        if (!vec) {
            failed.push_back(term);
            continue;
        }
        additions.emplace_back(key, std::move(*vec));
    }
    if (!failed.empty()) {
        std::string message = "definitions without any in-vocabulary token:";
        for (const auto& t : failed) message += " '" + t + "'";
        throw DataError(message);
    }
    // Definitions are embedded against the file vocabulary only, so the result does not
    // depend on the order in which terms are processed.
    for (auto& [key, vec] : additions) store.insert(key, std::span<const double>(vec), Provenance::oov_definition);
    return store;
}

EmbeddingStore augment_with_trade_names(EmbeddingStore store, const std::map<std::string, std::string>& trade_names) {
    std::optional<std::vector<double>> fallback;
    bool fallback_computed = false;
    std::vector<std::pair<std::string, std::vector<double>>> additions;
    for (const auto& [name, phrase] : trade_names) {
        const std::string key = normalized_term(name);
        if (store.contains(key)) continue;
        auto vec = phrase.empty() ? std::nullopt : embed_phrase(phrase, store);
        if (!vec) {
            if (!fallback_computed) {
                fallback = embed_phrase(kTradeNameFallback, store);
                fallback_computed = true;
            }
            if (!fallback) {
                throw ConfigError("fallback phrase '" + std::string(kTradeNameFallback) +
                                  "' has no in-vocabulary token; trade names cannot be embedded");
            }
            vec = fallback;
        }
        additions.emplace_back(key, std::move(*vec));
    }
    for (auto& [key, vec] : additions) store.insert(key, std::span<const double>(vec), Provenance::trade_name);
    return store;
}

InquiryVector embed_inquiry(const TokenizedInquiry& inquiry, const EmbeddingStore& store, OovMode mode) {
    InquiryVector out;
    out.id = inquiry.id;
    out.vector.assign(store.dim(), 0.0);
    out.total_tokens = inquiry.tokens.size();
    for (const auto& token : inquiry.tokens) {
        const auto v = store.find(token);
        if (v.empty()) continue;
        for (std::size_t j = 0; j < out.vector.size(); ++j) out.vector[j] += v[j];
        ++out.covered_tokens;
    }
    out.representable = out.covered_tokens > 0;
    if (out.representable) {
        const std::size_t divisor = mode == OovMode::skip ? out.covered_tokens : out.total_tokens;
        for (double& x : out.vector) x /= static_cast<double>(divisor);
    }
    return out;
}

std::vector<std::pair<std::string, double>> most_similar(const EmbeddingStore& store, std::string_view token,
                                                         std::size_t k) {
    const auto probe_span = store.find(token);
    if (probe_span.empty()) throw DataError("probe token '" + std::string(token) + "' is not in the store");
    const auto probe = to_double(probe_span);
    std::vector<std::pair<std::string, double>> ranked;
    ranked.reserve(store.size());
    std::vector<double> candidate(store.dim());
    for (std::size_t i = 0; i < store.size(); ++i) {
        if (store.tokens()[i] == token) continue;
        const auto v = store.vector_at(i);
        std::copy(v.begin(), v.end(), candidate.begin());
        ranked.emplace_back(store.tokens()[i], cosine(probe, candidate));
    }
    const std::size_t keep = std::min(k, ranked.size());
    const auto cmp = [](const auto& a, const auto& b) {
        return a.second != b.second ? a.second > b.second : a.first < b.first;
    };
    std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(keep), ranked.end(), cmp);
    ranked.resize(keep);
    return ranked;
}

} // namespace shorttopics
