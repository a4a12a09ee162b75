#pragma once

#include "shorttopics/error.hpp"
#include "shorttopics/matrix.hpp"
#include "shorttopics/preprocess.hpp"

#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace shorttopics {

enum class Provenance { file, oov_definition, trade_name };

const char* to_string(Provenance p) noexcept;

/// Token -> vector map of fixed dimension. Vectors are stored as floats in one
/// contiguous block; lookups return views into it.
class EmbeddingStore {
public:
    EmbeddingStore() = default;
    explicit EmbeddingStore(std::size_t dim) : dim_(dim) {}

    std::size_t dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return tokens_.size(); }
    bool contains(std::string_view token) const;

    /// Vector of the token, or an empty span when absent.
    std::span<const float> find(std::string_view token) const;
    std::optional<Provenance> provenance(std::string_view token) const;

    /// Tokens in insertion order.
    const std::vector<std::string>& tokens() const noexcept { return tokens_; }
    std::span<const float> vector_at(std::size_t index) const noexcept {
        return {values_.data() + index * dim_, dim_};
    }

    /// Adds a token; returns false (and leaves the store unchanged) if it already exists.
    /// Throws DataError on wrong dimension or non-finite components.
    bool insert(std::string token, std::span<const double> vector, Provenance provenance);
    bool insert(std::string token, std::span<const float> vector, Provenance provenance);

private:
    struct Hash {
        using is_transparent = void;
        std::size_t operator()(std::string_view s) const noexcept { return std::hash<std::string_view>{}(s); }
    };

    std::size_t dim_ = 0;
    std::vector<std::string> tokens_;
    std::vector<float> values_;
    std::vector<Provenance> provenance_;
    std::unordered_map<std::string, std::size_t, Hash, std::equal_to<>> index_;
};

/// Reads the plain-text word-vector format: header "V D", then V lines "token c1 ... cD".
/// Duplicate tokens keep their first vector and add a warning.
EmbeddingStore load_embeddings(const std::filesystem::path& path, Warnings* warnings = nullptr);
EmbeddingStore read_embeddings(std::istream& in, std::string_view source = "<stream>", Warnings* warnings = nullptr);

void write_embeddings(const EmbeddingStore& store, std::ostream& out);

/// Out-of-vocabulary tokens ranked by document frequency (descending, ties lexicographic).
std::vector<std::pair<std::string, std::size_t>> detect_top_oov(std::span<const TokenizedInquiry> corpus,
                                                                const EmbeddingStore& store,
                                                                std::size_t n);

/// Mean of the in-vocabulary vectors of the phrase's tokens (tokenized and lemmatized like
/// inquiry text); nullopt when no token is in vocabulary.
std::optional<std::vector<double>> embed_phrase(std::string_view phrase, const EmbeddingStore& store);

/// Adds one vector per defined term (keyed by the term's normalized token). Existing entries
/// are never overwritten. Throws DataError listing every term whose definition is fully OOV.
EmbeddingStore augment_with_definitions(EmbeddingStore store, const std::map<std::string, std::string>& definitions);

inline constexpr std::string_view kTradeNameFallback = "pharmaceutical medication drug";

/// Embeds each trade name through its mapped phrase, falling back to kTradeNameFallback
/// when the phrase is empty or fully OOV. Throws ConfigError if the fallback is needed
/// but itself fully OOV.
EmbeddingStore augment_with_trade_names(EmbeddingStore store, const std::map<std::string, std::string>& trade_names);

enum class OovMode {
    skip,          // mean over covered tokens only
    include_zeros, // OOV tokens count as zero vectors in the mean
};

struct InquiryVector {
    std::string id;
    std::vector<double> vector;
    std::size_t covered_tokens = 0;
    std::size_t total_tokens = 0;
    bool representable = false;
};

InquiryVector embed_inquiry(const TokenizedInquiry& inquiry, const EmbeddingStore& store,
                            OovMode mode = OovMode::skip);

/// The k tokens most cosine-similar to `token` (excluding it), descending, ties lexicographic.
/// Throws DataError if the probe is not in the store.
std::vector<std::pair<std::string, double>> most_similar(const EmbeddingStore& store, std::string_view token,
                                                         std::size_t k);

std::vector<double> to_double(std::span<const float> v);

} // namespace shorttopics
