#pragma once

#include "shorttopics/config.hpp"
#include "shorttopics/corpus.hpp"
#include "shorttopics/embedding.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace shorttopics {

struct SyntheticOptions {
    int themes = 5;
    int per_theme = 40;
    std::uint64_t seed = 1;
    std::string product = "synthetic";
    int words_per_theme = 15;
    int min_words = 4; // theme words per inquiry
    int max_words = 8;
    /// Fraction of the final corpus made of single-word inquiries whose word vector points
    /// in a uniformly random direction (ground-truth label -1).
    double noise_fraction = 0.0;
    /// Extra inquiries padded beyond 800 characters, labelled with their theme.
    int long_inquiries = 0;
};

struct SyntheticCorpus {
    Corpus corpus;
    std::vector<int> labels; // per inquiry; -1 for random-direction noise
    std::vector<std::vector<std::string>> theme_words;
    std::vector<std::string> noise_words;
};

/// Deterministic for fixed options: inquiry i mixes theme words with stopword fillers.
SyntheticCorpus generate_synthetic_corpus(const SyntheticOptions& options);
SyntheticCorpus generate_synthetic_corpus(int themes, int per_theme, std::uint64_t seed);

struct SyntheticEmbeddingOptions {
    std::size_t dim = 50;
    std::uint64_t seed = 1;
    double spread = 0.3;       // norm of each word's offset from its theme direction
    double min_intra_cosine = 0.8;
    double max_inter_cosine = 0.2;
};

/// Word vectors for the corpus vocabulary: orthonormal theme directions plus bounded random
/// offsets, resampled until every intra-theme pair has cosine >= min_intra_cosine and every
/// inter-theme pair <= max_inter_cosine. Noise words get uniformly random unit directions.
/// Throws ConfigError when themes > dim.
EmbeddingStore synthetic_embeddings(const SyntheticCorpus& corpus, const SyntheticEmbeddingOptions& options);

/// Sidecar ground truth: header "id\tlabel" then one row per inquiry.
void write_labels(const SyntheticCorpus& corpus, const std::filesystem::path& path);
std::vector<std::pair<std::string, int>> load_labels(const std::filesystem::path& path);

/// Writes corpus.jsonl, embeddings.txt, labels.tsv and a resources/ directory holding the
/// shipped lexical lists (no definition or trade-name tables: their phrases use English words
/// the synthetic vocabulary lacks). Returns a config pointing at them, output under dir/out.
PipelineConfig write_synthetic_workspace(const SyntheticCorpus& corpus, const EmbeddingStore& store,
                                         const std::filesystem::path& dir);

} // namespace shorttopics
