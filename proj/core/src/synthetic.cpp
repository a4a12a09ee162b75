#include "shorttopics/synthetic.hpp"

#include "shorttopics/preprocess.hpp"
#include "shorttopics/resources.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>
#include <set>

namespace shorttopics {

namespace {

// Distribution helpers on top of the raw engine: the standard library's distributions are
// implementation-defined, so corpora would differ between toolchains.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    std::size_t index(std::size_t n) {
        // Rejection sampling keeps the result unbiased.
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
        std::uint64_t x = engine_();
        while (x >= limit) x = engine_();
        return static_cast<std::size_t>(x % n);
    }

    int between(int lo, int hi) { return lo + static_cast<int>(index(static_cast<std::size_t>(hi - lo + 1))); }

    double normal() {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    std::vector<double> unit(std::size_t dim) {
        std::vector<double> v(dim);
        double n = 0.0;
        while (n == 0.0) {
            for (auto& x : v) x = normal();
            n = norm(v);
        }
        for (auto& x : v) x /= n;
        return v;
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[index(i)]);
    }

private:
    std::mt19937_64 engine_;
};

constexpr std::string_view kConsonants = "bdfgklmnprtvz";
constexpr std::string_view kVowels = "aeiou";

const std::vector<std::string_view>& fillers() {
    static const std::vector<std::string_view> words{"the", "a", "is", "about", "and", "my", "of", "with",
                                                     "for", "some", "there", "this", "we", "our"};
    return words;
}

const std::vector<std::string_view>& closings() {
    static const std::vector<std::string_view> words{"", "", "Thank you.", "Kind regards.", "Good morning."};
    return words;
}

std::string pseudo_word(Rng& rng) {
    std::string w;
    for (int s = 0; s < 3; ++s) {
        w += kConsonants[rng.index(kConsonants.size())];
        w += kVowels[rng.index(kVowels.size())];
    }
    return w;
}

std::vector<std::string> fresh_words(Rng& rng, std::size_t count, std::set<std::string>& used) {
    std::vector<std::string> out;
    while (out.size() < count) {
        std::string w = pseudo_word(rng);
        if (lemmatize(w) != w) continue;
        if (!used.insert(w).second) continue;
        out.push_back(std::move(w));
    }
    return out;
}

std::string compose(Rng& rng, const std::vector<std::string>& words, std::size_t count) {
    std::string text;
    for (std::size_t i = 0; i < count; ++i) {
        if (!text.empty()) text += ' ';
        if (rng.index(2) == 0) {
            text += fillers()[rng.index(fillers().size())];
            text += ' ';
        }
        text += words[rng.index(words.size())];
    }
    text[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(text[0])));
    text += rng.index(3) == 0 ? "?" : ".";
    const auto closing = closings()[rng.index(closings().size())];
    if (!closing.empty()) {
        text += ' ';
        text += closing;
    }
    return text;
}

} // namespace

SyntheticCorpus generate_synthetic_corpus(const SyntheticOptions& options) {
    if (options.themes < 1 || options.per_theme < 1 || options.words_per_theme < 1) {
        throw ConfigError("synthetic corpus needs at least one theme, inquiry and word per theme");
    }
    if (options.min_words < 1 || options.max_words < options.min_words) {
        throw ConfigError("synthetic corpus: need 1 <= min_words <= max_words");
    }
    if (!(options.noise_fraction >= 0.0 && options.noise_fraction < 1.0)) {
        throw ConfigError("synthetic corpus: noise_fraction must lie in [0, 1)");
    }
    if (options.long_inquiries < 0) throw ConfigError("synthetic corpus: long_inquiries must be >= 0");

    Rng rng(options.seed);
    SyntheticCorpus out;
    out.corpus.product = options.product;

    std::set<std::string> used;
    for (int t = 0; t < options.themes; ++t) {
        out.theme_words.push_back(fresh_words(rng, static_cast<std::size_t>(options.words_per_theme), used));
    }

    struct Draft {
        std::string text;
        int label;
    };
    std::vector<Draft> drafts;
    for (int t = 0; t < options.themes; ++t) {
        for (int i = 0; i < options.per_theme; ++i) {
            const auto n = static_cast<std::size_t>(rng.between(options.min_words, options.max_words));
            drafts.push_back({compose(rng, out.theme_words[t], n), t});
        }
    }
    for (int i = 0; i < options.long_inquiries; ++i) {
        const int t = static_cast<int>(rng.index(static_cast<std::size_t>(options.themes)));
        std::string text = compose(rng, out.theme_words[t], static_cast<std::size_t>(options.max_words));
        while (text.size() <= 850) text += " and this is about the same thing as before";
        drafts.push_back({std::move(text), t});
    }

    const auto base = static_cast<double>(drafts.size());
    const auto n_noise = static_cast<std::size_t>(std::llround(options.noise_fraction * base / (1.0 - options.noise_fraction)));
    out.noise_words = fresh_words(rng, n_noise, used);
    for (const auto& w : out.noise_words) drafts.push_back({compose(rng, {w}, 1), -1});

    rng.shuffle(drafts);
    const int width = drafts.size() < 100000 ? 5 : 7;
    for (std::size_t i = 0; i < drafts.size(); ++i) {
        Inquiry q;
        q.id = fmt::format("syn-{:0{}}", i + 1, width);
        q.text = std::move(drafts[i].text);
        q.product = options.product;
        out.corpus.inquiries.push_back(std::move(q));
        out.labels.push_back(drafts[i].label);
    }
    return out;
}

SyntheticCorpus generate_synthetic_corpus(int themes, int per_theme, std::uint64_t seed) {
    SyntheticOptions o;
    o.themes = themes;
    o.per_theme = per_theme;
    o.seed = seed;
    return generate_synthetic_corpus(o);
}

EmbeddingStore synthetic_embeddings(const SyntheticCorpus& corpus, const SyntheticEmbeddingOptions& options) {
    const std::size_t dim = options.dim;
    const std::size_t themes = corpus.theme_words.size();
    if (themes > dim) {
        throw ConfigError(fmt::format("synthetic embeddings: {} themes need dimension >= {}, got {}", themes, themes, dim));
    }
    Rng rng(options.seed);

    // Orthonormal theme directions (Gram-Schmidt on random normals).
    std::vector<std::vector<double>> directions;
    while (directions.size() < themes) {
        auto v = rng.unit(dim);
        for (const auto& d : directions) {
            const double p = dot(v, d);
            for (std::size_t k = 0; k < dim; ++k) v[k] -= p * d[k];
        }
        const double n = norm(v);
        if (n < 1e-6) continue;
        for (auto& x : v) x /= n;
        directions.push_back(std::move(v));
    }

    struct Accepted {
        std::vector<double> v;
        std::size_t theme;
    };
    std::vector<Accepted> accepted;
    EmbeddingStore store(dim);
    constexpr int kMaxAttempts = 1000;
    for (std::size_t t = 0; t < themes; ++t) {
        for (const auto& word : corpus.theme_words[t]) {
            bool placed = false;
            for (int attempt = 0; attempt < kMaxAttempts && !placed; ++attempt) {
                auto offset = rng.unit(dim);
                std::vector<double> v(dim);
                for (std::size_t k = 0; k < dim; ++k) v[k] = directions[t][k] + options.spread * offset[k];
                bool ok = true;
                for (const auto& a : accepted) {
                    const double c = cosine(v, a.v);
                    if (a.theme == t ? c < options.min_intra_cosine : c > options.max_inter_cosine) {
                        ok = false;
                        break;
                    }
                }
                if (!ok) continue;
                store.insert(word, std::span<const double>(v), Provenance::file);
                accepted.push_back({std::move(v), t});
                placed = true;
            }
            if (!placed) {
                throw ConfigError("synthetic embeddings: cannot satisfy the cosine bounds for '" + word +
                                  "'; lower spread or raise dim");
            }
        }
    }
    for (const auto& word : corpus.noise_words) {
        const auto v = rng.unit(dim);
        store.insert(word, std::span<const double>(v), Provenance::file);
    }
    return store;
}

void write_labels(const SyntheticCorpus& corpus, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write labels file " + path.string());
    out << "id\tlabel\n";
    for (std::size_t i = 0; i < corpus.corpus.inquiries.size(); ++i) {
        out << corpus.corpus.inquiries[i].id << '\t' << corpus.labels[i] << '\n';
    }
    if (!out) throw DataError("failed writing labels file " + path.string());
}

std::vector<std::pair<std::string, int>> load_labels(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open labels file " + path.string());
    std::string line;
    if (!std::getline(in, line) || line != "id\tlabel") {
        throw DataError(path.string() + ":1: expected header 'id\\tlabel'");
    }
    std::vector<std::pair<std::string, int>> out;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto tab = line.find('\t');
        if (tab == std::string::npos) throw DataError(fmt::format("{}:{}: expected 2 fields", path.string(), lineno));
        try {
            std::size_t used = 0;
            const int label = std::stoi(line.substr(tab + 1), &used);
            if (used != line.size() - tab - 1) throw std::invalid_argument("trailing");
            out.emplace_back(line.substr(0, tab), label);
        } catch (const std::logic_error&) {
            throw DataError(fmt::format("{}:{}: invalid label", path.string(), lineno));
        }
    }
    return out;
}

PipelineConfig write_synthetic_workspace(const SyntheticCorpus& corpus, const EmbeddingStore& store,
                                         const std::filesystem::path& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir / "resources");
    save_corpus(corpus.corpus, dir / "corpus.jsonl", CorpusFormat::jsonl);
    {
        std::ofstream out(dir / "embeddings.txt", std::ios::binary);
        write_embeddings(store, out);
        if (!out) throw DataError("failed writing " + (dir / "embeddings.txt").string());
    }
    write_labels(corpus, dir / "labels.tsv");
    for (const char* name : {"acronyms.tsv", "noise_patterns.txt", "stopwords.txt", "stop_ngrams.txt"}) {
        fs::copy_file(default_resources_dir() / name, dir / "resources" / name, fs::copy_options::overwrite_existing);
    }

    PipelineConfig cfg;
    cfg.corpus_path = dir / "corpus.jsonl";
    cfg.embeddings_path = dir / "embeddings.txt";
    cfg.resources_dir = dir / "resources";
    cfg.output_dir = dir / "out";
    return cfg;
}

} // namespace shorttopics
