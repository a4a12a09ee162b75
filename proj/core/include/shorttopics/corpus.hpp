#pragma once

#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace shorttopics {

/// One short free-text message.
struct Inquiry {
    std::string id;
    std::string text;
    std::string product;
    std::optional<std::string> received_at;

    bool operator==(const Inquiry&) const = default;
};

/// Ordered inquiries sharing one product tag.
struct Corpus {
    std::string product;
    std::vector<Inquiry> inquiries;

    std::size_t size() const noexcept { return inquiries.size(); }
};

enum class CorpusFormat { jsonl, csv };

/// Guesses the format from the file extension (.csv, otherwise jsonl).
CorpusFormat format_from_path(const std::filesystem::path& path);

std::optional<CorpusFormat> parse_corpus_format(std::string_view name);

/// Loads and validates a corpus. Errors carry the source name and line number.
Corpus load_corpus(const std::filesystem::path& path, CorpusFormat format);
Corpus load_corpus(const std::filesystem::path& path);

Corpus read_corpus(std::istream& in, CorpusFormat format, std::string_view source = "<stream>");

void save_corpus(const Corpus& corpus, const std::filesystem::path& path, CorpusFormat format);
void write_corpus(const Corpus& corpus, std::ostream& out, CorpusFormat format);

} // namespace shorttopics
