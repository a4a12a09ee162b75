#include "shorttopics/resources.hpp"

#include "shorttopics/error.hpp"
#include "shorttopics/utf8.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#ifndef SHORTTOPICS_DEFAULT_RESOURCES
#define SHORTTOPICS_DEFAULT_RESOURCES "resources/default"
#endif

namespace shorttopics {

namespace {

struct Line {
    std::size_t number;
    std::string text;
};

// Non-blank, non-comment lines of an optional file. Missing file -> no lines.
std::vector<Line> read_lines(const std::filesystem::path& path) {
    std::vector<Line> lines;
    if (!std::filesystem::exists(path)) return lines;
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open resource file '" + path.string() + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string content = buffer.str();
    if (!utf8::is_valid(content)) throw DataError(path.string() + ": content is not valid UTF-8");

    std::istringstream stream(content);
    std::string raw;
    std::size_t n = 0;
    while (std::getline(stream, raw)) {
        ++n;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        if (n == 1 && raw.starts_with("\xEF\xBB\xBF")) raw.erase(0, 3);
        const auto trimmed = utf8::trim(raw);
        if (trimmed.empty() || trimmed.front() == '#') continue;
        lines.push_back({n, raw});
    }
    return lines;
}

std::string lowercase(std::string_view s) {
    std::string out;
    std::size_t pos = 0;
    while (pos < s.size()) utf8::append(out, utf8::to_lower(utf8::next(s, pos)));
    return out;
}

std::vector<std::string> split_words(std::string_view s) {
    std::vector<std::string> words;
    std::istringstream in{std::string(s)};
    std::string w;
    while (in >> w) words.push_back(w);
    return words;
}

// key TAB value; value may be empty only when allow_empty.
std::map<std::string, std::string> read_tsv(const std::filesystem::path& path, bool allow_empty_value,
                                            bool reject_duplicates) {
    std::map<std::string, std::string> out;
    for (const auto& line : read_lines(path)) {
        const auto tab = line.text.find('\t');
        std::string key;
        std::string value;
        if (tab == std::string::npos) {
            if (!allow_empty_value) {
                throw DataError(path.string() + ":" + std::to_string(line.number) + ": expected key<TAB>value");
            }
            key = std::string(utf8::trim(line.text));
        } else {
            key = std::string(utf8::trim(std::string_view(line.text).substr(0, tab)));
            value = std::string(utf8::trim(std::string_view(line.text).substr(tab + 1)));
        }
        if (key.empty()) throw DataError(path.string() + ":" + std::to_string(line.number) + ": empty key");
        if (value.empty() && !allow_empty_value) {
            throw DataError(path.string() + ":" + std::to_string(line.number) + ": empty value for '" + key + "'");
        }
        key = lowercase(key);
        if (!out.emplace(key, value).second && reject_duplicates) {
            throw DataError(path.string() + ":" + std::to_string(line.number) + ": duplicate key '" + key + "'");
        }
    }
    return out;
}

} // namespace

NoisePattern compile_noise_pattern(const std::string& pattern) {
    try {
        return {pattern, std::regex(pattern, std::regex::ECMAScript | std::regex::icase | std::regex::optimize)};
    } catch (const std::regex_error& e) {
        throw DataError("invalid regex '" + pattern + "': " + e.what());
    }
}

ResourceBundle load_resources(const std::filesystem::path& dir) {
    if (!dir.empty() && !std::filesystem::is_directory(dir)) {
        throw DataError("resource directory '" + dir.string() + "' does not exist");
    }
    ResourceBundle bundle;
    bundle.acronyms = read_tsv(dir / "acronyms.tsv", false, true);

    for (const auto& line : read_lines(dir / "noise_patterns.txt")) {
        try {
            bundle.noise_patterns.push_back(compile_noise_pattern(line.text));
        } catch (const DataError& e) {
            throw DataError((dir / "noise_patterns.txt").string() + ":" + std::to_string(line.number) + ": " +
                            e.what());
        }
    }

    for (const auto& line : read_lines(dir / "stopwords.txt")) {
        bundle.stopwords.insert(lowercase(utf8::trim(line.text)));
    }

    for (const auto& line : read_lines(dir / "stop_ngrams.txt")) {
        auto words = split_words(lowercase(line.text));
        if (words.size() < 2) {
            throw DataError((dir / "stop_ngrams.txt").string() + ":" + std::to_string(line.number) +
                            ": stop n-gram needs at least two tokens");
        }
        bundle.stop_ngrams.push_back(std::move(words));
    }

    bundle.oov_definitions = read_tsv(dir / "oov_definitions.tsv", false, true);
    bundle.trade_names = read_tsv(dir / "trade_names.tsv", true, true);
    return bundle;
}

std::filesystem::path default_resources_dir() {
    if (const char* env = std::getenv("SHORTTOPICS_RESOURCES"); env != nullptr && *env != '\0') {
        return env;
    }
    return SHORTTOPICS_DEFAULT_RESOURCES;
}

} // namespace shorttopics
