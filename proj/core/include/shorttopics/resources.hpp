#pragma once

#include <filesystem>
#include <map>
#include <regex>
#include <set>
#include <string>
#include <vector>

namespace shorttopics {

struct NoisePattern {
    std::string source;
    std::regex regex;
};

/// Curated lexical resources. Every file is optional.
///
/// Files inside the resource directory:
///   acronyms.tsv         key TAB expansion (keys unique, case-insensitive)
///   noise_patterns.txt   one ECMAScript regex per line, applied in order
///   stopwords.txt        one word per line
///   stop_ngrams.txt      space-separated tokens per line, at least two tokens
///   oov_definitions.tsv  term TAB definition phrase
///   trade_names.tsv      trade name TAB preferred-name phrase (may be empty)
///
/// Blank lines and lines starting with '#' are ignored.
struct ResourceBundle {
    std::map<std::string, std::string> acronyms; // lowercase key -> expansion
    std::vector<NoisePattern> noise_patterns;
    std::set<std::string> stopwords;
    std::vector<std::vector<std::string>> stop_ngrams;
    std::map<std::string, std::string> oov_definitions;
    std::map<std::string, std::string> trade_names;
};

ResourceBundle load_resources(const std::filesystem::path& dir);

/// Compiles a noise pattern (ECMAScript, case-insensitive). Throws DataError naming the pattern.
NoisePattern compile_noise_pattern(const std::string& pattern);

/// Directory holding the resources shipped with the library (set at build time).
std::filesystem::path default_resources_dir();

} // namespace shorttopics
