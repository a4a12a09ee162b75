#pragma once

#include "shorttopics/pipeline.hpp"

#include <array>
#include <filesystem>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace shorttopics {

/// topics.json text (stable key order, no timings) for a finished run.
std::string topics_json(const RunReport& report);

/// metrics.csv text: id,label,size,compactness,saliency,quality.
std::string metrics_csv(const RunReport& report);

struct MapEntry {
    std::array<double, 2> coords{};
    std::string label;
    std::size_t size = 0;
    double quality = 0.0;
};

/// SVG with one labelled circle per topic; radius proportional to sqrt(size).
std::string render_map_svg(std::span<const MapEntry> entries);

/// Map entries of the topics that have coordinates.
std::vector<MapEntry> map_entries(const TopicSet& topics);

/// Reads a topics.json file back into map entries and metric rows (report-only command).
struct StoredTopic {
    int id = 0;
    std::string label;
    std::size_t size = 0;
    double compactness = 0.0;
    double saliency = 0.0;
    double quality = 0.0;
    std::optional<std::array<double, 2>> map;
};
std::vector<StoredTopic> read_topics_json(const std::filesystem::path& path);

std::string oov_report_tsv(std::span<const std::pair<std::string, std::size_t>> rows);

/// Writes the text atomically (temporary file, then rename).
void write_text_file(const std::filesystem::path& path, const std::string& text);

} // namespace shorttopics
