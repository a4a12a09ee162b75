#include "shorttopics/report.hpp"

#include "shorttopics/csv.hpp"

#include "json.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace shorttopics {

using ordered_json = nlohmann::ordered_json;

std::string topics_json(const RunReport& report) {
    ordered_json root;

    ordered_json config = ordered_json::object();
    for (const auto& [k, v] : describe_config(report.config)) config[k] = v;
    root["config"] = std::move(config);

    const auto& c = report.counts;
    root["counts"] = {
        {"inquiries", c.inquiries},
        {"representable", c.representable},
        {"clusters", c.clusters},
        {"topics_before_merge", c.topics_before_merge},
        {"topics_after_merge", c.topics_after_merge},
        {"outliers",
         {{"low-probability", c.low_probability}, {"too-long", c.too_long}, {"unrepresentable", c.unrepresentable}}},
    };

    const auto& inquiries = report.corpus.inquiries;
    ordered_json topics = ordered_json::array();
    for (const auto& t : report.topics.topics) {
        ordered_json jt;
        jt["id"] = t.id;
        jt["label"] = t.label();
        jt["name"] = t.name_tokens;
        jt["size"] = t.members.size();
        jt["compactness"] = t.metrics.compactness;
        jt["saliency"] = t.metrics.saliency;
        jt["quality"] = t.metrics.quality;
        jt["map"] = t.map ? ordered_json::array({(*t.map)[0], (*t.map)[1]}) : ordered_json(nullptr);
        ordered_json freqs = ordered_json::array();
        for (const auto& [tok, n] : t.word_frequencies) freqs.push_back(ordered_json::array({tok, n}));
        jt["word_frequencies"] = std::move(freqs);
        ordered_json members = ordered_json::array();
        for (const std::size_t m : t.members) members.push_back(inquiries[m].id);
        jt["members"] = std::move(members);
        topics.push_back(std::move(jt));
    }
    root["topics"] = std::move(topics);

    ordered_json outliers = ordered_json::array();
    for (const auto& o : report.topics.outliers) {
        outliers.push_back({{"id", inquiries[o.index].id}, {"reason", to_string(o.reason)}});
    }
    root["outliers"] = std::move(outliers);
    root["warnings"] = report.warnings;
    return root.dump(2) + "\n";
}

std::string metrics_csv(const RunReport& report) {
    std::ostringstream out;
    csv::write_row(out, {"id", "label", "size", "compactness", "saliency", "quality"});
    for (const auto& t : report.topics.topics) {
        csv::write_row(out, {std::to_string(t.id), t.label(), std::to_string(t.members.size()),
                             fmt::format("{:.6f}", t.metrics.compactness), fmt::format("{:.6f}", t.metrics.saliency),
                             fmt::format("{:.6f}", t.metrics.quality)});
    }
    return out.str();
}

namespace {

std::string xml_escape(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (const char ch : s) {
        switch (ch) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += ch;
        }
    }
    return out;
}

constexpr double kWidth = 960.0;
constexpr double kHeight = 720.0;
constexpr double kMargin = 90.0;
constexpr double kMaxRadius = 48.0;

} // namespace

std::string render_map_svg(std::span<const MapEntry> entries) {
    std::string svg = fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.0f}\" height=\"{:.0f}\" viewBox=\"0 0 {:.0f} {:.0f}\">\n",
        kWidth, kHeight, kWidth, kHeight);
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    double min_x = 0, max_x = 0, min_y = 0, max_y = 0;
    std::size_t max_size = 1;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const auto& e = entries[i];
        if (i == 0) {
            min_x = max_x = e.coords[0];
            min_y = max_y = e.coords[1];
        }
        min_x = std::min(min_x, e.coords[0]);
        max_x = std::max(max_x, e.coords[0]);
        min_y = std::min(min_y, e.coords[1]);
        max_y = std::max(max_y, e.coords[1]);
        max_size = std::max(max_size, e.size);
    }
    const auto scale = [](double v, double lo, double hi, double extent) {
        if (hi - lo <= 0.0) return extent / 2.0;
        return kMargin + (v - lo) / (hi - lo) * (extent - 2.0 * kMargin);
    };

    for (const auto& e : entries) {
        const double cx = scale(e.coords[0], min_x, max_x, kWidth);
        // SVG y grows downwards.
        const double cy = kHeight - scale(e.coords[1], min_y, max_y, kHeight);
        const double r = kMaxRadius * std::sqrt(static_cast<double>(e.size) / static_cast<double>(max_size));
        svg += fmt::format(
            "<g class=\"topic\">\n"
            "  <circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"{:.2f}\" fill=\"#4c78a8\" fill-opacity=\"0.45\" stroke=\"#2b4a6f\"/>\n"
            "  <text x=\"{:.2f}\" y=\"{:.2f}\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">{}</text>\n"
            "  <text x=\"{:.2f}\" y=\"{:.2f}\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"middle\" fill=\"#555\">q={:.2f} n={}</text>\n"
            "</g>\n",
            cx, cy, r, cx, cy - r - 14.0, xml_escape(e.label), cx, cy - r - 2.0, e.quality, e.size);
    }
    svg += "</svg>\n";
    return svg;
}

std::vector<MapEntry> map_entries(const TopicSet& topics) {
    std::vector<MapEntry> out;
    for (const auto& t : topics.topics) {
        if (!t.map) continue;
        out.push_back({*t.map, t.label(), t.members.size(), t.metrics.quality});
    }
    return out;
}

std::vector<StoredTopic> read_topics_json(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());
    std::vector<StoredTopic> out;
    try {
        const auto root = nlohmann::json::parse(in);
        for (const auto& jt : root.at("topics")) {
            StoredTopic t;
            t.id = jt.at("id").get<int>();
            t.label = jt.at("label").get<std::string>();
            t.size = jt.at("size").get<std::size_t>();
            t.compactness = jt.at("compactness").get<double>();
            t.saliency = jt.at("saliency").get<double>();
            t.quality = jt.at("quality").get<double>();
            if (const auto& m = jt.at("map"); !m.is_null()) t.map = std::array<double, 2>{m.at(0).get<double>(), m.at(1).get<double>()};
            out.push_back(std::move(t));
        }
    } catch (const nlohmann::json::exception& e) {
        throw DataError(path.string() + ": malformed topics file: " + e.what());
    }
    return out;
}

std::string oov_report_tsv(std::span<const std::pair<std::string, std::size_t>> rows) {
    std::string out = "token\tcount\n";
    for (const auto& [tok, n] : rows) out += fmt::format("{}\t{}\n", tok, n);
    return out;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    namespace fs = std::filesystem;
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw DataError("cannot write " + tmp.string());
        out.write(text.data(), static_cast<std::streamsize>(text.size()));
        out.flush();
        if (!out) {
            out.close();
            fs::remove(tmp);
            throw DataError("failed writing " + tmp.string());
        }
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp);
        throw DataError("cannot move " + tmp.string() + " into place: " + ec.message());
    }
}

} // namespace shorttopics
