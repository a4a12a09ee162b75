#include "shorttopics/corpus.hpp"

#include "shorttopics/csv.hpp"
#include "shorttopics/error.hpp"
#include "shorttopics/utf8.hpp"

#include "json.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_set>

namespace shorttopics {

namespace {

using nlohmann::json;

std::string located(std::string_view source, std::size_t line, const std::string& message) {
    return std::string(source) + ":" + std::to_string(line) + ": " + message;
}

class CorpusBuilder {
public:
    explicit CorpusBuilder(std::string_view source) : source_(source) {}

    void add(Inquiry inquiry, std::size_t line) {
        if (inquiry.id.empty()) throw DataError(located(source_, line, "empty id"));
        if (!utf8::is_valid(inquiry.text) || !utf8::is_valid(inquiry.id) || !utf8::is_valid(inquiry.product)) {
            throw DataError(located(source_, line, "invalid UTF-8"));
        }
        inquiry.text = std::string(utf8::trim(inquiry.text));
        if (inquiry.text.empty()) {
            throw DataError(located(source_, line, "empty text for id '" + inquiry.id + "'"));
        }
        if (!seen_.insert(inquiry.id).second) {
            throw DataError(located(source_, line, "duplicate id '" + inquiry.id + "'"));
        }
        if (corpus_.inquiries.empty()) {
            corpus_.product = inquiry.product;
        } else if (inquiry.product != corpus_.product) {
            throw DataError(located(source_, line, "product '" + inquiry.product + "' differs from corpus product '" +
                                                       corpus_.product + "'"));
        }
        corpus_.inquiries.push_back(std::move(inquiry));
    }

    Corpus finish() {
        if (corpus_.inquiries.empty()) throw DataError(std::string(source_) + ": empty corpus");
        return std::move(corpus_);
    }

private:
    std::string_view source_;
    Corpus corpus_;
    std::unordered_set<std::string> seen_;
};

std::string required_string(const json& obj, const char* key, std::string_view source, std::size_t line) {
    const auto it = obj.find(key);
    if (it == obj.end()) throw DataError(located(source, line, std::string("missing key '") + key + "'"));
    if (!it->is_string()) throw DataError(located(source, line, std::string("key '") + key + "' is not a string"));
    return it->get<std::string>();
}

Corpus read_jsonl(std::istream& in, std::string_view source) {
    CorpusBuilder builder(source);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (utf8::trim(line).empty()) continue;
        json obj;
        try {
            obj = json::parse(line);
        } catch (const json::parse_error& e) {
            throw DataError(located(source, line_no, std::string("malformed JSON: ") + e.what()));
        }
        if (!obj.is_object()) throw DataError(located(source, line_no, "record is not a JSON object"));
        Inquiry inquiry;
        inquiry.id = required_string(obj, "id", source, line_no);
        inquiry.text = required_string(obj, "text", source, line_no);
        inquiry.product = required_string(obj, "product", source, line_no);
        if (const auto it = obj.find("received_at"); it != obj.end() && !it->is_null()) {
            if (!it->is_string()) throw DataError(located(source, line_no, "key 'received_at' is not a string"));
            inquiry.received_at = it->get<std::string>();
        }
        builder.add(std::move(inquiry), line_no);
    }
    return builder.finish();
}

Corpus read_csv(std::istream& in, std::string_view source) {
    csv::Reader reader(in);
    auto header = reader.next();
    if (!header) throw DataError(std::string(source) + ": empty corpus");
    std::map<std::string, std::size_t> columns;
    for (std::size_t i = 0; i < header->fields.size(); ++i) {
        std::string name(utf8::trim(header->fields[i]));
        if (i == 0 && name.starts_with("\xEF\xBB\xBF")) name.erase(0, 3);
        columns[name] = i;
    }
    for (const char* key : {"id", "text", "product"}) {
        if (!columns.contains(key)) {
            throw DataError(located(source, header->line, std::string("schema error: missing column '") + key + "'"));
        }
    }
    const auto received = columns.find("received_at");

    CorpusBuilder builder(source);
    while (auto record = reader.next()) {
        if (record->fields.size() == 1 && utf8::trim(record->fields[0]).empty()) continue;
        if (record->fields.size() != header->fields.size()) {
            throw DataError(located(source, record->line,
                                    "expected " + std::to_string(header->fields.size()) + " fields, found " +
                                        std::to_string(record->fields.size())));
        }
        Inquiry inquiry;
        inquiry.id = record->fields[columns["id"]];
        inquiry.text = record->fields[columns["text"]];
        inquiry.product = record->fields[columns["product"]];
        if (received != columns.end() && !record->fields[received->second].empty()) {
            inquiry.received_at = record->fields[received->second];
        }
        builder.add(std::move(inquiry), record->line);
    }
    return builder.finish();
}

} // namespace

CorpusFormat format_from_path(const std::filesystem::path& path) {
    return path.extension() == ".csv" ? CorpusFormat::csv : CorpusFormat::jsonl;
}

std::optional<CorpusFormat> parse_corpus_format(std::string_view name) {
    if (name == "jsonl") return CorpusFormat::jsonl;
    if (name == "csv") return CorpusFormat::csv;
    return std::nullopt;
}

Corpus read_corpus(std::istream& in, CorpusFormat format, std::string_view source) {
    return format == CorpusFormat::csv ? read_csv(in, source) : read_jsonl(in, source);
}

Corpus load_corpus(const std::filesystem::path& path, CorpusFormat format) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open corpus file '" + path.string() + "'");
    return read_corpus(in, format, path.string());
}

Corpus load_corpus(const std::filesystem::path& path) { return load_corpus(path, format_from_path(path)); }

void write_corpus(const Corpus& corpus, std::ostream& out, CorpusFormat format) {
    if (format == CorpusFormat::csv) {
        const bool with_date = std::any_of(corpus.inquiries.begin(), corpus.inquiries.end(),
                                           [](const Inquiry& q) { return q.received_at.has_value(); });
        std::vector<std::string> header{"id", "text", "product"};
        if (with_date) header.emplace_back("received_at");
        csv::write_row(out, header);
        for (const auto& q : corpus.inquiries) {
            std::vector<std::string> row{q.id, q.text, q.product};
            if (with_date) row.push_back(q.received_at.value_or(""));
            csv::write_row(out, row);
        }
        return;
    }
    for (const auto& q : corpus.inquiries) {
        nlohmann::ordered_json obj;
        obj["id"] = q.id;
        obj["text"] = q.text;
        obj["product"] = q.product;
        if (q.received_at) obj["received_at"] = *q.received_at;
        out << obj.dump() << '\n';
    }
}

void save_corpus(const Corpus& corpus, const std::filesystem::path& path, CorpusFormat format) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write corpus file '" + path.string() + "'");
    write_corpus(corpus, out, format);
}

} // namespace shorttopics
