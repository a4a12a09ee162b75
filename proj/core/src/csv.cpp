#include "shorttopics/csv.hpp"

#include "shorttopics/error.hpp"

#include <string>

namespace shorttopics::csv {

std::optional<Record> Reader::next() {
    Record record;
    record.line = line_;
    std::string field;
    bool in_quotes = false;
    bool field_quoted = false;
    bool any = false;

    int ch;
    while ((ch = in_.get()) != std::char_traits<char>::eof()) {
        any = true;
        const char c = static_cast<char>(ch);
        if (in_quotes) {
            if (c == '"') {
                if (in_.peek() == '"') {
                    in_.get();
                    field.push_back('"');
                } else {
                    in_quotes = false;
                }
            } else {
                if (c == '\n') ++line_;
                field.push_back(c);
            }
            continue;
        }
        if (c == '"' && field.empty() && !field_quoted) {
            in_quotes = true;
            field_quoted = true;
        } else if (c == delimiter_) {
            record.fields.push_back(std::move(field));
            field.clear();
            field_quoted = false;
        } else if (c == '\r') {
            if (in_.peek() == '\n') continue;
            ++line_;
            record.fields.push_back(std::move(field));
            return record;
        } else if (c == '\n') {
            ++line_;
            record.fields.push_back(std::move(field));
            return record;
        } else {
            field.push_back(c);
        }
    }
    if (in_quotes) {
        throw DataError("line " + std::to_string(record.line) + ": unterminated quoted field");
    }
    if (!any) return std::nullopt;
    record.fields.push_back(std::move(field));
    return record;
}

std::string escape(std::string_view field, char delimiter) {
    const bool needs_quotes = field.find_first_of(std::string{'"', '\n', '\r', delimiter}) != std::string_view::npos;
    if (!needs_quotes) return std::string(field);
    std::string out = "\"";
    for (const char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

void write_row(std::ostream& out, const std::vector<std::string>& fields, char delimiter) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i > 0) out.put(delimiter);
        out << escape(fields[i], delimiter);
    }
    out << "\r\n";
}

} // namespace shorttopics::csv
