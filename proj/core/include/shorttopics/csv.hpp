#pragma once

#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace shorttopics::csv {

/// One parsed record and the 1-based line on which it started.
struct Record {
    std::vector<std::string> fields;
    std::size_t line = 0;
};

/// RFC-4180 reader: quoted fields may contain commas, CRLF and doubled quotes.
class Reader {
public:
    explicit Reader(std::istream& in, char delimiter = ',') : in_(in), delimiter_(delimiter) {}

    /// Next record, or nullopt at end of input. Throws DataError on an unterminated quote.
    std::optional<Record> next();

private:
    std::istream& in_;
    char delimiter_;
    std::size_t line_ = 1;
};

/// Quotes the field only when needed.
std::string escape(std::string_view field, char delimiter = ',');

void write_row(std::ostream& out, const std::vector<std::string>& fields, char delimiter = ',');

} // namespace shorttopics::csv
