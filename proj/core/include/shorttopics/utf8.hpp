#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace shorttopics::utf8 {

bool is_valid(std::string_view bytes);

/// Number of code points; invalid bytes count as one code point each.
std::size_t length(std::string_view bytes);

/// Decodes the code point starting at `pos` and advances `pos`.
/// Invalid sequences yield U+FFFD and advance by one byte.
char32_t next(std::string_view bytes, std::size_t& pos);

void append(std::string& out, char32_t cp);

char32_t to_lower(char32_t cp);
bool is_space(char32_t cp);
bool is_alnum(char32_t cp);
bool is_digit(char32_t cp);

/// Whitespace trimming for ASCII and Unicode spaces.
std::string_view trim(std::string_view text);

} // namespace shorttopics::utf8
