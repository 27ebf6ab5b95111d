#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace zipfdark::csv {

/// Makes whitespace and control characters visible: `\s` space, `\n`, `\t`,
/// `\r`, `\\` backslash, `\xHH` for other C0 controls and DEL.
std::string escape_surface(std::string_view surface);
/// Inverse of escape_surface. Throws ParseError on a bad escape.
std::string unescape_surface(std::string_view escaped);

/// RFC 4180 quoting when the field holds a comma, quote or line break.
std::string quote(std::string_view field);

/// Splits one CSV record (no embedded line breaks) honouring quotes.
std::vector<std::string> split_record(std::string_view line);

/// Reads the next non-empty line, stripping a trailing CR. False at EOF.
bool next_line(std::istream& in, std::string& line);

/// Shortest round-trip decimal form, locale independent.
std::string format_double(double value);

}  // namespace zipfdark::csv
