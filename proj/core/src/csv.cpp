#include "zipfdark/csv.hpp"

#include <charconv>
#include <cmath>
#include <istream>

#include "zipfdark/errors.hpp"

namespace zipfdark::csv {

std::string escape_surface(std::string_view surface) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  out.reserve(surface.size());
  for (char ch : surface) {
    const auto c = static_cast<unsigned char>(ch);
    switch (c) {
      case ' ': out += "\\s"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      case '\\': out += "\\\\"; break;
      default:
        if (c < 0x20 || c == 0x7F) {
          out += "\\x";
          out.push_back(kHex[c >> 4]);
          out.push_back(kHex[c & 0xF]);
        } else {
          out.push_back(ch);
        }
    }
  }
  return out;
}

std::string unescape_surface(std::string_view escaped) {
  std::string out;
  out.reserve(escaped.size());
  for (std::size_t i = 0; i < escaped.size(); ++i) {
    if (escaped[i] != '\\') {
      out.push_back(escaped[i]);
      continue;
    }
    if (++i >= escaped.size()) throw ParseError("dangling backslash in surface");
    switch (escaped[i]) {
      case 's': out.push_back(' '); break;
      case 'n': out.push_back('\n'); break;
      case 't': out.push_back('\t'); break;
      case 'r': out.push_back('\r'); break;
      case '\\': out.push_back('\\'); break;
      case 'x': {
        if (i + 2 >= escaped.size()) throw ParseError("truncated \\x escape");
        unsigned value = 0;
        auto [ptr, ec] =
            std::from_chars(escaped.data() + i + 1, escaped.data() + i + 3, value, 16);
        if (ec != std::errc() || ptr != escaped.data() + i + 3)
          throw ParseError("bad \\x escape in surface");
        out.push_back(static_cast<char>(value));
        i += 2;
        break;
      }
      default:
        throw ParseError(std::string("unknown escape \\") + escaped[i]);
    }
  }
  return out;
}

std::string quote(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::vector<std::string> split_record(std::string_view line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else {
      field.push_back(c);
    }
  }
  if (quoted) throw ParseError("unterminated quoted CSV field");
  fields.push_back(std::move(field));
  return fields;
}

bool next_line(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) return true;
  }
  return false;
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

}  // namespace zipfdark::csv
