#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace zipfdark {

struct CodePoint {
  char32_t value;
  std::size_t offset;  // byte offset of the first code unit
};

/// Strict decoder: rejects overlong forms, surrogates, values past U+10FFFF
/// and truncated sequences with an EncodingError carrying the byte offset.
std::vector<CodePoint> decode_utf8(std::string_view text);

void append_utf8(std::string& out, char32_t c);

}  // namespace zipfdark
