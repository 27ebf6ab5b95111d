#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace zipfdark {

enum class TokenKind : std::uint8_t { Word, NonWord };

std::string_view to_string(TokenKind kind);
TokenKind token_kind_from_string(std::string_view name);

/// Half-open byte interval [begin, end) into the source text.
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
  friend bool operator==(const Span&, const Span&) = default;
};

struct Token {
  std::string surface;
  TokenKind kind = TokenKind::Word;
  Span span;

  friend bool operator==(const Token&, const Token&) = default;
};

enum class CharClass : std::uint8_t { WordChar, Delimiter };

/// A word run with ASCII case folded and U+2019 mapped to `'`, plus the
/// original byte offset of every folded byte boundary.
struct FoldedRun {
  std::string folded;
  std::vector<std::size_t> original_offset;  // size folded.size() + 1

  explicit FoldedRun(std::string_view run);
};

/// A contraction rule splits a word-character run into parts.
///
/// A pattern that starts with `*` matches any run ending in the remaining
/// literal, provided the stem the `*` stands for is non-empty; the first
/// part must then be `*`. Patterns without `*` match the whole run.
/// Matching folds ASCII case and treats U+2019 as an apostrophe; the
/// emitted parts are always slices of the original run.
class ContractionRule {
 public:
  /// Throws ParseError unless the parts concatenate to the pattern.
  ContractionRule(std::string pattern, std::vector<std::string> parts);

  const std::string& pattern() const { return pattern_; }
  const std::vector<std::string>& parts() const { return parts_; }
  bool has_stem() const { return has_stem_; }
  /// Length of the literal (non-`*`) portion, used for longest-match order.
  std::size_t literal_length() const { return literal_.size(); }

  /// Byte lengths of each emitted part if the rule matches `run`, else empty.
  std::vector<std::size_t> match(std::string_view run) const;
  std::vector<std::size_t> match(const FoldedRun& run) const;

 private:
  std::string pattern_;
  std::vector<std::string> parts_;
  std::string literal_;  // folded pattern without the leading `*`
  std::vector<std::size_t> literal_part_sizes_;
  bool has_stem_ = false;
};

struct TokenizerConfig {
  /// Tried longest literal first; ties keep insertion order.
  std::vector<ContractionRule> contraction_rules;
  /// Code points forced to be word characters regardless of category.
  std::vector<char32_t> extra_word_chars;
  /// Code points forced to be delimiters regardless of category.
  std::vector<char32_t> extra_delimiters;
  /// Merge consecutive identical delimiter characters into one token.
  bool collapse_delimiter_runs = false;

  static TokenizerConfig english_default();

  void sort_rules();
  CharClass classify(char32_t c) const;
};

/// English suffix rules (n't 's 're 'll 've 'd 'm) plus the `cha` clitic.
std::vector<ContractionRule> default_english_rules();

/// Parses `surface<TAB>part|part|...` lines; blank lines and `#` comments
/// are ignored.
std::vector<ContractionRule> parse_contraction_rules(std::string_view text);
std::vector<ContractionRule> load_contraction_rules(const std::filesystem::path& path);

/// Unicode Letter, Number and Mark categories are word characters; all else
/// is a delimiter. Apostrophes are resolved by `tokenize` from context.
CharClass classify_char(char32_t c);

bool is_apostrophe(char32_t c);

/// Lossless partition of UTF-8 text into word and non-word tokens.
/// Throws EncodingError on invalid UTF-8.
std::vector<Token> tokenize(std::string_view text, const TokenizerConfig& config);

/// Kind derived from the surface alone: Word iff it holds a word character.
TokenKind kind_of_surface(std::string_view surface, const TokenizerConfig& config);

}  // namespace zipfdark
