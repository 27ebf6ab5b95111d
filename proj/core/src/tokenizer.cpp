#include "zipfdark/tokenizer.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <unicode/uchar.h>

#include "zipfdark/errors.hpp"
#include "zipfdark/utf8.hpp"

namespace zipfdark {

std::string_view to_string(TokenKind kind) {
  return kind == TokenKind::Word ? "word" : "nonword";
}

TokenKind token_kind_from_string(std::string_view name) {
  if (name == "word") return TokenKind::Word;
  if (name == "nonword") return TokenKind::NonWord;
  throw ParseError("unknown token kind '" + std::string(name) + "'");
}

bool is_apostrophe(char32_t c) { return c == U'\'' || c == U'’'; }

CharClass classify_char(char32_t c) {
  constexpr std::uint32_t kWordMask = U_GC_L_MASK | U_GC_N_MASK | U_GC_M_MASK;
  return (U_GET_GC_MASK(static_cast<UChar32>(c)) & kWordMask) != 0 ? CharClass::WordChar
                                                                   : CharClass::Delimiter;
}

CharClass TokenizerConfig::classify(char32_t c) const {
  if (std::find(extra_delimiters.begin(), extra_delimiters.end(), c) != extra_delimiters.end())
    return CharClass::Delimiter;
  if (std::find(extra_word_chars.begin(), extra_word_chars.end(), c) != extra_word_chars.end())
    return CharClass::WordChar;
  return classify_char(c);
}

FoldedRun::FoldedRun(std::string_view run) {
  folded.reserve(run.size());
  original_offset.reserve(run.size() + 1);
  std::size_t i = 0;
  while (i < run.size()) {
    // U+2019 RIGHT SINGLE QUOTATION MARK, E2 80 99
    if (run.compare(i, 3, "\xE2\x80\x99") == 0) {
      original_offset.push_back(i);
      folded.push_back('\'');
      i += 3;
      continue;
    }
    char c = run[i];
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    original_offset.push_back(i);
    folded.push_back(c);
    ++i;
  }
  original_offset.push_back(run.size());
}

ContractionRule::ContractionRule(std::string pattern, std::vector<std::string> parts)
    : pattern_(std::move(pattern)), parts_(std::move(parts)) {
  if (pattern_.empty() || parts_.empty())
    throw ParseError("contraction rule needs a pattern and at least one part");
  std::string joined;
  for (const auto& part : parts_) {
    if (part.empty()) throw ParseError("empty part in contraction rule '" + pattern_ + "'");
    joined += part;
  }
  if (joined != pattern_)
    throw ParseError("parts of contraction rule '" + pattern_ + "' do not concatenate to it");

  has_stem_ = pattern_.front() == '*';
  std::size_t first_literal_part = 0;
  if (has_stem_) {
    if (parts_.front() != "*")
      throw ParseError("stem rule '" + pattern_ + "' must start with a '*' part");
    if (parts_.size() < 2) throw ParseError("stem rule '" + pattern_ + "' has no suffix");
    first_literal_part = 1;
  }
  for (std::size_t p = first_literal_part; p < parts_.size(); ++p) {
    if (parts_[p].find('*') != std::string::npos)
      throw ParseError("'*' may only lead a contraction rule: '" + pattern_ + "'");
    FoldedRun folded(parts_[p]);
    literal_ += folded.folded;
    literal_part_sizes_.push_back(folded.folded.size());
  }
}

std::vector<std::size_t> ContractionRule::match(std::string_view run) const {
  return match(FoldedRun(run));
}

std::vector<std::size_t> ContractionRule::match(const FoldedRun& run) const {
  const std::string& f = run.folded;
  std::size_t stem = 0;
  if (has_stem_) {
    if (f.size() <= literal_.size()) return {};
    if (f.compare(f.size() - literal_.size(), literal_.size(), literal_) != 0) return {};
    stem = f.size() - literal_.size();
  } else if (f != literal_) {
    return {};
  }

  std::vector<std::size_t> sizes;
  std::size_t folded_pos = 0;
  std::size_t original_pos = 0;
  auto emit_until = [&](std::size_t folded_end) {
    std::size_t original_end = run.original_offset[folded_end];
    sizes.push_back(original_end - original_pos);
    original_pos = original_end;
    folded_pos = folded_end;
  };
  if (has_stem_) emit_until(stem);
  for (std::size_t len : literal_part_sizes_) emit_until(folded_pos + len);
  return sizes;
}

void TokenizerConfig::sort_rules() {
  std::stable_sort(contraction_rules.begin(), contraction_rules.end(),
                   [](const ContractionRule& a, const ContractionRule& b) {
                     return a.literal_length() > b.literal_length();
                   });
}

std::vector<ContractionRule> default_english_rules() {
  return {
      {"*n'tcha", {"*", "n't", "cha"}},
      {"*n't", {"*", "n't"}},
      {"*'ll", {"*", "'ll"}},
      {"*'re", {"*", "'re"}},
      {"*'ve", {"*", "'ve"}},
      {"*'s", {"*", "'s"}},
      {"*'d", {"*", "'d"}},
      {"*'m", {"*", "'m"}},
  };
}

TokenizerConfig TokenizerConfig::english_default() {
  TokenizerConfig config;
  config.contraction_rules = default_english_rules();
  config.sort_rules();
  return config;
}

std::vector<ContractionRule> parse_contraction_rules(std::string_view text) {
  std::vector<ContractionRule> rules;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;

    std::size_t tab = line.find('\t');
    if (tab == std::string_view::npos)
      throw ParseError("contraction rule line " + std::to_string(line_no) + ": missing tab");
    std::string pattern(line.substr(0, tab));
    std::vector<std::string> parts;
    std::string_view rest = line.substr(tab + 1);
    std::size_t start = 0;
    while (true) {
      std::size_t bar = rest.find('|', start);
      parts.emplace_back(rest.substr(start, bar == std::string_view::npos ? bar : bar - start));
      if (bar == std::string_view::npos) break;
      start = bar + 1;
    }
    try {
      rules.emplace_back(std::move(pattern), std::move(parts));
    } catch (const ParseError& e) {
      throw ParseError("contraction rule line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return rules;
}

std::vector<ContractionRule> load_contraction_rules(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open contraction rule file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_contraction_rules(buffer.str());
}

namespace {

void emit_word_run(std::string_view text, std::size_t begin, std::size_t end,
                   const TokenizerConfig& config, std::vector<Token>& out) {
  std::string_view run = text.substr(begin, end - begin);
  if (!config.contraction_rules.empty()) {
    FoldedRun folded(run);
    for (const auto& rule : config.contraction_rules) {
      auto sizes = rule.match(folded);
      if (sizes.empty()) continue;
      std::size_t pos = begin;
      for (std::size_t size : sizes) {
        std::string surface(text.substr(pos, size));
        TokenKind kind = kind_of_surface(surface, config);
        out.push_back(Token{std::move(surface), kind, Span{pos, pos + size}});
        pos += size;
      }
      return;
    }
  }
  out.push_back(Token{std::string(run), TokenKind::Word, Span{begin, end}});
}

}  // namespace

std::vector<Token> tokenize(std::string_view text, const TokenizerConfig& config) {
  const std::vector<CodePoint> cps = decode_utf8(text);
  const std::size_t n = cps.size();

  std::vector<bool> word(n);
  for (std::size_t i = 0; i < n; ++i) word[i] = config.classify(cps[i].value) == CharClass::WordChar;
  auto interior_apostrophe = [&](std::size_t i) {
    return is_apostrophe(cps[i].value) && !word[i] && i > 0 && i + 1 < n && word[i - 1] &&
           word[i + 1];
  };

  std::vector<Token> tokens;
  tokens.reserve(n / 3 + 1);
  std::size_t i = 0;
  while (i < n) {
    const std::size_t begin = cps[i].offset;
    if (word[i]) {
      std::size_t j = i + 1;
      while (j < n && (word[j] || interior_apostrophe(j))) ++j;
      const std::size_t end = j < n ? cps[j].offset : text.size();
      emit_word_run(text, begin, end, config, tokens);
      i = j;
      continue;
    }
    std::size_t j = i + 1;
    if (config.collapse_delimiter_runs) {
      while (j < n && !word[j] && cps[j].value == cps[i].value) ++j;
    }
    const std::size_t end = j < n ? cps[j].offset : text.size();
    tokens.push_back(
        Token{std::string(text.substr(begin, end - begin)), TokenKind::NonWord, Span{begin, end}});
    i = j;
  }
  return tokens;
}

TokenKind kind_of_surface(std::string_view surface, const TokenizerConfig& config) {
  for (const CodePoint& cp : decode_utf8(surface)) {
    if (config.classify(cp.value) == CharClass::WordChar) return TokenKind::Word;
  }
  return TokenKind::NonWord;
}

}  // namespace zipfdark
