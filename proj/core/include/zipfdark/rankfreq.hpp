#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "zipfdark/tokenizer.hpp"

namespace zipfdark {

enum class DistMode : std::uint8_t { Integrated, WordOnly };

std::string_view to_string(DistMode mode);
DistMode dist_mode_from_string(std::string_view name);

struct DistEntry {
  std::string surface;
  TokenKind kind = TokenKind::Word;
  std::uint64_t freq = 0;

  friend bool operator==(const DistEntry&, const DistEntry&) = default;
};

/// Rank order: frequency descending, then surface ascending (bytewise), then
/// words before non-words.
bool rank_before(const DistEntry& a, const DistEntry& b);

/// Frequency-ranked type table. Ranks are 1-based.
class RankFreqDist {
 public:
  /// Sorts `entries` into rank order. Throws EmptyDistributionError when
  /// empty, DomainError on zero counts, duplicate keys, or non-words in
  /// WordOnly mode.
  RankFreqDist(DistMode mode, std::vector<DistEntry> entries);

  DistMode mode() const { return mode_; }
  const std::vector<DistEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  std::uint64_t total_tokens() const { return total_tokens_; }

  const DistEntry& at_rank(std::size_t rank) const;
  std::uint64_t freq(std::size_t rank) const { return at_rank(rank).freq; }
  std::vector<std::uint64_t> freqs() const;

 private:
  DistMode mode_;
  std::vector<DistEntry> entries_;
  std::uint64_t total_tokens_ = 0;
};

/// Counts surface multiplicities, keyed by (surface, kind). WordOnly drops
/// non-word tokens first. Throws EmptyDistributionError if nothing remains.
RankFreqDist build_dist(std::span<const Token> tokens, DistMode mode);

/// Word rank r -> integrated rank n_r.
class RankMap {
 public:
  explicit RankMap(std::vector<std::size_t> n_of_r);

  /// n_r for 1-based word rank r.
  std::size_t n_of(std::size_t r) const;
  std::size_t n1() const { return n_of_r_.front(); }
  std::size_t size() const { return n_of_r_.size(); }
  const std::vector<std::size_t>& values() const { return n_of_r_; }

 private:
  std::vector<std::size_t> n_of_r_;
};

/// Throws ConsistencyError when a word entry is missing from `integrated`
/// or its frequency differs there.
RankMap rank_map(const RankFreqDist& integrated, const RankFreqDist& word_only);

/// `rank,surface,kind,freq` with a header row; surfaces escaped per
/// escape_surface.
void write_dist_csv(std::ostream& out, const RankFreqDist& dist);
RankFreqDist read_dist_csv(std::istream& in, DistMode mode);

/// `r,surface,freq,n_r`
void write_rank_map_csv(std::ostream& out, const RankFreqDist& word_only, const RankMap& map);

}  // namespace zipfdark
