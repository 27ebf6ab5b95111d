#include "zipfdark/rankfreq.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <ostream>
#include <tuple>
#include <unordered_map>

#include "zipfdark/csv.hpp"
#include "zipfdark/errors.hpp"

namespace zipfdark {

std::string_view to_string(DistMode mode) {
  return mode == DistMode::Integrated ? "integrated" : "word-only";
}

DistMode dist_mode_from_string(std::string_view name) {
  if (name == "integrated") return DistMode::Integrated;
  if (name == "word-only") return DistMode::WordOnly;
  throw ParseError("unknown distribution mode '" + std::string(name) + "'");
}

bool rank_before(const DistEntry& a, const DistEntry& b) {
  if (a.freq != b.freq) return a.freq > b.freq;
  if (int c = a.surface.compare(b.surface); c != 0) return c < 0;
  return a.kind == TokenKind::Word && b.kind == TokenKind::NonWord;
}

RankFreqDist::RankFreqDist(DistMode mode, std::vector<DistEntry> entries)
    : mode_(mode), entries_(std::move(entries)) {
  if (entries_.empty()) throw EmptyDistributionError("no rankable tokens");
  std::sort(entries_.begin(), entries_.end(), rank_before);
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const auto& e = entries_[i];
    if (e.freq == 0) throw DomainError("zero frequency for '" + e.surface + "'");
    if (mode_ == DistMode::WordOnly && e.kind != TokenKind::Word)
      throw DomainError("non-word '" + e.surface + "' in word-only distribution");
    total_tokens_ += e.freq;
  }
  if (entries_.size() > 1) {
    std::vector<const DistEntry*> by_key;
    by_key.reserve(entries_.size());
    for (const auto& e : entries_) by_key.push_back(&e);
    std::sort(by_key.begin(), by_key.end(), [](const DistEntry* a, const DistEntry* b) {
      return std::tie(a->surface, a->kind) < std::tie(b->surface, b->kind);
    });
    for (std::size_t i = 1; i < by_key.size(); ++i) {
      if (by_key[i - 1]->surface == by_key[i]->surface && by_key[i - 1]->kind == by_key[i]->kind)
        throw DomainError("duplicate entry '" + by_key[i]->surface + "'");
    }
  }
}

const DistEntry& RankFreqDist::at_rank(std::size_t rank) const {
  if (rank == 0 || rank > entries_.size())
    throw RangeError("rank " + std::to_string(rank) + " outside 1.." +
                     std::to_string(entries_.size()));
  return entries_[rank - 1];
}

std::vector<std::uint64_t> RankFreqDist::freqs() const {
  std::vector<std::uint64_t> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.freq);
  return out;
}

RankFreqDist build_dist(std::span<const Token> tokens, DistMode mode) {
  struct Key {
    std::string_view surface;
    TokenKind kind;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const {
      return std::hash<std::string_view>{}(k.surface) ^ static_cast<std::size_t>(k.kind);
    }
  };
  std::unordered_map<Key, std::uint64_t, KeyHash> counts;
  for (const Token& t : tokens) {
    if (mode == DistMode::WordOnly && t.kind != TokenKind::Word) continue;
    ++counts[Key{t.surface, t.kind}];
  }
  if (counts.empty()) throw EmptyDistributionError("no rankable tokens");

  std::vector<DistEntry> entries;
  entries.reserve(counts.size());
  for (const auto& [key, freq] : counts)
    entries.push_back(DistEntry{std::string(key.surface), key.kind, freq});
  return RankFreqDist(mode, std::move(entries));
}

RankMap::RankMap(std::vector<std::size_t> n_of_r) : n_of_r_(std::move(n_of_r)) {
  if (n_of_r_.empty()) throw ConsistencyError("empty rank map");
  for (std::size_t i = 0; i < n_of_r_.size(); ++i) {
    if (n_of_r_[i] < i + 1) throw ConsistencyError("integrated rank below word rank");
    if (i > 0 && n_of_r_[i] <= n_of_r_[i - 1])
      throw ConsistencyError("rank map is not strictly increasing");
  }
}

std::size_t RankMap::n_of(std::size_t r) const {
  if (r == 0 || r > n_of_r_.size())
    throw RangeError("word rank " + std::to_string(r) + " outside 1.." +
                     std::to_string(n_of_r_.size()));
  return n_of_r_[r - 1];
}

RankMap rank_map(const RankFreqDist& integrated, const RankFreqDist& word_only) {
  std::unordered_map<std::string_view, std::size_t> integrated_rank;
  integrated_rank.reserve(integrated.size());
  for (std::size_t n = 1; n <= integrated.size(); ++n) {
    const auto& e = integrated.at_rank(n);
    if (e.kind == TokenKind::Word) integrated_rank.emplace(e.surface, n);
  }
  std::vector<std::size_t> n_of_r;
  n_of_r.reserve(word_only.size());
  for (const auto& e : word_only.entries()) {
    auto it = integrated_rank.find(e.surface);
    if (it == integrated_rank.end())
      throw ConsistencyError("word '" + e.surface + "' missing from integrated distribution");
    if (integrated.at_rank(it->second).freq != e.freq)
      throw ConsistencyError("frequency of '" + e.surface + "' differs between distributions");
    n_of_r.push_back(it->second);
  }
  return RankMap(std::move(n_of_r));
}

void write_dist_csv(std::ostream& out, const RankFreqDist& dist) {
  out << "rank,surface,kind,freq\n";
  std::size_t rank = 1;
  for (const auto& e : dist.entries()) {
    out << rank++ << ',' << csv::quote(csv::escape_surface(e.surface)) << ',' << to_string(e.kind)
        << ',' << e.freq << '\n';
  }
}

namespace {

std::uint64_t parse_count(const std::string& field, std::string_view what) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size())
    throw ParseError("bad " + std::string(what) + " '" + field + "'");
  return value;
}

}  // namespace

RankFreqDist read_dist_csv(std::istream& in, DistMode mode) {
  std::string line;
  if (!csv::next_line(in, line)) throw ParseError("empty distribution CSV");
  if (line != "rank,surface,kind,freq") throw ParseError("unexpected distribution CSV header");
  std::vector<DistEntry> entries;
  while (csv::next_line(in, line)) {
    auto fields = csv::split_record(line);
    if (fields.size() != 4) throw ParseError("distribution CSV row needs 4 fields: " + line);
    DistEntry e{csv::unescape_surface(fields[1]), token_kind_from_string(fields[2]),
                parse_count(fields[3], "frequency")};
    if (mode == DistMode::WordOnly && e.kind != TokenKind::Word) continue;
    entries.push_back(std::move(e));
  }
  return RankFreqDist(mode, std::move(entries));
}

void write_rank_map_csv(std::ostream& out, const RankFreqDist& word_only, const RankMap& map) {
  out << "r,surface,freq,n_r\n";
  for (std::size_t r = 1; r <= map.size(); ++r) {
    const auto& e = word_only.at_rank(r);
    out << r << ',' << csv::quote(csv::escape_surface(e.surface)) << ',' << e.freq << ','
        << map.n_of(r) << '\n';
  }
}

}  // namespace zipfdark
