#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace zipfdark::testing {

/// splitmix64, replayed bit-for-bit by scripts/gen_pearson_reference.py.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

inline std::filesystem::path data_path(std::string_view name) {
  return std::filesystem::path(ZIPFDARK_TEST_DATA_DIR) / name;
}

inline std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void spit(const std::filesystem::path& path, std::string_view contents) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << contents;
}

/// Fresh directory under the system temp dir, removed on destruction.
class ScratchDir {
 public:
  explicit ScratchDir(std::string_view tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("zipfdark-" + std::string(tag) + "-" + std::to_string(rd()) + "-" +
             std::to_string(std::chrono::steady_clock::now().time_since_epoch().count()));
    std::filesystem::create_directories(path_);
  }
  ~ScratchDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  ScratchDir(const ScratchDir&) = delete;
  ScratchDir& operator=(const ScratchDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

/// Random valid scalar values: weighted toward ASCII letters, spaces,
/// punctuation and apostrophes, with a tail of arbitrary non-surrogates.
inline char32_t random_scalar(SplitMix64& rng) {
  static constexpr std::u32string_view kInteresting =
      U" ,.;:!?'’\"-\n\t\r()éß́中١\U0001F600";
  const auto pick = rng.next() % 10;
  if (pick < 4) return static_cast<char32_t>('a' + rng.next() % 26);
  if (pick < 5) return static_cast<char32_t>('A' + rng.next() % 26);
  if (pick < 8) return kInteresting[rng.next() % kInteresting.size()];
  while (true) {
    const auto c = static_cast<char32_t>(rng.next() % 0x110000);
    if (c < 0xD800 || c > 0xDFFF) return c;
  }
}

/// Input series behind tests/data/pearson_reference.csv, in file order.
struct PearsonCase {
  std::vector<double> xs, ys;
};

inline std::vector<PearsonCase> pearson_reference_inputs(std::size_t count = 1000) {
  SplitMix64 rng(0x5EED2024);
  std::vector<PearsonCase> cases;
  for (std::size_t i = 0; i < count; ++i) {
    PearsonCase c;
    const auto n = 3 + rng.next() % 48;
    const double slope = 4.0 * rng.uniform() - 2.0;
    const double noise = 0.1 + 2.0 * rng.uniform();
    for (std::size_t j = 0; j < n; ++j) {
      const double x = 10.0 * rng.uniform();
      c.xs.push_back(x);
      c.ys.push_back(slope * x + noise * (2.0 * rng.uniform() - 1.0));
    }
    cases.push_back(std::move(c));
  }
  return cases;
}

/// Lower-case base-26 spelling of `i`, so every index is a distinct word.
inline std::string word_name(std::size_t i) {
  std::string s;
  do {
    s.insert(s.begin(), static_cast<char>('a' + i % 26));
    i /= 26;
  } while (i != 0);
  return "w" + s;
}

/// English-like text: `words` tokens drawn with P(rank r) ∝ 1/(r + k) over
/// `types` words, separated by single spaces, with a comma after roughly
/// `comma_rate` of the words and a newline-free layout.
inline std::string synthetic_text(SplitMix64& rng, std::size_t words, std::size_t types, double k,
                                  double comma_rate) {
  std::vector<double> cdf(types);
  double total = 0.0;
  for (std::size_t r = 0; r < types; ++r) {
    total += 1.0 / (static_cast<double>(r + 1) + k);
    cdf[r] = total;
  }
  std::string text;
  for (std::size_t i = 0; i < words; ++i) {
    const double u = rng.uniform() * total;
    const auto r = static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), u) -
                                            cdf.begin());
    if (i > 0) text += rng.uniform() < comma_rate ? ", " : " ";
    text += word_name(std::min(r, types - 1));
  }
  text += ".\n";
  return text;
}

}  // namespace zipfdark::testing
