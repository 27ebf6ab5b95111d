#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "test_support.hpp"
#include "zipfdark/corpus_experiment.hpp"
#include "zipfdark/csv.hpp"
#include "zipfdark/errors.hpp"
#include "zipfdark/persistence.hpp"

namespace zipfdark {
namespace {

const TokenizerConfig kConfig = TokenizerConfig::english_default();

TEST(LogSpacedCutoffs, Examples) {
  EXPECT_EQ(log_spaced_cutoffs(2, 2, 676), (std::vector<std::size_t>{2}));
  EXPECT_EQ(log_spaced_cutoffs(10, 1000, 3), (std::vector<std::size_t>{10, 100, 1000}));
  const auto dense = log_spaced_cutoffs(2, 100000);
  EXPECT_EQ(dense.front(), 2u);
  EXPECT_EQ(dense.back(), 100000u);
  EXPECT_LE(dense.size(), 676u);
  EXPECT_TRUE(std::is_sorted(dense.begin(), dense.end()));
  EXPECT_EQ(std::adjacent_find(dense.begin(), dense.end()), dense.end());
  EXPECT_EQ(log_spaced_cutoffs(100, 1'000'000'000, 676).size(), 676u);
}

TEST(LogSpacedCutoffs, RangeErrors) {
  EXPECT_THROW(log_spaced_cutoffs(1, 10, 5), RangeError);
  EXPECT_THROW(log_spaced_cutoffs(10, 5, 5), RangeError);
  EXPECT_THROW(log_spaced_cutoffs(2, 10, 1), RangeError);
}

TEST(Pearson, PerfectCorrelations) {
  const std::vector<double> xs = {1, 2, 3};
  const std::vector<double> ys = {3, 2, 1};
  EXPECT_DOUBLE_EQ(pearson(xs, xs).rho, 1.0);
  EXPECT_EQ(pearson(xs, xs).p_value, 0.0);
  EXPECT_DOUBLE_EQ(pearson(xs, ys).rho, -1.0);
}

TEST(Pearson, Errors) {
  const std::vector<double> a = {1, 2, 3};
  const std::vector<double> b = {1, 2};
  const std::vector<double> flat = {4, 4, 4};
  EXPECT_THROW(pearson(a, b), RangeError);
  EXPECT_THROW(pearson(b, b), RangeError);
  EXPECT_THROW(pearson(a, flat), UndefinedCorrelationError);
}

TEST(Pearson, MatchesFrozenReference) {
  const auto inputs = testing::pearson_reference_inputs();
  std::ifstream in(testing::data_path("pearson_reference.csv"));
  std::string line;
  ASSERT_TRUE(csv::next_line(in, line));
  std::size_t checked = 0;
  while (csv::next_line(in, line)) {
    const auto f = csv::split_record(line);
    const std::size_t i = std::stoul(f[0]);
    ASSERT_EQ(inputs[i].xs.size(), std::stoul(f[1]));
    const auto c = pearson(inputs[i].xs, inputs[i].ys);
    EXPECT_NEAR(c.rho, std::stod(f[2]), 1e-10) << i;
    EXPECT_NEAR(c.p_value, std::stod(f[3]), 1e-10) << i;
    ++checked;
  }
  EXPECT_EQ(checked, 1000u);
}

TEST(Pearson, PValueFallsWithCorrelationAtFixedN) {
  // y = x + s·e with shrinking s raises |rho| on the same x and e.
  testing::SplitMix64 rng(4);
  std::vector<double> xs, es;
  for (int i = 0; i < 30; ++i) {
    xs.push_back(rng.uniform());
    es.push_back(rng.uniform() - 0.5);
  }
  double previous_rho = -1.0;
  double previous_p = 2.0;
  for (double s : {5.0, 2.0, 1.0, 0.5, 0.2}) {
    std::vector<double> ys;
    for (std::size_t i = 0; i < xs.size(); ++i) ys.push_back(xs[i] + s * es[i]);
    const auto c = pearson(xs, ys);
    ASSERT_GT(c.rho, previous_rho);
    ASSERT_LT(c.p_value, previous_p);
    previous_rho = c.rho;
    previous_p = c.p_value;
  }
}

TEST(Pearson, LargeSampleAtTwoThirdsIsHighlySignificant) {
  // Box-Muller pairs with correlation 0.67.
  testing::SplitMix64 rng(67);
  std::vector<double> xs, ys;
  const double rho = 0.67;
  for (int i = 0; i < 20000; ++i) {
    const double u1 = 1.0 - rng.uniform();
    const double u2 = rng.uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double z1 = radius * std::cos(2.0 * M_PI * u2);
    const double z2 = radius * std::sin(2.0 * M_PI * u2);
    xs.push_back(z1);
    ys.push_back(rho * z1 + std::sqrt(1.0 - rho * rho) * z2);
  }
  const auto c = pearson(xs, ys);
  EXPECT_NEAR(c.rho, 0.67, 0.02);
  EXPECT_LT(c.p_value, 2e-5);
}

TEST(Bonferroni, Arithmetic) {
  EXPECT_TRUE(bonferroni_significant(2e-5, 676, 0.05));
  EXPECT_FALSE(bonferroni_significant(7.5e-5, 676, 0.05));
  EXPECT_TRUE(bonferroni_significant(0.04, 1, 0.05));
  EXPECT_FALSE(bonferroni_significant(0.04, 2, 0.05));
  EXPECT_FALSE(bonferroni_significant(0.025, 2, 0.05));
  EXPECT_THROW(bonferroni_significant(0.01, 0, 0.05), DomainError);
  EXPECT_THROW(bonferroni_significant(0.01, 3, 1.0), DomainError);
}

TEST(Percentile, LinearInterpolation) {
  // Values agree with numpy.percentile(..., method="linear").
  EXPECT_DOUBLE_EQ(percentile({1, 2, 3, 4}, 0.25), 1.75);
  EXPECT_DOUBLE_EQ(percentile({4, 1, 3, 2}, 0.5), 2.5);
  EXPECT_DOUBLE_EQ(percentile({10, 20, 30, 40, 50}, 0.45), 28.0);
  EXPECT_DOUBLE_EQ(percentile({10, 20, 30, 40, 50}, 0.55), 32.0);
  EXPECT_DOUBLE_EQ(percentile({7}, 0.9), 7.0);
  EXPECT_DOUBLE_EQ(percentile({3, 9}, 1.0), 9.0);
  EXPECT_THROW(percentile({}, 0.5), RangeError);
  EXPECT_THROW(percentile({1.0}, 1.5), RangeError);
}

TEST(Percentile, MatchesSelectionReference) {
  testing::SplitMix64 rng(31);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> v(1 + rng.next() % 40);
    for (auto& x : v) x = std::floor(rng.uniform() * 20.0) - 10.0;
    const double q = rng.uniform();
    // Reference: select the two bracketing order statistics by counting.
    const double h = q * static_cast<double>(v.size() - 1);
    auto order_stat = [&](std::size_t k) {
      for (double c : v) {
        std::size_t below = 0, equal = 0;
        for (double d : v) {
          below += d < c;
          equal += d == c;
        }
        if (below <= k && k < below + equal) return c;
      }
      return std::nan("");
    };
    const auto lo = static_cast<std::size_t>(h);
    const double expected =
        order_stat(lo) + (h - lo) * (order_stat(std::min(lo + 1, v.size() - 1)) - order_stat(lo));
    ASSERT_NEAR(percentile(v, q), expected, 1e-12);
  }
}

TEST(AnalyzeText, SyntheticZipfMandelbrotText) {
  testing::SplitMix64 rng(2);
  const std::string text = testing::synthetic_text(rng, 400'000, 2000, 2.0, 0.0);
  const std::vector<std::size_t> cutoffs = {10, 100, 300};
  const auto record = analyze_text("zm2", text, kConfig, cutoffs);
  EXPECT_EQ(record.n1, 2u);  // the space outnumbers every word
  EXPECT_GE(record.integrated_types, record.word_types);
  ASSERT_TRUE(record.fits_zm.back().ok());
  EXPECT_NEAR(record.fits_zm.back().fit->k_hat, 2.0, 0.25);
  EXPECT_FALSE(record.partial());
  EXPECT_EQ(record.cutoffs(), cutoffs);
}

TEST(AnalyzeText, CutoffsBeyondRanksUseTheFullSeries) {
  const std::vector<std::size_t> cutoffs = {2, 3, 50};
  const auto record = analyze_text("t", "a a a a b b c, d", kConfig, cutoffs);
  EXPECT_EQ(record.word_types, 4u);
  ASSERT_TRUE(record.fits_zm[2].ok());
  EXPECT_EQ(record.fits_zm[2].r_cut, 50u);
  EXPECT_EQ(record.fits_zm[2].fit->r_cut, 4u);
  EXPECT_TRUE(record.partial());
}

TEST(AnalyzeText, RepeatedWordIsRejected) {
  const std::vector<std::size_t> cutoffs = {2};
  EXPECT_THROW(analyze_text("t", "la la la la", kConfig, cutoffs), DomainError);
  EXPECT_THROW(analyze_text("t", "   ", kConfig, cutoffs), DomainError);
  EXPECT_THROW(analyze_text("t", "", kConfig, cutoffs), DomainError);
}

TEST(AnalyzeText, FlatWordSeriesIsPartial) {
  const std::vector<std::size_t> cutoffs = {2, 3};
  const auto record = analyze_text("t", "la di la di", kConfig, cutoffs);
  EXPECT_FALSE(record.fits_zm[0].ok());
  EXPECT_FALSE(record.fits_zm[1].ok());
  EXPECT_TRUE(record.partial());
}

TextRecord synthetic_record(std::string id, std::size_t n1, std::vector<double> k_per_cutoff) {
  TextRecord r;
  r.text_id = std::move(id);
  r.n1 = n1;
  r.word_types = 1000;
  r.integrated_types = 1000 + n1;
  const std::vector<std::size_t> cutoffs = {10, 100, 1000};
  for (std::size_t i = 0; i < cutoffs.size(); ++i) {
    CutoffFit zm;
    zm.r_cut = cutoffs[i];
    if (!std::isnan(k_per_cutoff[i])) {
      zm.fit = FitResult{};
      zm.fit->k_hat = k_per_cutoff[i];
      zm.fit->r_cut = cutoffs[i];
    } else {
      zm.reason = "no fit";
    }
    CutoffFit s = zm;
    if (s.fit) s.fit->k_hat = -0.8 + 0.01 * static_cast<double>(n1);
    r.fits_zm.push_back(zm);
    r.fits_s.push_back(s);
  }
  return r;
}

const std::vector<std::size_t> kSyntheticCutoffs = {10, 100, 1000};

TEST(Scan, ShiftEqualsExcludedCountGivesUnitCorrelation) {
  testing::SplitMix64 rng(9);
  std::vector<TextRecord> records;
  for (int i = 0; i < 40; ++i) {
    const std::size_t n1 = 1 + rng.next() % 8;
    const double base = static_cast<double>(n1) - 1.0;
    records.push_back(synthetic_record("t" + std::to_string(i), n1,
                                       {base + 1e-3 * rng.uniform(), base + 1e-3 * rng.uniform(),
                                        base + 1e-3 * rng.uniform()}));
  }
  const auto result = scan(records, kSyntheticCutoffs);
  EXPECT_EQ(result.comparisons, 3u);
  for (const auto& row : result.cutoffs) {
    ASSERT_TRUE(row.correlation);
    EXPECT_GT(row.correlation->rho, 0.999);
    EXPECT_TRUE(row.bonferroni);
    EXPECT_NEAR(*row.offset_median, 0.0, 1e-3);
    ASSERT_TRUE(row.ks_median);
  }
  ASSERT_TRUE(result.rho_max);
  EXPECT_EQ(result.star_points.size(), 40u);
  for (const auto& p : result.star_points) EXPECT_EQ(p.offset, p.k_zm - p.n1_minus_1);
}

TEST(Scan, IdenticalTextsHaveUndefinedCorrelation) {
  std::vector<TextRecord> records;
  for (int i = 0; i < 5; ++i) records.push_back(synthetic_record("same" + std::to_string(i), 3, {1, 2, 3}));
  const auto result = scan(records, kSyntheticCutoffs);
  EXPECT_EQ(result.comparisons, 0u);
  EXPECT_FALSE(result.rho_max);
  EXPECT_FALSE(result.r_cut_star);
  for (const auto& row : result.cutoffs) {
    EXPECT_FALSE(row.correlation);
    EXPECT_NE(row.excluded_reason.find("undefined"), std::string::npos);
  }
}

TEST(Scan, CutoffsWithTooFewFitsAreExcluded) {
  std::vector<TextRecord> records = {synthetic_record("a", 1, {0.1, NAN, 1}),
                                     synthetic_record("b", 2, {1.3, NAN, 2}),
                                     synthetic_record("c", 4, {2.9, 5.0, 3})};
  const auto result = scan(records, kSyntheticCutoffs);
  EXPECT_TRUE(result.cutoffs[0].correlation);
  EXPECT_FALSE(result.cutoffs[1].correlation);
  EXPECT_EQ(result.cutoffs[1].texts, 1u);
  EXPECT_NE(result.cutoffs[1].excluded_reason.find("fewer than 3"), std::string::npos);
  EXPECT_EQ(result.comparisons, 2u);
}

TEST(Scan, OffsetIdentityOnRealRecords) {
  testing::SplitMix64 rng(12);
  const auto cutoffs = log_spaced_cutoffs(2, 500, 20);
  std::vector<TextRecord> records;
  for (int i = 0; i < 6; ++i) {
    const auto text = testing::synthetic_text(rng, 20'000, 800, 0.5 + i, 0.05 * i);
    records.push_back(analyze_text("doc" + std::to_string(i), text, kConfig, cutoffs));
  }
  const auto result = scan(records, cutoffs);
  for (std::size_t c = 0; c < cutoffs.size(); ++c) {
    std::vector<double> offsets;
    for (const auto& r : records) {
      if (!r.fits_zm[c].ok()) continue;
      offsets.push_back(r.fits_zm[c].fit->k_hat - (static_cast<double>(r.n1) - 1.0));
    }
    if (offsets.empty()) continue;
    EXPECT_EQ(*result.cutoffs[c].offset_median, percentile(offsets, 0.5));
    EXPECT_EQ(*result.cutoffs[c].offset_p45, percentile(offsets, 0.45));
  }
}

TEST(Scan, IndependentOfRecordOrder) {
  testing::SplitMix64 rng(13);
  std::vector<TextRecord> records;
  for (int i = 0; i < 25; ++i) {
    const std::size_t n1 = 1 + rng.next() % 5;
    records.push_back(synthetic_record("r" + std::to_string(i), n1,
                                       {rng.uniform() * 3, rng.uniform() * 3, rng.uniform() * 3}));
  }
  const std::string forward = scan_to_json(scan(records, kSyntheticCutoffs));
  std::reverse(records.begin(), records.end());
  std::swap(records[3], records[17]);
  EXPECT_EQ(scan_to_json(scan(records, kSyntheticCutoffs)), forward);
}

TEST(Scan, RejectsRecordsBuiltForOtherCutoffs) {
  std::vector<TextRecord> records = {synthetic_record("a", 1, {1, 2, 3})};
  const std::vector<std::size_t> other = {10, 100, 999};
  EXPECT_THROW(scan(records, other), ConsistencyError);
}

}  // namespace
}  // namespace zipfdark
