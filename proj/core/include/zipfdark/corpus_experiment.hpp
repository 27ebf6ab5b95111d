#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "zipfdark/rankfreq.hpp"
#include "zipfdark/tokenizer.hpp"
#include "zipfdark/zm_regression.hpp"

namespace zipfdark {

/// Per-text shifts at every requested cutoff. A text with fewer ranks than a
/// cutoff is fitted over all of its ranks; the effective cutoff is kept in
/// each fit's r_cut while CutoffFit::r_cut keeps the requested one.
struct TextRecord {
  std::string text_id;
  std::size_t word_types = 0;        // R
  std::size_t integrated_types = 0;  // N
  std::size_t n1 = 0;
  std::vector<CutoffFit> fits_zm;  // word-only distribution
  std::vector<CutoffFit> fits_s;   // integrated distribution
  std::vector<std::string> flags;

  /// True when some requested cutoff exceeded R or a fit failed.
  bool partial() const;
  std::vector<std::size_t> cutoffs() const;
};

/// Record for an already tokenized text. Throws DomainError when the text has
/// fewer than two word types.
TextRecord analyze_tokens(std::string text_id, std::span<const Token> tokens,
                          std::span<const std::size_t> cutoffs);

TextRecord analyze_text(std::string text_id, std::string_view text, const TokenizerConfig& config,
                        std::span<const std::size_t> cutoffs);

/// `count` geometrically spaced integers from `min` to `max`, rounded,
/// deduplicated, ascending. Throws RangeError unless 2 <= min <= max and
/// count >= 2.
std::vector<std::size_t> log_spaced_cutoffs(std::size_t min, std::size_t max,
                                            std::size_t count = 676);

struct Correlation {
  double rho = 0.0;
  double p_value = 1.0;
};

/// Pearson product-moment correlation with a two-sided p-value from
/// Student's t with n - 2 degrees of freedom. Throws RangeError for unequal
/// lengths or fewer than 3 pairs, UndefinedCorrelationError for a constant
/// series.
Correlation pearson(std::span<const double> xs, std::span<const double> ys);

/// p < alpha_level / m. Throws DomainError for m == 0 or a level outside (0, 1).
bool bonferroni_significant(double p, std::size_t m, double alpha_level = 0.05);

/// Linear interpolation between order statistics (q in [0, 1]).
double percentile(std::vector<double> values, double q);

struct CutoffScan {
  std::size_t cutoff = 0;
  std::size_t texts = 0;  // records with a valid word-only fit
  std::optional<Correlation> correlation;
  bool bonferroni = false;
  std::string excluded_reason;  // set when correlation is empty

  // Distribution of k̂_ZM - n₁ + 1: median and the 45th/55th percentiles.
  std::optional<double> offset_median, offset_p45, offset_p55;
  // Distribution of k̂_S: median and quartiles.
  std::size_t ks_texts = 0;
  std::optional<double> ks_median, ks_q1, ks_q3;
};

/// Values per text at the correlation-maximising cutoff.
struct StarPoint {
  std::string text_id;
  double k_zm = 0.0;
  double n1_minus_1 = 0.0;
  double offset = 0.0;
  std::optional<double> k_s;
};

struct ScanResult {
  std::vector<CutoffScan> cutoffs;
  std::optional<double> rho_max;
  std::optional<std::size_t> r_cut_star;
  std::vector<StarPoint> star_points;
  std::size_t comparisons = 0;  // cutoffs with a defined correlation
  double significance_level = 0.05;
  std::string percentile_method = "linear";
};

/// Correlates k̂_ZM with n₁ - 1 across records at every cutoff. Records must
/// carry exactly `cutoffs`; their order does not affect the result.
ScanResult scan(std::span<const TextRecord> records, std::span<const std::size_t> cutoffs,
                double significance_level = 0.05);

}  // namespace zipfdark
