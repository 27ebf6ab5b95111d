#include "zipfdark/corpus_experiment.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/special_functions/beta.hpp>

#include "zipfdark/errors.hpp"

namespace zipfdark {

bool TextRecord::partial() const {
  auto failed = [](const CutoffFit& f) {
    return !f.ok() || f.fit->r_cut != f.r_cut;
  };
  return std::any_of(fits_zm.begin(), fits_zm.end(), failed);
}

std::vector<std::size_t> TextRecord::cutoffs() const {
  std::vector<std::size_t> out;
  out.reserve(fits_zm.size());
  for (const auto& f : fits_zm) out.push_back(f.r_cut);
  return out;
}

namespace {

// Fits at min(cutoff, ranks) while reporting the requested cutoff.
std::vector<CutoffFit> clamped_fits(const RankFreqDist& dist,
                                    std::span<const std::size_t> cutoffs) {
  std::vector<std::size_t> effective;
  effective.reserve(cutoffs.size());
  for (std::size_t c : cutoffs) effective.push_back(std::min(c, dist.size()));
  auto fits = fit_at_cutoffs(dist, effective);
  for (std::size_t i = 0; i < fits.size(); ++i) fits[i].r_cut = cutoffs[i];
  return fits;
}

}  // namespace

TextRecord analyze_tokens(std::string text_id, std::span<const Token> tokens,
                          std::span<const std::size_t> cutoffs) {
  if (!std::is_sorted(cutoffs.begin(), cutoffs.end()))
    throw RangeError("cutoffs must be sorted ascending");
  std::optional<RankFreqDist> word_only;
  try {
    word_only.emplace(build_dist(tokens, DistMode::WordOnly));
  } catch (const EmptyDistributionError&) {
    throw DomainError("text has no word types");
  }
  if (word_only->size() < 2)
    throw DomainError("text has fewer than 2 word types");
  const RankFreqDist integrated = build_dist(tokens, DistMode::Integrated);
  const RankMap map = rank_map(integrated, *word_only);

  TextRecord record;
  record.text_id = std::move(text_id);
  record.word_types = word_only->size();
  record.integrated_types = integrated.size();
  record.n1 = map.n1();
  record.fits_zm = clamped_fits(*word_only, cutoffs);
  record.fits_s = clamped_fits(integrated, cutoffs);
  return record;
}

TextRecord analyze_text(std::string text_id, std::string_view text, const TokenizerConfig& config,
                        std::span<const std::size_t> cutoffs) {
  const auto tokens = tokenize(text, config);
  return analyze_tokens(std::move(text_id), tokens, cutoffs);
}

std::vector<std::size_t> log_spaced_cutoffs(std::size_t min, std::size_t max, std::size_t count) {
  if (min < 2) throw RangeError("cutoff minimum must be at least 2");
  if (max < min) throw RangeError("cutoff maximum below minimum");
  if (count < 2) throw RangeError("need at least 2 cutoffs");
  if (min == max) return {min};

  const double lo = std::log(static_cast<double>(min));
  const double hi = std::log(static_cast<double>(max));
  std::vector<std::size_t> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::size_t value;
    if (i == 0) {
      value = min;
    } else if (i + 1 == count) {
      value = max;
    } else {
      const double t = static_cast<double>(i) / static_cast<double>(count - 1);
      value = static_cast<std::size_t>(std::llround(std::exp(lo + t * (hi - lo))));
    }
    if (out.empty() || out.back() != value) out.push_back(value);
  }
  return out;
}

Correlation pearson(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw RangeError("pearson needs series of equal length");
  const std::size_t n = xs.size();
  if (n < 3) throw RangeError("pearson needs at least 3 pairs");

  const double mean_x = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(n);
  const double mean_y = std::accumulate(ys.begin(), ys.end(), 0.0) / static_cast<double>(n);
  double sxx = 0.0;
  double syy = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = xs[i] - mean_x;
    const double dy = ys[i] - mean_y;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw UndefinedCorrelationError("constant series");

  Correlation c;
  c.rho = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  // Two-sided t-test p-value: I_{1-ρ²}(ν/2, 1/2) with ν = n - 2.
  const double one_minus_r2 = (1.0 - c.rho) * (1.0 + c.rho);
  if (one_minus_r2 <= 0.0) {
    c.p_value = 0.0;
  } else {
    const double dof = static_cast<double>(n - 2);
    c.p_value = std::clamp(boost::math::ibeta(dof / 2.0, 0.5, one_minus_r2), 0.0, 1.0);
  }
  return c;
}

bool bonferroni_significant(double p, std::size_t m, double alpha_level) {
  if (m == 0) throw DomainError("Bonferroni correction needs at least one comparison");
  if (!(alpha_level > 0.0 && alpha_level < 1.0))
    throw DomainError("significance level must lie in (0, 1)");
  return p < alpha_level / static_cast<double>(m);
}

double percentile(std::vector<double> values, double q) {
  if (values.empty()) throw RangeError("percentile of an empty sample");
  if (!(q >= 0.0 && q <= 1.0)) throw RangeError("percentile fraction outside [0, 1]");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lower = static_cast<std::size_t>(std::floor(pos));
  const std::size_t upper = std::min(lower + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lower);
  return values[lower] + frac * (values[upper] - values[lower]);
}

ScanResult scan(std::span<const TextRecord> records, std::span<const std::size_t> cutoffs,
                double significance_level) {
  std::vector<const TextRecord*> ordered;
  ordered.reserve(records.size());
  for (const auto& r : records) {
    if (r.fits_zm.size() != cutoffs.size() || r.fits_s.size() != cutoffs.size())
      throw ConsistencyError("record '" + r.text_id + "' was built for different cutoffs");
    for (std::size_t i = 0; i < cutoffs.size(); ++i) {
      if (r.fits_zm[i].r_cut != cutoffs[i] || r.fits_s[i].r_cut != cutoffs[i])
        throw ConsistencyError("record '" + r.text_id + "' was built for different cutoffs");
    }
    ordered.push_back(&r);
  }
  std::sort(ordered.begin(), ordered.end(),
            [](const TextRecord* a, const TextRecord* b) { return a->text_id < b->text_id; });

  ScanResult result;
  result.significance_level = significance_level;
  result.cutoffs.reserve(cutoffs.size());
  std::optional<std::size_t> star_index;

  for (std::size_t i = 0; i < cutoffs.size(); ++i) {
    CutoffScan row;
    row.cutoff = cutoffs[i];
    std::vector<double> k_zm;
    std::vector<double> shift;
    std::vector<double> offsets;
    std::vector<double> k_s;
    for (const TextRecord* r : ordered) {
      if (r->fits_zm[i].ok()) {
        const double k = r->fits_zm[i].fit->k_hat;
        const double n1_minus_1 = static_cast<double>(r->n1) - 1.0;
        k_zm.push_back(k);
        shift.push_back(n1_minus_1);
        offsets.push_back(k - n1_minus_1);
      }
      if (r->fits_s[i].ok()) k_s.push_back(r->fits_s[i].fit->k_hat);
    }
    row.texts = k_zm.size();
    row.ks_texts = k_s.size();
    if (!offsets.empty()) {
      row.offset_median = percentile(offsets, 0.5);
      row.offset_p45 = percentile(offsets, 0.45);
      row.offset_p55 = percentile(offsets, 0.55);
    }
    if (!k_s.empty()) {
      row.ks_median = percentile(k_s, 0.5);
      row.ks_q1 = percentile(k_s, 0.25);
      row.ks_q3 = percentile(k_s, 0.75);
    }
    if (k_zm.size() < 3) {
      row.excluded_reason = "fewer than 3 records with a valid fit";
    } else {
      try {
        row.correlation = pearson(k_zm, shift);
        ++result.comparisons;
        if (!result.rho_max || row.correlation->rho > *result.rho_max) {
          result.rho_max = row.correlation->rho;
          result.r_cut_star = row.cutoff;
          star_index = i;
        }
      } catch (const UndefinedCorrelationError& e) {
        row.excluded_reason = std::string("correlation undefined: ") + e.what();
      }
    }
    result.cutoffs.push_back(std::move(row));
  }

  for (auto& row : result.cutoffs) {
    if (row.correlation)
      row.bonferroni =
          bonferroni_significant(row.correlation->p_value, result.comparisons, significance_level);
  }

  if (star_index) {
    const std::size_t i = *star_index;
    for (const TextRecord* r : ordered) {
      if (!r->fits_zm[i].ok()) continue;
      StarPoint p;
      p.text_id = r->text_id;
      p.k_zm = r->fits_zm[i].fit->k_hat;
      p.n1_minus_1 = static_cast<double>(r->n1) - 1.0;
      p.offset = p.k_zm - p.n1_minus_1;
      if (r->fits_s[i].ok()) p.k_s = r->fits_s[i].fit->k_hat;
      result.star_points.push_back(std::move(p));
    }
  }
  return result;
}

}  // namespace zipfdark
