#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "zipfdark/rankfreq.hpp"

namespace zipfdark {

/// Shift of the Zipf–Mandelbrot law f ∝ (r + k)^-γ with γ held at 1.
///
/// The fit minimises Σ (y_r - (r + k)/(1 + k))² over the quotient series
/// y_r = f_1 / f_r. Writing β = 1/(1 + k) makes the model linear,
/// y_r - 1 = β (r - 1), so
///
///   β̂ = Σ (r-1)(y_r-1) / Σ (r-1)²,   k̂ = Σ (r-1)² / Σ (r-1)(y_r-1) - 1.
///
/// A perfect Zipf series (y_r = r) gives β̂ = 1 and k̂ = 0.
struct FitResult {
  static constexpr double kGamma = 1.0;

  double k_hat = 0.0;
  std::size_t r_cut = 0;
  double sse = 0.0;
  /// Quotient series; the fit used the first r_cut values.
  std::shared_ptr<const std::vector<double>> quotients;

  double gamma() const { return kGamma; }
  std::span<const double> y() const;
};

/// Compensated (Neumaier) running sum.
class CompensatedSum {
 public:
  void add(double x);
  double value() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

/// y_r = f_1 / f_r for r = 1..r_cut. Throws RangeError unless
/// 2 <= r_cut <= dist.size().
std::vector<double> quotient_series(const RankFreqDist& dist, std::size_t r_cut);
std::vector<double> quotient_series(std::span<const std::uint64_t> freqs, std::size_t r_cut);

/// Closed-form least-squares shift over the whole series. Throws RangeError
/// for fewer than two values, DomainError if y_1 != 1, FitError if the series
/// has no positive slope (flat or decreasing).
FitResult fit_shift(std::span<const double> y);

/// Sum of squared errors of the γ = 1 model with shift k over the series.
double shift_sse(std::span<const double> y, double k);

struct CutoffFit {
  std::size_t r_cut = 0;
  std::optional<FitResult> fit;
  std::string reason;  // set when fit is empty

  bool ok() const { return fit.has_value(); }
};

/// One fit per ascending cutoff using running sums. Each result is
/// bit-identical to fit_shift on the corresponding prefix. Cutoffs below 2 or
/// above the number of ranks, and unshiftable prefixes, produce an empty fit
/// with a reason instead of aborting.
std::vector<CutoffFit> fit_at_cutoffs(std::span<const double> y,
                                      std::span<const std::size_t> cutoffs);
std::vector<CutoffFit> fit_at_cutoffs(const RankFreqDist& dist,
                                      std::span<const std::size_t> cutoffs);

/// Noise-free γ = 1 quotient series (r + k)/(1 + k), r = 1..length.
std::vector<double> zm_quotients(std::size_t length, double k);

/// `{"gamma":1.0,"k_hat":…,"r_cut":…,"sse":…}`
std::string fit_to_json(const FitResult& fit);

}  // namespace zipfdark
