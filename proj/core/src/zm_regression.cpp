#include "zipfdark/zm_regression.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "zipfdark/errors.hpp"

namespace zipfdark {

std::span<const double> FitResult::y() const {
  if (!quotients) return {};
  return std::span<const double>(*quotients).first(std::min(r_cut, quotients->size()));
}

void CompensatedSum::add(double x) {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x)) {
    compensation_ += (sum_ - t) + x;
  } else {
    compensation_ += (x - t) + sum_;
  }
  sum_ = t;
}

std::vector<double> quotient_series(std::span<const std::uint64_t> freqs, std::size_t r_cut) {
  if (r_cut < 2) throw RangeError("r_cut must be at least 2 for a regression");
  if (r_cut > freqs.size())
    throw RangeError("r_cut " + std::to_string(r_cut) + " exceeds the " +
                     std::to_string(freqs.size()) + " available ranks");
  std::vector<double> y;
  y.reserve(r_cut);
  const auto top = static_cast<double>(freqs.front());
  for (std::size_t r = 0; r < r_cut; ++r) y.push_back(top / static_cast<double>(freqs[r]));
  return y;
}

std::vector<double> quotient_series(const RankFreqDist& dist, std::size_t r_cut) {
  const auto freqs = dist.freqs();
  return quotient_series(std::span<const std::uint64_t>(freqs), r_cut);
}

namespace {

// Running sums Σ(r-1)² and Σ(r-1)(y_r-1). Both fit_shift and the cutoff sweep
// go through this so that results at equal prefixes are bit-identical.
class ShiftAccumulator {
 public:
  explicit ShiftAccumulator(std::span<const double> y) : y_(y) {
    if (y_.empty()) throw RangeError("empty quotient series");
    if (y_.front() != 1.0) throw DomainError("quotient series must start at 1");
  }

  void advance_to(std::size_t length) {
    for (; length_ < length; ++length_) {
      const double y = y_[length_];
      if (!std::isfinite(y)) throw DomainError("non-finite quotient at rank " +
                                               std::to_string(length_ + 1));
      const auto x = static_cast<double>(length_);  // r - 1
      sxx_.add(x * x);
      sxy_.add(x * (y - 1.0));
    }
  }

  // Fit of the current prefix; throws FitError on a non-positive slope.
  FitResult fit(const std::shared_ptr<const std::vector<double>>& quotients) const {
    if (length_ < 2) throw RangeError("at least two ranks are needed for a regression");
    const double sxx = sxx_.value();
    const double sxy = sxy_.value();
    if (!(sxy > 0.0))
      throw FitError("quotient series has no positive slope over " + std::to_string(length_) +
                     " ranks; the shift is unbounded");
    const double slope = sxy / sxx;
    CompensatedSum sse;
    for (std::size_t i = 0; i < length_; ++i) {
      const double residual = (y_[i] - 1.0) - slope * static_cast<double>(i);
      sse.add(residual * residual);
    }
    FitResult result;
    result.k_hat = sxx / sxy - 1.0;
    result.r_cut = length_;
    result.sse = std::max(0.0, sse.value());
    result.quotients = quotients;
    return result;
  }

 private:
  std::span<const double> y_;
  std::size_t length_ = 0;
  CompensatedSum sxx_;
  CompensatedSum sxy_;
};

}  // namespace

FitResult fit_shift(std::span<const double> y) {
  if (y.size() < 2) throw RangeError("at least two ranks are needed for a regression");
  auto quotients = std::make_shared<const std::vector<double>>(y.begin(), y.end());
  ShiftAccumulator acc(*quotients);
  acc.advance_to(y.size());
  return acc.fit(quotients);
}

double shift_sse(std::span<const double> y, double k) {
  CompensatedSum sse;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double r = static_cast<double>(i + 1);
    const double residual = y[i] - (r + k) / (1.0 + k);
    sse.add(residual * residual);
  }
  return sse.value();
}

std::vector<CutoffFit> fit_at_cutoffs(std::span<const double> y,
                                      std::span<const std::size_t> cutoffs) {
  if (!std::is_sorted(cutoffs.begin(), cutoffs.end()))
    throw RangeError("cutoffs must be sorted ascending");
  auto quotients = std::make_shared<const std::vector<double>>(y.begin(), y.end());
  ShiftAccumulator acc(*quotients);

  std::vector<CutoffFit> out;
  out.reserve(cutoffs.size());
  for (std::size_t cut : cutoffs) {
    CutoffFit entry;
    entry.r_cut = cut;
    if (cut < 2) {
      entry.reason = "r_cut below 2";
    } else if (cut > y.size()) {
      entry.reason = "r_cut " + std::to_string(cut) + " exceeds " + std::to_string(y.size()) +
                     " ranks";
    } else {
      try {
        acc.advance_to(cut);
        entry.fit = acc.fit(quotients);
      } catch (const Error& e) {
        entry.reason = e.what();
      }
    }
    out.push_back(std::move(entry));
  }
  return out;
}

std::vector<CutoffFit> fit_at_cutoffs(const RankFreqDist& dist,
                                      std::span<const std::size_t> cutoffs) {
  const auto freqs = dist.freqs();
  const std::size_t longest = cutoffs.empty() ? 0 : std::min(freqs.size(), cutoffs.back());
  std::vector<double> y;
  if (longest >= 2) {
    y = quotient_series(std::span<const std::uint64_t>(freqs), longest);
  } else {
    y.assign(1, 1.0);
  }
  // Cutoffs past the available ranks still need to be reported as such.
  std::vector<CutoffFit> fits = fit_at_cutoffs(std::span<const double>(y), cutoffs);
  for (auto& f : fits) {
    if (!f.ok() && f.r_cut > freqs.size())
      f.reason = "r_cut " + std::to_string(f.r_cut) + " exceeds " +
                 std::to_string(freqs.size()) + " ranks";
  }
  return fits;
}

std::vector<double> zm_quotients(std::size_t length, double k) {
  std::vector<double> y;
  y.reserve(length);
  for (std::size_t r = 1; r <= length; ++r) y.push_back((static_cast<double>(r) + k) / (1.0 + k));
  return y;
}

std::string fit_to_json(const FitResult& fit) {
  nlohmann::ordered_json j;
  j["k_hat"] = fit.k_hat;
  j["r_cut"] = fit.r_cut;
  j["sse"] = fit.sse;
  j["gamma"] = FitResult::kGamma;
  return j.dump();
}

}  // namespace zipfdark
