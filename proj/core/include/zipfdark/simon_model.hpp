#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace zipfdark {

/// Parameters of Simon's preferential-selection process. The repetition
/// probability θ = 1 - α is derived, never stored.
class SimonConfig {
 public:
  /// Throws DomainError unless 0 < alpha < 1 and steps >= 1.
  SimonConfig(double alpha, std::uint64_t steps, std::uint64_t seed);

  double alpha() const { return alpha_; }
  double theta() const { return 1.0 - alpha_; }
  std::uint64_t steps() const { return steps_; }
  std::uint64_t seed() const { return seed_; }

 private:
  double alpha_;
  std::uint64_t steps_;
  std::uint64_t seed_;
};

/// Words are indexed by innovation order j = 1..N (0-based in the vectors).
struct SimonRun {
  std::vector<std::uint64_t> freqs;
  std::vector<std::uint64_t> innovation_steps;  // M_j, 1-based step numbers
  std::uint64_t steps = 0;

  std::size_t distinct_words() const { return freqs.size(); }
};

/// Name of the generator used by simulate, recorded with outputs.
inline constexpr const char* kSimonGenerator = "mt19937_64";

/// Step 1 always innovates. Afterwards each step innovates with probability
/// α, otherwise repeats a uniformly chosen earlier token, which selects an
/// existing word in proportion to its count. Deterministic in the seed.
SimonRun simulate(const SimonConfig& config);

/// ⟨M_j⟩ = (j - θ)/α.
double expected_innovation_step(std::size_t j, double alpha);

/// Exact expected relative frequency B(M_j, θ) / B(M_N, θ), evaluated
/// through log-gamma.
double analytic_freq_exact(std::uint64_t m_j, std::uint64_t m_n, double theta);

/// Power-law approximation (M_j / M_N)^-θ of analytic_freq_exact.
double analytic_freq_power(std::uint64_t m_j, std::uint64_t m_n, double theta);

/// ((j - θ)/(N - θ))^-θ: ⟨M_j⟩ substituted into both Beta terms.
double analytic_freq_refined(std::size_t j, std::size_t n, double theta);

struct RankComparison {
  std::size_t rank = 0;
  std::uint64_t observed = 0;
  double predicted = 0.0;
  /// |ln observed - ln predicted| / |ln predicted|; absent at rank N where
  /// the prediction is exactly 1.
  double log_relative_error = 0.0;
  bool has_error = false;
};

struct SimonComparison {
  double theta = 0.0;
  std::size_t distinct_words = 0;
  std::vector<RankComparison> ranks;
  /// Mean log_relative_error over ranks [window_first, window_last].
  double mean_log_relative_error = 0.0;
  std::size_t window_first = 0;
  std::size_t window_last = 0;
  std::size_t window_count = 0;
  /// f(rank 1) / f(rank 2); zero when N < 2.
  double observed_first_mover_ratio = 0.0;
  double predicted_first_mover_ratio = 0.0;
};

/// Ranks the run's counts and compares them with analytic_freq_refined.
/// Counts are used unnormalised, matching the refined law's f(w_N) = 1.
SimonComparison run_vs_analytic(const SimonRun& run, double theta, std::size_t window_first = 2,
                                std::size_t window_last = 100);

/// `j,M_j,freq`
void write_simon_csv(std::ostream& out, const SimonRun& run);
std::string comparison_to_json(const SimonComparison& report, const SimonConfig& config);

}  // namespace zipfdark
