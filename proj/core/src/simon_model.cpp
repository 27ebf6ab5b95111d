#include "zipfdark/simon_model.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <ostream>
#include <random>

#include <boost/math/special_functions/gamma.hpp>
#include <nlohmann/json.hpp>

#include "zipfdark/errors.hpp"

namespace zipfdark {

SimonConfig::SimonConfig(double alpha, std::uint64_t steps, std::uint64_t seed)
    : alpha_(alpha), steps_(steps), seed_(seed) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
  if (steps == 0) throw DomainError("steps must be positive");
}

namespace {

// std::uniform_*_distribution is implementation-defined; these mappings keep
// runs reproducible across standard libraries.
double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// Unbiased integer in [0, bound) by rejecting the short top slice.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t threshold = (0 - bound) % bound;
  while (true) {
    const std::uint64_t x = rng();
    if (x >= threshold) return x % bound;
  }
}

void check_theta(double theta) {
  if (!(theta > 0.0 && theta < 1.0)) throw DomainError("theta must lie in (0, 1)");
}

}  // namespace

SimonRun simulate(const SimonConfig& config) {
  std::mt19937_64 rng(config.seed());
  const std::uint64_t steps = config.steps();
  const double alpha = config.alpha();

  SimonRun run;
  run.steps = steps;
  std::vector<std::uint32_t> history;
  history.reserve(steps);

  run.freqs.push_back(1);
  run.innovation_steps.push_back(1);
  history.push_back(0);
  for (std::uint64_t t = 2; t <= steps; ++t) {
    if (uniform01(rng) < alpha) {
      history.push_back(static_cast<std::uint32_t>(run.freqs.size()));
      run.freqs.push_back(1);
      run.innovation_steps.push_back(t);
    } else {
      const std::uint32_t word = history[uniform_below(rng, history.size())];
      ++run.freqs[word];
      history.push_back(word);
    }
  }
  return run;
}

double expected_innovation_step(std::size_t j, double alpha) {
  if (j == 0) throw DomainError("word index j starts at 1");
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
  return (static_cast<double>(j) - (1.0 - alpha)) / alpha;
}

double analytic_freq_exact(std::uint64_t m_j, std::uint64_t m_n, double theta) {
  check_theta(theta);
  if (m_j == 0 || m_j > m_n) throw DomainError("need 1 <= M_j <= M_N");
  if (m_j == m_n) return 1.0;
  // B(a, θ) = Γ(θ) Γ(a)/Γ(a + θ); the Γ(θ) factors cancel.
  using boost::math::lgamma;
  const auto a = static_cast<double>(m_j);
  const auto b = static_cast<double>(m_n);
  const double log_ratio = (lgamma(a) - lgamma(a + theta)) - (lgamma(b) - lgamma(b + theta));
  return std::exp(log_ratio);
}

double analytic_freq_power(std::uint64_t m_j, std::uint64_t m_n, double theta) {
  check_theta(theta);
  if (m_j == 0 || m_j > m_n) throw DomainError("need 1 <= M_j <= M_N");
  return std::pow(static_cast<double>(m_j) / static_cast<double>(m_n), -theta);
}

double analytic_freq_refined(std::size_t j, std::size_t n, double theta) {
  check_theta(theta);
  if (j == 0 || j > n) throw DomainError("need 1 <= j <= N");
  if (j == n) return 1.0;
  return std::pow((static_cast<double>(j) - theta) / (static_cast<double>(n) - theta), -theta);
}

SimonComparison run_vs_analytic(const SimonRun& run, double theta, std::size_t window_first,
                                std::size_t window_last) {
  check_theta(theta);
  SimonComparison report;
  report.theta = theta;
  const std::size_t n = run.distinct_words();
  report.distinct_words = n;

  std::vector<std::uint64_t> ranked = run.freqs;
  std::sort(ranked.begin(), ranked.end(), std::greater<>());

  report.ranks.reserve(n);
  for (std::size_t r = 1; r <= n; ++r) {
    RankComparison row;
    row.rank = r;
    row.observed = ranked[r - 1];
    row.predicted = analytic_freq_refined(r, n, theta);
    if (r < n) {
      const double log_predicted = std::log(row.predicted);
      row.log_relative_error =
          std::abs(std::log(static_cast<double>(row.observed)) - log_predicted) /
          std::abs(log_predicted);
      row.has_error = true;
    }
    report.ranks.push_back(row);
  }

  report.window_first = window_first;
  report.window_last = std::min(window_last, n == 0 ? 0 : n - 1);
  double total = 0.0;
  for (std::size_t r = window_first; r <= report.window_last; ++r) {
    total += report.ranks[r - 1].log_relative_error;
    ++report.window_count;
  }
  if (report.window_count > 0) report.mean_log_relative_error = total / report.window_count;

  if (n >= 2) {
    report.observed_first_mover_ratio =
        static_cast<double>(ranked[0]) / static_cast<double>(ranked[1]);
    report.predicted_first_mover_ratio =
        analytic_freq_refined(1, n, theta) / analytic_freq_refined(2, n, theta);
  }
  return report;
}

void write_simon_csv(std::ostream& out, const SimonRun& run) {
  out << "j,M_j,freq\n";
  for (std::size_t j = 0; j < run.freqs.size(); ++j)
    out << j + 1 << ',' << run.innovation_steps[j] << ',' << run.freqs[j] << '\n';
}

std::string comparison_to_json(const SimonComparison& report, const SimonConfig& config) {
  nlohmann::ordered_json j;
  j["generator"] = kSimonGenerator;
  j["alpha"] = config.alpha();
  j["theta"] = report.theta;
  j["steps"] = config.steps();
  j["seed"] = config.seed();
  j["distinct_words"] = report.distinct_words;
  j["window"] = {report.window_first, report.window_last};
  j["mean_log_relative_error"] = report.mean_log_relative_error;
  j["observed_first_mover_ratio"] = report.observed_first_mover_ratio;
  j["predicted_first_mover_ratio"] = report.predicted_first_mover_ratio;
  auto& ranks = j["ranks"] = nlohmann::ordered_json::array();
  for (const auto& row : report.ranks) {
    nlohmann::ordered_json entry;
    entry["rank"] = row.rank;
    entry["observed"] = row.observed;
    entry["predicted"] = row.predicted;
    if (row.has_error) {
      entry["log_relative_error"] = row.log_relative_error;
    } else {
      entry["log_relative_error"] = nullptr;
    }
    ranks.push_back(std::move(entry));
  }
  return j.dump(2);
}

}  // namespace zipfdark
