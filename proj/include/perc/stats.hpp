#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include <json.hpp>

namespace perc {

// Wilson score interval for `successes` out of `trials`.
std::pair<double, double> wilson_interval(std::uint64_t successes, std::uint64_t trials, double confidence = 0.95);

struct EstimateReport {
  std::uint64_t trials = 0;
  std::uint64_t successes = 0;
  double confidence = 0.95;
  double p_hat = 0.0;
  double ci_low = 0.0;
  double ci_high = 1.0;

  static EstimateReport from_counts(std::uint64_t successes, std::uint64_t trials, double confidence = 0.95);
  // Count addition; associative and commutative.
  EstimateReport merged(const EstimateReport& other) const;
  // Standard error of p_hat, sqrt(p(1-p)/trials).
  double stderr_binomial() const;
};

nlohmann::json to_json(const EstimateReport& r);
EstimateReport estimate_from_json(const nlohmann::json& j);

// Two intervals overlap (no significant ordering).
bool intervals_overlap(const EstimateReport& a, const EstimateReport& b);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  std::size_t points = 0;
};

// Ordinary least squares of y on x. slope_stderr is NaN below 3 points.
LinearFit ols_fit(std::span<const double> x, std::span<const double> y);

// Counts trials t in [0, trials) with trial(t) == true across `threads`
// workers. Each trial must depend only on t, so the count is the same for any
// worker count.
std::uint64_t count_successes(std::uint64_t trials, unsigned threads, const std::function<bool(std::uint64_t)>& trial);

}  // namespace perc

namespace perc {

// Per-trial vectors of k outcomes: trial(t, out) fills out[0..k) with 0/1 and
// the result holds k success counts. Worker-count independent like
// count_successes.
std::vector<std::uint64_t> count_successes_multi(std::uint64_t trials, unsigned threads, std::size_t k,
                                                 const std::function<void(std::uint64_t, std::span<std::uint8_t>)>& trial);

}  // namespace perc
