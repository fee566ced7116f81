#include "perc/stats.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <stdexcept>
#include <thread>
#include <vector>

#include <boost/math/distributions/normal.hpp>

namespace perc {

std::pair<double, double> wilson_interval(std::uint64_t successes, std::uint64_t trials, double confidence) {
  if (trials == 0) throw std::invalid_argument("wilson_interval needs trials >= 1");
  if (successes > trials) throw std::invalid_argument("successes exceed trials");
  if (!(confidence > 0.0 && confidence < 1.0)) throw std::invalid_argument("confidence must be in (0, 1)");
  const double z = boost::math::quantile(boost::math::normal(), 0.5 + confidence / 2.0);
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = z / denom * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
  double lo = successes == 0 ? 0.0 : std::max(0.0, center - half);
  double hi = successes == trials ? 1.0 : std::min(1.0, center + half);
  lo = std::min(lo, p);
  hi = std::max(hi, p);
  return {lo, hi};
}

EstimateReport EstimateReport::from_counts(std::uint64_t successes, std::uint64_t trials, double confidence) {
  EstimateReport r;
  r.trials = trials;
  r.successes = successes;
  r.confidence = confidence;
  r.p_hat = static_cast<double>(successes) / static_cast<double>(trials);
  std::tie(r.ci_low, r.ci_high) = wilson_interval(successes, trials, confidence);
  return r;
}

EstimateReport EstimateReport::merged(const EstimateReport& other) const {
  if (confidence != other.confidence) throw std::invalid_argument("merging reports with different confidence");
  return from_counts(successes + other.successes, trials + other.trials, confidence);
}

double EstimateReport::stderr_binomial() const {
  return std::sqrt(p_hat * (1.0 - p_hat) / static_cast<double>(trials));
}

nlohmann::json to_json(const EstimateReport& r) {
  return {{"p_hat", r.p_hat},         {"ci_low", r.ci_low},       {"ci_high", r.ci_high},
          {"trials", r.trials},       {"successes", r.successes}, {"confidence", r.confidence}};
}

EstimateReport estimate_from_json(const nlohmann::json& j) {
  return EstimateReport::from_counts(j.at("successes").get<std::uint64_t>(), j.at("trials").get<std::uint64_t>(),
                                     j.value("confidence", 0.95));
}

bool intervals_overlap(const EstimateReport& a, const EstimateReport& b) {
  return a.ci_low <= b.ci_high && b.ci_low <= a.ci_high;
}

LinearFit ols_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("ols_fit: size mismatch");
  LinearFit fit;
  fit.points = x.size();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  if (x.size() < 2) {
    fit.slope = fit.intercept = fit.slope_stderr = nan;
    return fit;
  }
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) mx += x[i], my += y[i];
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (x.size() < 3) {
    fit.slope_stderr = nan;
    return fit;
  }
  double rss = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * x[i]);
    rss += r * r;
  }
  fit.slope_stderr = std::sqrt(rss / (n - 2.0) / sxx);
  return fit;
}

std::uint64_t count_successes(std::uint64_t trials, unsigned threads, const std::function<bool(std::uint64_t)>& trial) {
  threads = std::max(1u, threads);
  if (threads == 1 || trials < 2) {
    std::uint64_t s = 0;
    for (std::uint64_t t = 0; t < trials; ++t) s += trial(t) ? 1 : 0;
    return s;
  }
  std::atomic<std::uint64_t> next{0};
  std::vector<std::uint64_t> per_worker(threads, 0);
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::uint64_t t = next++; t < trials; t = next++) per_worker[w] += trial(t) ? 1 : 0;
      } catch (...) {
        errors[w] = std::current_exception();
        next = trials;
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::uint64_t s = 0;
  for (auto c : per_worker) s += c;
  return s;
}

}  // namespace perc

namespace perc {

std::vector<std::uint64_t> count_successes_multi(std::uint64_t trials, unsigned threads, std::size_t k,
                                                 const std::function<void(std::uint64_t, std::span<std::uint8_t>)>& trial) {
  threads = std::max(1u, threads);
  std::vector<std::vector<std::uint64_t>> per_worker(threads, std::vector<std::uint64_t>(k, 0));
  std::vector<std::exception_ptr> errors(threads);
  std::atomic<std::uint64_t> next{0};
  auto work = [&](unsigned w) {
    std::vector<std::uint8_t> out(k);
    try {
      for (std::uint64_t t = next++; t < trials; t = next++) {
        std::fill(out.begin(), out.end(), 0);
        trial(t, out);
        for (std::size_t i = 0; i < k; ++i) per_worker[w][i] += out[i] ? 1 : 0;
      }
    } catch (...) {
      errors[w] = std::current_exception();
      next = trials;
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work, w);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::vector<std::uint64_t> total(k, 0);
  for (const auto& c : per_worker)
    for (std::size_t i = 0; i < k; ++i) total[i] += c[i];
  return total;
}

}  // namespace perc
