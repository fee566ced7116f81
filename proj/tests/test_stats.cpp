#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "perc/stats.hpp"

using namespace perc;

namespace {

std::pair<double, double> wilson_by_hand(double s, double n, double z) {
  const double p = s / n;
  const double denom = 1 + z * z / n;
  const double centre = (p + z * z / (2 * n)) / denom;
  const double half = z * std::sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / denom;
  return {centre - half, centre + half};
}

}  // namespace

TEST_CASE("wilson interval") {
  const double z = 1.959963984540054;
  const auto [lo, hi] = wilson_interval(50, 100);
  const auto [elo, ehi] = wilson_by_hand(50, 100, z);
  CHECK(lo == doctest::Approx(elo).epsilon(1e-12));
  CHECK(hi == doctest::Approx(ehi).epsilon(1e-12));
  CHECK(lo == doctest::Approx(0.4038).epsilon(1e-3));
  CHECK(hi == doctest::Approx(0.5962).epsilon(1e-3));

  for (auto [s, n] : std::vector<std::pair<int, int>>{{3, 17}, {99, 400}, {1, 2}}) {
    const auto [a, b] = wilson_interval(s, n);
    const auto [ea, eb] = wilson_by_hand(s, n, z);
    REQUIRE(a == doctest::Approx(ea).epsilon(1e-12));
    REQUIRE(b == doctest::Approx(eb).epsilon(1e-12));
  }

  CHECK(wilson_interval(0, 40).first == 0.0);
  CHECK(wilson_interval(40, 40).second == 1.0);
  const auto wide = wilson_interval(50, 100, 0.99);
  CHECK(wide.first < lo);
  CHECK_THROWS(wilson_interval(5, 4));
  CHECK_THROWS(wilson_interval(0, 0));
}

TEST_CASE("estimate reports") {
  const auto a = EstimateReport::from_counts(30, 100);
  const auto b = EstimateReport::from_counts(20, 50);
  const auto m = a.merged(b);
  CHECK(m.trials == 150);
  CHECK(m.successes == 50);
  CHECK(m.p_hat == doctest::Approx(1.0 / 3));
  CHECK(b.merged(a).ci_low == m.ci_low);
  CHECK(a.stderr_binomial() == doctest::Approx(std::sqrt(0.3 * 0.7 / 100)));

  const auto back = estimate_from_json(to_json(a));
  CHECK(back.successes == a.successes);
  CHECK(back.ci_high == a.ci_high);

  CHECK(intervals_overlap(a, b));
  CHECK_FALSE(intervals_overlap(EstimateReport::from_counts(10, 1000), EstimateReport::from_counts(900, 1000)));
}

TEST_CASE("least squares") {
  const std::vector<double> x{1, 2, 3, 4};
  const std::vector<double> y{3, 5, 7, 9};
  const auto f = ols_fit(x, y);
  CHECK(f.slope == doctest::Approx(2.0));
  CHECK(f.intercept == doctest::Approx(1.0));
  CHECK(f.slope_stderr == doctest::Approx(0.0));

  const std::vector<double> y2{1, 3, 2, 5};
  // slope = Sxy / Sxx = 5.5 / 5 = 1.1; residual sum of squares 2.7 on 2 degrees of freedom.
  const auto g = ols_fit(x, y2);
  CHECK(g.slope == doctest::Approx(1.1));
  CHECK(g.slope_stderr == doctest::Approx(std::sqrt(2.7 / 2 / 5)));

  const std::vector<double> two{1, 2};
  CHECK(std::isnan(ols_fit(two, two).slope_stderr));
}

TEST_CASE("parallel success counting") {
  auto trial = [](std::uint64_t t) { return (t * 2654435761u) % 7 < 3; };
  const auto serial = count_successes(10000, 1, trial);
  for (unsigned th : {2u, 3u, 8u}) REQUIRE(count_successes(10000, th, trial) == serial);

  const auto multi = count_successes_multi(999, 5, 2, [](std::uint64_t t, std::span<std::uint8_t> out) {
    out[0] = t % 3 == 0;
    out[1] = 1;
  });
  CHECK(multi == std::vector<std::uint64_t>{333, 999});

  CHECK_THROWS_AS(count_successes(100, 4, [](std::uint64_t t) -> bool {
                    if (t == 57) throw std::runtime_error("boom");
                    return true;
                  }),
                  std::runtime_error);
}
