#include "doctest.h"

#include "hwip/errors.hpp"
#include "hwip/rng.hpp"
#include "hwip/stats.hpp"

#include <cmath>
#include <random>

using namespace hwip;

TEST_CASE("compensated sum keeps small terms") {
  std::vector<double> x = {1e16, 1.0, -1e16, 1.0};
  CHECK(compensated_sum(x) == 2.0);
}

TEST_CASE("mean estimate") {
  const std::vector<double> x = {1, 2, 3, 4};
  const auto m = mean_estimate(x);
  CHECK(m.mean == 2.5);
  CHECK(m.variance == doctest::Approx(5.0 / 3.0));
  CHECK(m.std_error == doctest::Approx(std::sqrt(5.0 / 12.0)));
}

TEST_CASE("normal cdf and Kolmogorov survival") {
  CHECK(normal_cdf(0.0) == 0.5);
  CHECK(normal_cdf(1.959963984540054) == doctest::Approx(0.975));
  CHECK(kolmogorov_survival(1.3580986393225505) == doctest::Approx(0.05).epsilon(1e-6));
  CHECK(kolmogorov_survival(0.0) == 1.0);
  CHECK(kolmogorov_survival(5.0) < 1e-20);
}

TEST_CASE("KS tests") {
  Philox rng(1, 0);
  std::normal_distribution<double> normal;
  std::vector<double> a(2000), b(2000), shifted(2000);
  for (double& x : a) x = normal(rng);
  for (double& x : b) x = normal(rng);
  for (double& x : shifted) x = normal(rng) + 0.3;
  CHECK(ks_one_sample(a, normal_cdf).p_value > 0.001);
  CHECK(ks_one_sample(shifted, normal_cdf).p_value < 1e-6);
  CHECK(ks_two_sample(a, b).p_value > 0.001);
  CHECK(ks_two_sample(a, shifted).p_value < 1e-6);
  // D for a single point at the median.
  CHECK(ks_one_sample(std::vector<double>{0.0}, normal_cdf).distance == doctest::Approx(0.5));
  CHECK(ks_two_sample(std::vector<double>{1, 2}, std::vector<double>{3, 4}).distance == 1.0);
}

TEST_CASE("Wilson interval") {
  const auto i = wilson_interval(50, 100);
  CHECK(i.lower == doctest::Approx(0.4038).epsilon(1e-3));
  CHECK(i.upper == doctest::Approx(0.5962).epsilon(1e-3));
  const auto zero = wilson_interval(0, 20);
  CHECK(zero.lower == doctest::Approx(0.0));
  CHECK(zero.upper > 0.1);
  CHECK(wilson_interval(20, 20).upper == doctest::Approx(1.0));
}

TEST_CASE("log-log slope") {
  const std::vector<double> x = {1, 2, 4, 8};
  std::vector<double> y;
  for (double v : x) y.push_back(3.0 * std::pow(v, 0.7));
  CHECK(loglog_slope(x, y) == doctest::Approx(0.7));
}
