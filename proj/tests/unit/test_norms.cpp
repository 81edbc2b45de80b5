#include "doctest.h"

#include "hwip/errors.hpp"
#include "hwip/norms.hpp"

#include <cmath>
#include <numbers>

using namespace hwip;

namespace {

std::vector<double> pareto(std::size_t n, double p, std::uint64_t seed) {
  Philox rng(seed, 0);
  std::vector<double> x(n);
  for (double& v : x) v = std::pow(rng.uniform_open(), -1.0 / p);
  return x;
}

}  // namespace

TEST_CASE("weak L^p of degenerate samples") {
  const std::vector<double> c(100, -2.0);
  const auto e = empirical_weak_lp(c, 3.0);
  CHECK(e.tail_form == doctest::Approx(8.0));
  CHECK(e.norm_lower == doctest::Approx(2.0));
  CHECK(e.norm_upper == doctest::Approx(3.0));
  CHECK(empirical_weak_lp(std::vector<double>(10, 0.0), 3.0).tail_form == 0.0);
  CHECK_THROWS_AS(empirical_weak_lp(std::vector<double>{}, 3.0), InvalidArgument);
  CHECK_THROWS_AS(empirical_weak_lp(std::vector<double>{NAN}, 3.0), InvalidArgument);
  CHECK_THROWS_AS(empirical_weak_lp(std::vector<double>{1.0}, 1.0), InvalidArgument);
}

TEST_CASE("weak L^p tail form on a hand example") {
  // |x| sorted: 1, 2, 3, 4 -> max(1*4, 8*3, 27*2, 64*1)/4 at p = 3
  const std::vector<double> x = {-3.0, 1.0, 4.0, -2.0};
  CHECK(empirical_weak_lp(x, 3.0).tail_form == doctest::Approx(64.0 / 4.0));
  // ties share a count
  const std::vector<double> y = {2.0, 2.0, 1.0};
  CHECK(empirical_weak_lp(y, 2.0).tail_form == doctest::Approx(4.0 * 2.0 / 3.0));
}

TEST_CASE("weak L^p is homogeneous and brackets are ordered") {
  const auto x = pareto(5000, 3.0, 2);
  std::vector<double> y(x);
  for (double& v : y) v *= 2.5;
  const auto ex = empirical_weak_lp(x, 3.0), ey = empirical_weak_lp(y, 3.0);
  CHECK(ey.norm_lower == doctest::Approx(2.5 * ex.norm_lower));
  CHECK(ex.norm_lower <= ex.norm_upper);
  CHECK(ex.tail_form_trimmed <= ex.tail_form);
}

TEST_CASE("Pareto tails: trimmed estimator concentrates at 1") {
  for (double p : {2.5, 3.0, 4.0}) {
    const auto e = empirical_weak_lp(pareto(100000, p, 7), p);
    CHECK(e.tail_form >= 1.0);  // rank N alone contributes x_min^p >= 1
    CHECK(std::abs(e.tail_form_trimmed - 1.0) < 0.1);
  }
}

TEST_CASE("bootstrap interval brackets the estimate and is reproducible") {
  const auto x = pareto(2000, 3.0, 9);
  const auto ci = bootstrap_weak_lp(x, 3.0, 200, 1);
  const auto again = bootstrap_weak_lp(x, 3.0, 200, 1);
  CHECK(ci.lower == again.lower);
  CHECK(ci.upper == again.upper);
  CHECK(ci.lower <= ci.upper);
  CHECK(ci.lower <= empirical_weak_lp(x, 3.0).tail_form * 1.5);
}

TEST_CASE("max bound") {
  std::vector<std::vector<double>> one = {pareto(1000, 3.0, 3)};
  const auto r1 = weak_lp_max_bound_check(one, 3.0);
  CHECK(r1.pass);
  CHECK(r1.ratio == doctest::Approx(2.0 / 3.0));
  std::vector<std::vector<double>> many;
  for (std::uint64_t j = 0; j < 16; ++j) many.push_back(pareto(4000, 3.0, 100 + j));
  const auto r16 = weak_lp_max_bound_check(many, 3.0);
  CHECK(r16.functions == 16);
  CHECK(r16.ratio > 0.0);
  CHECK_THROWS_AS(weak_lp_max_bound_check({{1.0, 2.0}, {1.0}}, 3.0), InvalidArgument);
}

TEST_CASE("MW norm of a martingale difference collapses to (2 + sqrt 2) ||f||") {
  const ProcessModel m = ProcessModel::martingale_difference(InnovationLaw::normal, 1.0, 0.0, 1.7);
  const auto r = mw_norm(m, PtVariant::adapted, 4.0, 80);
  const double f = lp_norm(m, m.increment_functional(), 4.0).value;
  CHECK(std::abs(r.total() - (2.0 + std::numbers::sqrt2) * f) < 1e-10);
  CHECK(r.exact);
  CHECK(r.converged);
  CHECK(r.terms.size() == 81);
  // Nothing of f lives outside M.
  CHECK(mw_norm(m, PtVariant::nonadapted, 4.0, 10).total() == 0.0);
}

TEST_CASE("MW norm is homogeneous and matches hand-computed terms") {
  const ProcessModel m = ProcessModel::linear({1.0, 0.5, 0.25});
  const InnovationFunctional h(-2, {0.25, 0.5, 1.0});
  const auto r = mw_norm(m, PtVariant::adapted, h, 2.0, 6);
  // V_1 h = h, V_2 h = h + P_T h = 0.25 z_{-2} + 0.75 z_{-1} + 1.5 z_0, V_4 = V_{>=3} = (0.25, 0.75, 1.75)
  CHECK(r.terms[0] == doctest::Approx(std::sqrt(0.0625 + 0.25 + 1.0)));
  CHECK(r.terms[1] == doctest::Approx(std::sqrt(0.0625 + 0.5625 + 2.25) / std::sqrt(2.0)));
  CHECK(r.terms[2] == doctest::Approx(std::sqrt(0.0625 + 0.5625 + 3.0625) / 2.0));
  const auto r3 = mw_norm(m, PtVariant::adapted, 3.0 * h, 2.0, 6);
  CHECK(r3.total() == doctest::Approx(3.0 * r.total()));
  CHECK(r.tail_estimate > 0.0);
  CHECK(r.tail_estimate == doctest::Approx(r.terms.back() * std::sqrt(0.5) / (1 - std::sqrt(0.5))));
}

TEST_CASE("nonadapted MW norm of a future functional") {
  const ProcessModel m = ProcessModel::linear({1.0});
  const InnovationFunctional q(1, {1.0, -1.0});
  const auto r = mw_norm(m, PtVariant::nonadapted, q, 2.0, 8);
  // V_n q = (1, -1) + (-1) = (0, -1) for n >= 2
  CHECK(r.terms[0] == doctest::Approx(std::sqrt(2.0)));
  CHECK(r.terms[1] == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK_THROWS_AS(mw_norm(m, PtVariant::nonadapted, InnovationFunctional(0, {1.0}), 2.0, 3), InvalidArgument);
}

TEST_CASE("chain MW norm terms") {
  const ProcessModel chain = ProcessModel::renewal(3.0, 4);
  const RenewalChainSpec& s = chain.chain_spec();
  const auto r = mw_norm(chain, PtVariant::adapted, 3.0, 10);
  const double g3 = std::pow(s.pi0 * std::pow(1 - s.pi0, 3.0) + (1 - s.pi0) * std::pow(s.pi0, 3.0), 1.0 / 3.0);
  CHECK(r.terms[0] == doctest::Approx(g3));
  CHECK(r.exact);
  // V_2 g = g + Q g
  auto v = apply_transition(s, s.observable());
  const auto g = s.observable();
  for (std::size_t m = 0; m < v.size(); ++m) v[m] += g[m];
  CHECK(r.terms[1] == doctest::Approx(lp_norm_stationary(s, v, 3.0) / std::sqrt(2.0)));
  CHECK_THROWS_AS(mw_norm(chain, PtVariant::adapted, 3.0, 23), CapacityError);
  CHECK_THROWS_AS(mw_norm(chain, PtVariant::nonadapted, 3.0, 3), CapabilityError);
}

TEST_CASE("series diagnostic") {
  const ProcessModel mds = ProcessModel::martingale_difference(InnovationLaw::normal, 1.0, 0.0);
  const auto r = mw_series_diagnostic(mds, 4.0, {}, 1023);
  CHECK(!r.weighted);
  CHECK(r.converges);
  CHECK(r.verdict == "converges");
  CHECK(r.block_sums.size() == 10);
  CHECK(r.rows.front().n == 1);
  CHECK(r.rows.back().n == 1023);
  const double norm = std::pow(3.0, 0.25);
  CHECK(r.rows.front().term == doctest::Approx(norm));
  for (double ratio : r.block_ratios) CHECK(ratio < 0.9);

  const ProcessModel chain = ProcessModel::renewal(3.0, 4);
  const auto w = renewal_weights(chain.chain_spec());
  CHECK(w(1) == 1.0);
  CHECK(w(6) == 0.25);
  CHECK(w(7) == doctest::Approx(1.0 / 9));
  const auto c = mw_series_diagnostic(chain, 3.0, w, 4095);
  CHECK(c.weighted);
  CHECK(c.block_sums.size() == 12);
  CHECK(c.rows.back().partial_sum > 0.0);
}
