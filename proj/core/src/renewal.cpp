#include "hwip/renewal.hpp"

#include "hwip/errors.hpp"
#include "hwip/exponent.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace hwip {

std::vector<std::int64_t> build_u_sequence(double p, int depth) {
  HolderExponent::from_p(p);
  if (depth < 2) throw InvalidArgument("renewal depth must be >= 2, got " + std::to_string(depth));
  std::vector<std::int64_t> u = {1, 2};
  const double growth = p / 2.0 + 1.0;
  for (int k = 2; k < depth; ++k) {
    const double power = std::pow(static_cast<double>(u.back()), growth);
    if (!(power + 2.0 < static_cast<double>(kMaxReturnTime)))
      throw CapacityError("u_" + std::to_string(k + 1) + " = floor(u_" + std::to_string(k) +
                          "^" + std::to_string(growth) + ") + 2 exceeds 2^53 (failing k = " +
                          std::to_string(k) + "); reduce depth");
    u.push_back(static_cast<std::int64_t>(std::floor(power)) + 2);
  }
  return u;
}

RenewalChainSpec build_renewal_chain(double p, int depth) {
  RenewalChainSpec spec;
  spec.p = p;
  spec.depth = depth;
  spec.u = build_u_sequence(p, depth);

  const double exponent = 1.0 + p / 2.0;
  std::vector<double> weights(spec.u.size());
  double total = 0.0;
  for (std::size_t j = 0; j < spec.u.size(); ++j) {
    weights[j] = static_cast<double>(j + 1) / std::pow(static_cast<double>(spec.u[j]), exponent);
    total += weights[j];
  }
  spec.c = 1.0 / total;
  spec.return_probs.resize(weights.size());
  double mean = 0.0;
  double second = 0.0;
  for (std::size_t j = 0; j < weights.size(); ++j) {
    spec.return_probs[j] = weights[j] / total;
    const double uj = static_cast<double>(spec.u[j]);
    mean += uj * spec.return_probs[j];
    second += uj * uj * spec.return_probs[j];
  }
  spec.mean_tau = mean;
  spec.var_tau = second - mean * mean;
  spec.pi0 = 1.0 / mean;
  return spec;
}

double RenewalChainSpec::stationary_probability(std::int64_t m) const noexcept {
  if (m < 0 || m >= state_count()) return 0.0;
  double tail = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j)
    if (u[j] > m) tail += return_probs[j];
  return pi0 * tail;
}

std::vector<double> RenewalChainSpec::stationary_distribution() const {
  if (state_count() > kMaxStateTable)
    throw CapacityError("stationary table needs " + std::to_string(state_count()) +
                        " states (limit 2^24); reduce depth");
  std::vector<double> pi(static_cast<std::size_t>(state_count()));
  // P(tau > m) is constant between consecutive u_j.
  double tail = 1.0;
  std::int64_t m = 0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    for (; m < u[j]; ++m) pi[static_cast<std::size_t>(m)] = pi0 * tail;
    tail -= return_probs[j];
  }
  return pi;
}

std::vector<double> RenewalChainSpec::observable() const {
  if (state_count() > kMaxStateTable)
    throw CapacityError("observable table needs " + std::to_string(state_count()) +
                        " states (limit 2^24); reduce depth");
  std::vector<double> h(static_cast<std::size_t>(state_count()), -pi0);
  h[0] = 1.0 - pi0;
  return h;
}

namespace {

std::size_t draw_return_index(const RenewalChainSpec& spec, Philox& rng) {
  const double x = rng.uniform_open();
  double cumulative = 0.0;
  for (std::size_t j = 0; j + 1 < spec.return_probs.size(); ++j) {
    cumulative += spec.return_probs[j];
    if (x < cumulative) return j;
  }
  return spec.return_probs.size() - 1;
}

std::int64_t initial_state(const RenewalChainSpec& spec, Philox& rng, ChainStart start) {
  return start == ChainStart::zero ? 0 : draw_stationary_state(spec, rng);
}

}  // namespace

std::int64_t draw_stationary_state(const RenewalChainSpec& spec, Philox& rng) {
  // Size-biased cycle length u with weight pi_0 u P(tau = u), then a uniform
  // position among the u states that cycle visits.
  const double x = rng.uniform_open();
  double cumulative = 0.0;
  std::size_t pick = spec.u.size() - 1;
  for (std::size_t j = 0; j + 1 < spec.u.size(); ++j) {
    cumulative += spec.pi0 * static_cast<double>(spec.u[j]) * spec.return_probs[j];
    if (x < cumulative) {
      pick = j;
      break;
    }
  }
  const auto length = static_cast<double>(spec.u[pick]);
  const auto offset = static_cast<std::int64_t>(std::floor(rng.uniform_open() * length));
  return std::min<std::int64_t>(offset, spec.u[pick] - 1);
}

RenewalPath sample_renewal_path(const RenewalChainSpec& spec, std::size_t length, Philox& rng,
                                ChainStart start) {
  if (length == 0) throw InvalidArgument("renewal path length must be >= 1");
  RenewalPath path;
  path.states.reserve(length + 1);
  path.increments.reserve(length);
  std::int64_t y = initial_state(spec, rng, start);
  path.states.push_back(y);
  for (std::size_t t = 0; t < length; ++t) {
    y = (y == 0) ? spec.u[draw_return_index(spec, rng)] - 1 : y - 1;
    path.states.push_back(y);
    path.increments.push_back(spec.g(y));
  }
  return path;
}

RenewalPath sample_renewal_path(const RenewalChainSpec& spec, std::size_t length,
                                std::uint64_t seed, ChainStart start) {
  Philox rng(seed, 0);
  return sample_renewal_path(spec, length, rng, start);
}

void sample_renewal_increments(const RenewalChainSpec& spec, std::size_t length, Philox& rng,
                               std::vector<double>& out, ChainStart start) {
  const std::int64_t y0 = initial_state(spec, rng, start);
  sample_renewal_increments_from(spec, y0, length, rng, out);
}

void sample_renewal_increments_from(const RenewalChainSpec& spec, std::int64_t y0, std::size_t length,
                                    Philox& rng, std::vector<double>& out) {
  if (y0 < 0 || y0 >= spec.state_count()) throw InvalidArgument("initial state out of range");
  out.resize(length);
  const double at_zero = 1.0 - spec.pi0;
  const double elsewhere = -spec.pi0;
  std::int64_t y = y0;
  for (std::size_t t = 0; t < length; ++t) {
    y = (y == 0) ? spec.u[draw_return_index(spec, rng)] - 1 : y - 1;
    out[t] = (y == 0) ? at_zero : elsewhere;
  }
}

ConditionalSumOracle::ConditionalSumOracle(const RenewalChainSpec& spec, std::int64_t max_n,
                                           std::int64_t budget)
    : spec_(spec) {
  if (max_n < 0) throw InvalidArgument("conditional-sum horizon must be >= 0");
  if (max_n > budget)
    throw CapacityError("conditional-sum horizon n = " + std::to_string(max_n) +
                        " exceeds the DP budget " + std::to_string(budget) + "; reduce n");
  from_zero_.assign(static_cast<std::size_t>(max_n) + 1, 0.0);
  const double pi0 = spec.pi0;
  for (std::int64_t k = 1; k <= max_n; ++k) {
    double e = 0.0;
    for (std::size_t j = 0; j < spec.u.size(); ++j) {
      const std::int64_t uj = spec.u[j];
      // Deterministic descent u_j - 1, ..., 0 over min(u_j, k) steps.
      double excursion = -pi0 * static_cast<double>(std::min(uj, k));
      if (k >= uj) excursion += 1.0;
      if (k > uj) excursion += from_zero_[static_cast<std::size_t>(k - uj)];
      e += spec.return_probs[j] * excursion;
    }
    from_zero_[static_cast<std::size_t>(k)] = e;
  }
}

double ConditionalSumOracle::from_zero(std::int64_t k) const {
  if (k < 0 || k > max_n()) throw InvalidArgument("conditional-sum horizon out of range");
  return from_zero_[static_cast<std::size_t>(k)];
}

double ConditionalSumOracle::at(std::int64_t n, std::int64_t m) const {
  if (n < 0 || n > max_n()) throw InvalidArgument("conditional-sum horizon out of range");
  if (m < 0 || m >= spec_.state_count()) throw InvalidArgument("state out of range");
  if (m == 0) return from_zero_[static_cast<std::size_t>(n)];
  double value = -spec_.pi0 * static_cast<double>(std::min(m, n));
  if (n >= m) value += 1.0;
  if (n > m) value += from_zero_[static_cast<std::size_t>(n - m)];
  return value;
}

std::vector<double> ConditionalSumOracle::table(std::int64_t n) const {
  if (spec_.state_count() > kMaxStateTable)
    throw CapacityError("conditional-sum table needs " + std::to_string(spec_.state_count()) +
                        " states (limit 2^24); reduce depth");
  std::vector<double> row(static_cast<std::size_t>(spec_.state_count()));
  for (std::int64_t m = 0; m < spec_.state_count(); ++m) row[static_cast<std::size_t>(m)] = at(n, m);
  return row;
}

std::vector<double> conditional_sum_oracle(const RenewalChainSpec& spec, std::int64_t n,
                                           std::int64_t budget) {
  if (n < 1) throw InvalidArgument("conditional_sum_oracle requires n >= 1");
  return ConditionalSumOracle(spec, n, budget).table(n);
}

namespace {

void check_state_function(const RenewalChainSpec& spec, std::span<const double> h) {
  if (static_cast<std::int64_t>(h.size()) != spec.state_count())
    throw InvalidArgument("state function has " + std::to_string(h.size()) + " entries, chain has " +
                          std::to_string(spec.state_count()) + " states");
}

}  // namespace

std::vector<double> apply_transition(const RenewalChainSpec& spec, std::span<const double> h) {
  check_state_function(spec, h);
  std::vector<double> out(h.size());
  double from_zero = 0.0;
  for (std::size_t j = 0; j < spec.u.size(); ++j)
    from_zero += spec.return_probs[j] * h[static_cast<std::size_t>(spec.u[j] - 1)];
  out[0] = from_zero;
  for (std::size_t m = 1; m < h.size(); ++m) out[m] = h[m - 1];
  return out;
}

double lp_norm_stationary(const RenewalChainSpec& spec, std::span<const double> h, double p) {
  check_state_function(spec, h);
  const std::vector<double> pi = spec.stationary_distribution();
  double sum = 0.0;
  for (std::size_t m = 0; m < h.size(); ++m) sum += pi[m] * std::pow(std::abs(h[m]), p);
  return std::pow(sum, 1.0 / p);
}

double martingale_part_norm(const RenewalChainSpec& spec, std::span<const double> h, double p) {
  check_state_function(spec, h);
  const std::vector<double> pi = spec.stationary_distribution();
  const std::vector<double> qh = apply_transition(spec, h);
  double sum = 0.0;
  // Y_{-1} = m >= 1 forces Y_0 = m - 1, where h(m - 1) = (Q h)(m): no mass.
  for (std::size_t j = 0; j < spec.u.size(); ++j) {
    const double target = h[static_cast<std::size_t>(spec.u[j] - 1)];
    sum += pi[0] * spec.return_probs[j] * std::pow(std::abs(target - qh[0]), p);
  }
  return std::pow(sum, 1.0 / p);
}

}  // namespace hwip
