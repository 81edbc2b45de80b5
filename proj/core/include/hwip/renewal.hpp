#pragma once

#include "hwip/rng.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace hwip {

/// Largest u_k accepted by build_u_sequence: every integer below 2^53 is
/// exactly representable, so floor(u^{p/2+1}) stays exact.
inline constexpr std::int64_t kMaxReturnTime = std::int64_t{1} << 53;
/// Largest state space for which dense per-state tables are materialised.
inline constexpr std::int64_t kMaxStateTable = std::int64_t{1} << 24;
/// Default length budget for the conditional-sum dynamic program.
inline constexpr std::int64_t kDefaultDpBudget = std::int64_t{1} << 24;

/// Renewal chain on {0, ..., u_J - 1}: from a state k >= 1 the chain moves
/// to k - 1; from 0 it jumps to u_j - 1 with probability P(tau = u_j), so the
/// return time to 0 is distributed as tau. Observable g(y) = 1{y = 0} - pi_0.
struct RenewalChainSpec {
  double p = 3.0;
  int depth = 0;
  std::vector<std::int64_t> u;       // u_1 < u_2 < ... < u_depth
  double c = 0.0;                    // normaliser of the return law
  std::vector<double> return_probs;  // return_probs[j] = P(tau = u[j])
  double pi0 = 0.0;                  // 1 / E[tau]
  double mean_tau = 0.0;
  double var_tau = 0.0;

  std::int64_t state_count() const noexcept { return u.back(); }
  double g(std::int64_t state) const noexcept { return (state == 0 ? 1.0 : 0.0) - pi0; }

  /// pi_m = pi_0 * P(tau > m).
  double stationary_probability(std::int64_t m) const noexcept;
  /// Dense pi over all states; CapacityError above kMaxStateTable states.
  std::vector<double> stationary_distribution() const;
  /// g tabulated over all states.
  std::vector<double> observable() const;

  /// Asymptotic variance of S_n / sqrt(n): pi_0^3 Var(tau), the renewal-reward
  /// formula E[(1 - pi_0 tau)^2] / E[tau].
  double long_run_variance() const noexcept { return pi0 * pi0 * pi0 * var_tau; }
};

/// u_1 = 1, u_2 = 2, u_{k+1} = floor(u_k^{p/2+1}) + 2, the smallest integer
/// with u_k^{p/2+1} + 1 < u_{k+1}.
std::vector<std::int64_t> build_u_sequence(double p, int depth);

/// P(tau = u_j) = c j / u_j^{1+p/2}, c normalising the law at this depth.
RenewalChainSpec build_renewal_chain(double p, int depth);

enum class ChainStart { stationary, zero };

struct RenewalPath {
  std::vector<std::int64_t> states;  // Y_0, ..., Y_length
  std::vector<double> increments;    // X_t = g(Y_t), t = 1, ..., length
};

RenewalPath sample_renewal_path(const RenewalChainSpec& spec, std::size_t length,
                                std::uint64_t seed, ChainStart start = ChainStart::stationary);
RenewalPath sample_renewal_path(const RenewalChainSpec& spec, std::size_t length, Philox& rng,
                                ChainStart start = ChainStart::stationary);

/// Increments only, written into `out` (resized to `length`). Hot path for
/// long experiments; consumes the generator exactly like sample_renewal_path.
void sample_renewal_increments(const RenewalChainSpec& spec, std::size_t length, Philox& rng,
                               std::vector<double>& out, ChainStart start = ChainStart::stationary);

/// Same from a fixed initial state Y_0 = y0.
void sample_renewal_increments_from(const RenewalChainSpec& spec, std::int64_t y0, std::size_t length,
                                    Philox& rng, std::vector<double>& out);

std::int64_t draw_stationary_state(const RenewalChainSpec& spec, Philox& rng);

/// Exact E[X_1 + ... + X_n | Y_0 = m] for all states m and all n <= max_n.
///
/// e_k = E[X_1 + ... + X_k | Y_0 = 0] is computed once by the regeneration
/// recursion; a row for any n <= max_n then costs O(states).
class ConditionalSumOracle {
 public:
  ConditionalSumOracle(const RenewalChainSpec& spec, std::int64_t max_n,
                       std::int64_t budget = kDefaultDpBudget);

  std::int64_t max_n() const noexcept { return static_cast<std::int64_t>(from_zero_.size()) - 1; }
  double from_zero(std::int64_t k) const;
  double at(std::int64_t n, std::int64_t m) const;
  std::vector<double> table(std::int64_t n) const;

 private:
  RenewalChainSpec spec_;
  std::vector<double> from_zero_;
};

std::vector<double> conditional_sum_oracle(const RenewalChainSpec& spec, std::int64_t n,
                                           std::int64_t budget = kDefaultDpBudget);

/// (Q h)(m) = E[h(Y_1) | Y_0 = m].
std::vector<double> apply_transition(const RenewalChainSpec& spec, std::span<const double> h);

/// ||h(Y_0)||_p under the stationary law.
double lp_norm_stationary(const RenewalChainSpec& spec, std::span<const double> h, double p);

/// ||h(Y_0) - (Q h)(Y_{-1})||_p under the stationary law of (Y_{-1}, Y_0):
/// the martingale-difference part f - U^{-1} P_T f for a state function.
double martingale_part_norm(const RenewalChainSpec& spec, std::span<const double> h, double p);

}  // namespace hwip
