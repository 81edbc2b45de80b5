#pragma once

#include "hwip/models.hpp"
#include "hwip/renewal.hpp"
#include "hwip/stats.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace hwip {

struct RunOptions {
  std::uint64_t seed = 7;
  unsigned threads = 1;  // 0: hardware concurrency
};

struct InequalityConstants {
  double p = 0.0;
  double K_of_PT = 2.0;
  /// 2^{1/p-1/2} + sqrt(2) (2 + K(P_T)), the positive form. The closing
  /// identity of the usual proof has the opposite sign on the second term.
  double K_p = 0.0;

  static InequalityConstants make(double p, double K_of_PT = 2.0);
};

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct CertificationReport {
  std::string experiment;
  std::uint64_t seed = 0;
  std::size_t replicates = 0;
  std::vector<std::int64_t> n_grid;
  std::vector<std::pair<std::string, double>> summary;  // insertion order is output order
  Table per_n;
  Table per_replicate;
  std::vector<std::string> notes;
  bool pass = false;
  std::string verdict;

  void set(std::string key, double value);
  /// Throws InvalidArgument when the key is absent.
  double get(std::string_view key) const;
  bool has(std::string_view key) const;
};

/// One model of every kind, for suite-style certifications.
std::vector<ProcessModel> default_model_suite(double p);

/// Long-run variance lim Var(S_n)/n: (sum of the functional's coefficients)^2
/// for innovation models, pi_0^3 Var(tau) for the chain.
double long_run_variance(const ProcessModel& model);

/// Pathwise check of
///   M(n, h) <= 6 max_{0<=k<=n} |h_k| + 2^{-alpha} M([n/2], h + h o T, T^2)
/// for every n in [2, n_max], both sides by exact pair maximisation.
CertificationReport certify_dyadic_lemma(const std::vector<ProcessModel>& models, std::size_t paths_per_model,
                                         std::size_t n_max, double p, const RunOptions& options);

/// ||M(n, m)||_{p,inf} / (n^{1/p} ||m||_p) over n; pass iff the log-log slope is <= 0.02.
CertificationReport certify_martingale_inequality(const ProcessModel& model, double p,
                                                  const std::vector<std::int64_t>& n_grid, std::size_t replicates,
                                                  const RunOptions& options);

/// ||M(n, h)||_{p,inf} / (n^{1/p} (||h - U^{+-} P_T h||_p + K_p sum_{j<r} 2^{-j/2} ||V_{2^j} h||_p)),
/// h the model's increment component in the variant's domain; same pass rule.
/// Also reports the ratio ||n^{-1/2} ||W(n, h)||_H||_{p,inf} / ||h||_MW.
CertificationReport certify_mw_inequality(const ProcessModel& model, PtVariant variant, double p,
                                          const std::vector<std::int64_t>& n_grid, std::size_t replicates,
                                          const RunOptions& options);

struct VarianceEstimate {
  double eta_hat = 0.0;
  double std_error = 0.0;
};

/// mean of S_n^2 / n over replicates (every shipped model has E S_n = 0).
VarianceEstimate estimate_variance_constant(const ProcessModel& model, std::size_t n, std::size_t replicates,
                                            const RunOptions& options);

struct ConvergenceReport {
  double eta_hat = 0.0;
  double eta_std_error = 0.0;
  double eta_exact = 0.0;
  std::vector<double> time_grid;
  std::vector<double> fdd_ks;
  std::vector<double> fdd_p_values;
  std::vector<std::int64_t> holder_n;  // pair compared by holder_ks
  double holder_ks = 0.0;
  double holder_p_value = 1.0;
};

/// KS distance of W(n, t)/sqrt(n) against N(0, eta_hat t) per grid point.
/// eta_hat is the exact long-run variance for the chain and an independent
/// estimate_variance_constant run otherwise.
ConvergenceReport fdd_convergence_test(const ProcessModel& model, std::size_t n, std::size_t replicates,
                                       const std::vector<double>& time_grid, const RunOptions& options);

/// Two-sample KS between ||W(n, f)/sqrt(n)||_H at n = n_a and n = n_b
/// (independent replicates for each n).
KsResult holder_distribution_ks(const ProcessModel& model, double p, std::size_t n_a, std::size_t n_b,
                                std::size_t replicates, const RunOptions& options);

CertificationReport convergence_report(const ConvergenceReport& result, std::size_t n, std::size_t replicates,
                                       const RunOptions& options, double ks_limit, double holder_ks_limit);

/// P(modulus_restricted(W(n)/sqrt(n), alpha, delta) > epsilon) over the grid.
CertificationReport holder_tightness_diagnostic(const ProcessModel& model, double p,
                                                const std::vector<std::int64_t>& n_grid, std::size_t replicates,
                                                const std::vector<double>& delta_grid, double epsilon,
                                                const RunOptions& options);

struct NontightnessParams {
  std::int64_t K = 2;
  int j_level = 4;
  double delta = 1e-3;
  std::size_t replicates = 200;
  std::uint64_t step_budget = std::uint64_t{1} << 34;
};

struct NontightnessGeometry {
  std::int64_t n = 0;           // floor(u_j^{(p+2)/2})
  std::int64_t length = 0;      // n K
  std::int64_t max_lag = 0;     // floor(n delta)
  double alpha = 0.0;
  double threshold = 0.0;       // pi_0 / (2 K^{1/p})
  double mu_A = 0.0;            // mu(A_n)
  double excursion_hit = 0.0;   // 1 - (1 - mu(A_n))^n
  double tail_Tn = 0.0;         // mu(T_n > K n) or its Chebyshev bound
  bool tail_exact = false;
  double lower_bound = 0.0;     // excursion_hit - tail_Tn
};

NontightnessGeometry nontightness_geometry(const RenewalChainSpec& spec, const NontightnessParams& params);

/// P(R >= pi_0 / (2 K^{1/p})), R = (nK)^{-1/p} max_{j - i <= n delta} |S_j - S_i| / (j - i)^alpha,
/// over stationary chain paths of length nK, with the exact lower bound.
CertificationReport nontightness_experiment(const RenewalChainSpec& spec, const NontightnessParams& params,
                                            const RunOptions& options);

/// Same exceedance event for iid N(0, variance) increments at the chain's (n, delta, epsilon).
CertificationReport nontightness_contrast(const RenewalChainSpec& spec, const NontightnessParams& params,
                                          double variance, const RunOptions& options);

struct IdentityCheck {
  bool pass = true;
  std::size_t regenerations = 0;
  double max_error = 0.0;
};

/// S_{T_k} = k - pi_0 T_k at every return T_k to 0, to 1e-10 absolute.
IdentityCheck renewal_identity_check(const RenewalChainSpec& spec, const RenewalPath& path);

CertificationReport certify_renewal_identity(const RenewalChainSpec& spec, std::size_t paths, std::size_t length,
                                             const RunOptions& options);

/// Monte Carlo E[S_n | Y_0 = m] against the oracle for m <= max_state, n <= max_n.
CertificationReport certify_conditional_sum_oracle(const RenewalChainSpec& spec, std::int64_t max_state,
                                                   std::int64_t max_n, std::size_t paths,
                                                   const RunOptions& options);

}  // namespace hwip
