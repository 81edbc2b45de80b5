#pragma once

#include "hwip/models.hpp"
#include "hwip/stats.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace hwip {

struct WeakLpEstimate {
  double p = 0.0;
  std::size_t sample_count = 0;
  /// max_k x_(k)^p * #{|x| >= x_(k)} / N over all order statistics.
  double tail_form = 0.0;
  /// Bracket for the dual-form norm: [tail^{1/p}, p/(p-1) tail^{1/p}].
  double norm_lower = 0.0;
  double norm_upper = 0.0;
  /// Same maximum restricted to ranks k >= ceil(N^{2/3}); far less noisy
  /// than the full maximum, whose extreme order statistics dominate.
  double tail_form_trimmed = 0.0;
  std::optional<Interval> bootstrap_ci;  // for tail_form
};

WeakLpEstimate empirical_weak_lp(std::span<const double> samples, double p);

/// Percentile bootstrap interval for the tail form.
Interval bootstrap_weak_lp(std::span<const double> samples, double p, std::size_t resamples,
                           std::uint64_t seed, double level = 0.95);

struct MaxBoundReport {
  std::size_t functions = 0;
  std::size_t replicates = 0;
  double max_tail_root = 0.0;        // tail-form^{1/p} of max_j |h_j|
  double worst_single_root = 0.0;    // max_j tail-form^{1/p} of h_j
  double bound = 0.0;                // p/(p-1) N^{1/p} worst_single_root
  double ratio = 0.0;                // max_tail_root / bound
  bool pass = false;                 // ratio <= 1
};

/// samples[j] holds the replicates of h_j; all rows must have equal length.
MaxBoundReport weak_lp_max_bound_check(const std::vector<std::vector<double>>& samples, double p);

struct MwNormReport {
  PtVariant variant = PtVariant::adapted;
  double p = 0.0;
  int J = 0;
  std::vector<double> terms;        // 2^{-j/2} ||V_{2^j} f||_p, j = 0..J
  std::vector<double> std_errors;   // zero when exact
  std::vector<double> partial_sums;
  bool exact = true;
  /// Geometric continuation of the last ratio of terms; infinite if the
  /// terms are not shrinking.
  double tail_estimate = 0.0;
  bool converged = false;
  double total() const { return partial_sums.empty() ? 0.0 : partial_sums.back(); }
};

/// MW(p, P_T) norm of the model's increment component in H, truncated at J.
MwNormReport mw_norm(const ProcessModel& model, PtVariant variant, double p, int J);
/// Same for an explicit h in the variant's domain.
MwNormReport mw_norm(const ProcessModel& model, PtVariant variant, const InnovationFunctional& h, double p,
                     int J);

struct MwSeriesRow {
  std::int64_t n = 0;      // dyadic checkpoint
  double term = 0.0;       // a_n ||E[S_n|M]||_p / n^{3/2} at the checkpoint
  double partial_sum = 0.0;
  double std_error = 0.0;
};

struct MwSeriesReport {
  double p = 0.0;
  bool weighted = false;
  std::vector<MwSeriesRow> rows;
  std::vector<double> block_sums;  // sum over 2^k <= n < 2^{k+1}
  std::vector<double> block_ratios;
  bool converges = false;
  std::string verdict;
};

using WeightSequence = std::function<double(std::int64_t)>;

/// Weights a_n = 1/k^2 where u_k <= n < u_{k+1}.
WeightSequence renewal_weights(const RenewalChainSpec& spec);

MwSeriesReport mw_series_diagnostic(const ProcessModel& model, double p, const WeightSequence& a,
                                    std::int64_t N);

}  // namespace hwip
