#pragma once

#include "hwip/functional.hpp"
#include "hwip/renewal.hpp"
#include "hwip/rng.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace hwip {

enum class ModelKind { iid, martingale_difference, martingale_plus_coboundary, linear_process, renewal_chain };
enum class InnovationLaw { normal, rademacher };
enum class PtVariant { adapted, nonadapted };

std::string_view to_string(ModelKind kind) noexcept;
std::string_view to_string(InnovationLaw law) noexcept;
std::string_view to_string(PtVariant variant) noexcept;
ModelKind parse_model_kind(std::string_view text);
InnovationLaw parse_innovation_law(std::string_view text);
PtVariant parse_variant(std::string_view text);

struct Capabilities {
  bool pt_adapted = false;
  bool pt_nonadapted = false;
  bool conditional_sum = false;
};

/// Strictly stationary increment model.
///
/// Every non-chain kind is a finite linear combination of unit innovations
///   zeta_t = eps_t * sqrt(a + b eps_{t-1}^2) / sqrt(a + b),
/// with (eps_t) iid of the chosen law (mean 0, variance 1). zeta is a
/// martingale difference sequence for F_t = sigma(eps_s, s <= t), and the
/// increment X_0 = f is an InnovationFunctional; M = F_0.
///   iid                          f = scale * zeta_0 (with b = 0)
///   martingale_difference        f = scale * zeta_0
///   linear_process               f = sum_i a_i zeta_{-i}, i < coefficients.size()
///   martingale_plus_coboundary   f = scale * zeta_0 + g_1 - g_0,
///                                g_t = sum_k b_k zeta_{t-1-k}
/// (g_t is F_{t-1}-measurable, so every shipped f is M-measurable).
/// The renewal chain carries its own RenewalChainSpec.
struct ProcessModel {
  ModelKind kind = ModelKind::iid;
  double p = 4.0;  // declared moment order
  InnovationLaw innovation = InnovationLaw::normal;
  double scale = 1.0;
  double arch_a = 1.0;
  double arch_b = 0.0;
  std::vector<double> coefficients;
  int depth = 4;
  ChainStart start = ChainStart::stationary;
  std::optional<RenewalChainSpec> chain;

  static ProcessModel iid(InnovationLaw law = InnovationLaw::normal, double scale = 1.0, double p = 4.0);
  static ProcessModel martingale_difference(InnovationLaw law, double arch_a = 1.0, double arch_b = 0.0,
                                            double scale = 1.0, double p = 4.0);
  static ProcessModel linear(std::vector<double> coefficients, InnovationLaw law = InnovationLaw::normal,
                             double p = 4.0);
  static ProcessModel martingale_plus_coboundary(double scale, std::vector<double> coboundary,
                                                 InnovationLaw law = InnovationLaw::normal, double p = 4.0);
  static ProcessModel renewal(double p, int depth, ChainStart start = ChainStart::stationary);

  /// Throws InvalidArgument on NaN/infinite/non-summable parameters or a
  /// missing chain spec.
  void validate() const;
  Capabilities capabilities() const noexcept;
  bool is_martingale_difference() const noexcept;

  /// f = X_0 as a functional of the innovations (non-chain kinds).
  InnovationFunctional increment_functional() const;
  const RenewalChainSpec& chain_spec() const;
};

/// Stationary increments X_0, ..., X_{n-1} (X_1, ..., X_n for the chain).
std::vector<double> sample_model(const ProcessModel& model, std::size_t n, std::uint64_t seed);
void sample_model(const ProcessModel& model, std::size_t n, Philox& rng, std::vector<double>& out);

/// Realisations of h∘T^t, t = 0..n-1, for any functional of the model's innovations.
void sample_functional(const ProcessModel& model, const InnovationFunctional& h, std::size_t n,
                       Philox& rng, std::vector<double>& out);

/// P_T^k h in closed form.
///   adapted:     P_T h = E[U h | M],                  H = {h : h = E[h | M]}
///   nonadapted:  P_T h = U^{-1} h - E[U^{-1} h | M],  H = {h : E[h | M] = 0}
/// k = 0 returns h. CapabilityError for unsupported (model, variant) pairs,
/// InvalidArgument when h is outside H.
InnovationFunctional apply_PT(const ProcessModel& model, PtVariant variant,
                              const InnovationFunctional& h, std::int64_t k);
/// Chain version on state functions: P_T = Q (adapted only).
std::vector<double> apply_PT(const ProcessModel& model, PtVariant variant, std::span<const double> h,
                             std::int64_t k);

/// V_n h = sum_{i<n} P_T^i h.
InnovationFunctional power_sum(const ProcessModel& model, PtVariant variant,
                               const InnovationFunctional& h, std::uint64_t n);

/// Component of f in the domain H of the variant: E[f|M] or f - E[f|M].
InnovationFunctional variant_component(const InnovationFunctional& f, PtVariant variant);

/// f - U^{-1} P_T f (adapted) or f - U P_T f (nonadapted).
InnovationFunctional martingale_part(const ProcessModel& model, PtVariant variant,
                                     const InnovationFunctional& f);

struct NormValue {
  double value = 0.0;
  double std_error = 0.0;
  bool exact = true;
};

/// ||h||_p. Exact for Gaussian-linear innovations and for Rademacher
/// innovations with at most 22 non-zero terms; otherwise a deterministic
/// Monte Carlo estimate with its standard error.
NormValue lp_norm(const ProcessModel& model, const InnovationFunctional& h, double p);

/// E|N(0,1)|^p.
double gaussian_abs_moment(double p);

}  // namespace hwip
