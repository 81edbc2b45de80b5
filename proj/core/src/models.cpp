#include "hwip/models.hpp"

#include "hwip/errors.hpp"
#include "hwip/exponent.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

namespace hwip {

std::string_view to_string(ModelKind kind) noexcept {
  switch (kind) {
    case ModelKind::iid: return "iid";
    case ModelKind::martingale_difference: return "martingale_difference";
    case ModelKind::martingale_plus_coboundary: return "martingale_plus_coboundary";
    case ModelKind::linear_process: return "linear_process";
    case ModelKind::renewal_chain: return "renewal_chain";
  }
  return "unknown";
}

std::string_view to_string(InnovationLaw law) noexcept {
  return law == InnovationLaw::normal ? "normal" : "rademacher";
}

std::string_view to_string(PtVariant variant) noexcept {
  return variant == PtVariant::adapted ? "adapted" : "nonadapted";
}

ModelKind parse_model_kind(std::string_view text) {
  for (ModelKind kind : {ModelKind::iid, ModelKind::martingale_difference,
                         ModelKind::martingale_plus_coboundary, ModelKind::linear_process,
                         ModelKind::renewal_chain})
    if (text == to_string(kind)) return kind;
  if (text == "mds") return ModelKind::martingale_difference;
  throw InvalidArgument("unknown model kind '" + std::string(text) + "'");
}

InnovationLaw parse_innovation_law(std::string_view text) {
  if (text == "normal" || text == "gaussian") return InnovationLaw::normal;
  if (text == "rademacher") return InnovationLaw::rademacher;
  throw InvalidArgument("unknown innovation law '" + std::string(text) + "'");
}

PtVariant parse_variant(std::string_view text) {
  if (text == "adapted") return PtVariant::adapted;
  if (text == "nonadapted") return PtVariant::nonadapted;
  throw InvalidArgument("unknown P_T variant '" + std::string(text) + "'");
}

ProcessModel ProcessModel::iid(InnovationLaw law, double scale, double p) {
  ProcessModel m;
  m.kind = ModelKind::iid;
  m.innovation = law;
  m.scale = scale;
  m.p = p;
  m.validate();
  return m;
}

ProcessModel ProcessModel::martingale_difference(InnovationLaw law, double arch_a, double arch_b,
                                                 double scale, double p) {
  ProcessModel m;
  m.kind = ModelKind::martingale_difference;
  m.innovation = law;
  m.arch_a = arch_a;
  m.arch_b = arch_b;
  m.scale = scale;
  m.p = p;
  m.validate();
  return m;
}

ProcessModel ProcessModel::linear(std::vector<double> coefficients, InnovationLaw law, double p) {
  ProcessModel m;
  m.kind = ModelKind::linear_process;
  m.innovation = law;
  m.coefficients = std::move(coefficients);
  m.p = p;
  m.validate();
  return m;
}

ProcessModel ProcessModel::martingale_plus_coboundary(double scale, std::vector<double> coboundary,
                                                      InnovationLaw law, double p) {
  ProcessModel m;
  m.kind = ModelKind::martingale_plus_coboundary;
  m.innovation = law;
  m.scale = scale;
  m.coefficients = std::move(coboundary);
  m.p = p;
  m.validate();
  return m;
}

ProcessModel ProcessModel::renewal(double p, int depth, ChainStart start) {
  ProcessModel m;
  m.kind = ModelKind::renewal_chain;
  m.p = p;
  m.depth = depth;
  m.start = start;
  m.chain = build_renewal_chain(p, depth);
  return m;
}

void ProcessModel::validate() const {
  HolderExponent::from_p(p);
  if (kind == ModelKind::renewal_chain) {
    if (!chain) throw InvalidArgument("renewal_chain model has no chain spec");
    if (chain->depth != depth || chain->p != p)
      throw InvalidArgument("renewal_chain spec does not match the model's (p, depth)");
    return;
  }
  if (!std::isfinite(scale)) throw InvalidArgument("scale must be finite");
  if (!std::isfinite(arch_a) || !std::isfinite(arch_b) || arch_a < 0.0 || arch_b < 0.0 ||
      arch_a + arch_b <= 0.0)
    throw InvalidArgument("volatility parameters need a, b >= 0 and a + b > 0");
  if (kind == ModelKind::iid && arch_b != 0.0)
    throw InvalidArgument("iid model cannot carry a volatility feedback term (arch_b != 0)");
  double energy = 0.0;
  for (double c : coefficients) {
    if (!std::isfinite(c)) throw InvalidArgument("coefficients must be finite (got NaN/inf)");
    energy += c * c;
  }
  if (!std::isfinite(energy)) throw InvalidArgument("coefficients are not square-summable");
  if (coefficients.size() > (std::size_t{1} << 20))
    throw InvalidArgument("coefficient truncation length exceeds 2^20");
  if (kind == ModelKind::linear_process && coefficients.empty())
    throw InvalidArgument("linear_process needs at least one coefficient");
}

Capabilities ProcessModel::capabilities() const noexcept {
  if (kind == ModelKind::renewal_chain) return {true, false, true};
  return {true, true, true};
}

bool ProcessModel::is_martingale_difference() const noexcept {
  return kind == ModelKind::iid || kind == ModelKind::martingale_difference;
}

InnovationFunctional ProcessModel::increment_functional() const {
  switch (kind) {
    case ModelKind::iid:
    case ModelKind::martingale_difference:
      return InnovationFunctional::single(0, scale).trim();
    case ModelKind::linear_process: {
      std::vector<double> coef(coefficients.rbegin(), coefficients.rend());
      const auto first = -static_cast<std::int64_t>(coefficients.size()) + 1;
      return InnovationFunctional(first, std::move(coef)).trim();
    }
    case ModelKind::martingale_plus_coboundary: {
      InnovationFunctional g0;
      if (!coefficients.empty()) {
        std::vector<double> coef(coefficients.rbegin(), coefficients.rend());
        g0 = InnovationFunctional(-static_cast<std::int64_t>(coefficients.size()), std::move(coef));
      }
      return InnovationFunctional::single(0, scale) + shift(g0, 1) - g0;
    }
    case ModelKind::renewal_chain:
      break;
  }
  throw CapabilityError("renewal_chain increments are state functions, not innovation functionals");
}

const RenewalChainSpec& ProcessModel::chain_spec() const {
  if (kind != ModelKind::renewal_chain || !chain) throw CapabilityError("model is not a renewal chain");
  return *chain;
}

namespace {

double draw_innovation(InnovationLaw law, Philox& rng, std::normal_distribution<double>& normal) {
  if (law == InnovationLaw::rademacher) return (rng() >> 63) != 0 ? 1.0 : -1.0;
  return normal(rng);
}

// zeta_r for r = lo, ..., hi (inclusive).
std::vector<double> draw_zeta(const ProcessModel& model, std::int64_t lo, std::int64_t hi, Philox& rng) {
  const auto count = static_cast<std::size_t>(hi - lo + 1);
  std::vector<double> eps(count + 1);
  std::normal_distribution<double> normal;
  for (double& e : eps) e = draw_innovation(model.innovation, rng, normal);
  std::vector<double> zeta(count);
  if (model.arch_b == 0.0 || model.innovation == InnovationLaw::rademacher) {
    for (std::size_t r = 0; r < count; ++r) zeta[r] = eps[r + 1];
  } else {
    const double norm = 1.0 / std::sqrt(model.arch_a + model.arch_b);
    for (std::size_t r = 0; r < count; ++r)
      zeta[r] = eps[r + 1] * std::sqrt(model.arch_a + model.arch_b * eps[r] * eps[r]) * norm;
  }
  return zeta;
}

}  // namespace

void sample_functional(const ProcessModel& model, const InnovationFunctional& h, std::size_t n,
                       Philox& rng, std::vector<double>& out) {
  out.assign(n, 0.0);
  if (n == 0 || h.empty()) return;
  const std::int64_t lo = h.first;
  const std::int64_t hi = h.last() + static_cast<std::int64_t>(n) - 1;
  const std::vector<double> zeta = draw_zeta(model, lo, hi, rng);
  const std::size_t width = h.coef.size();
  if (width == 1) {
    for (std::size_t t = 0; t < n; ++t) out[t] = h.coef[0] * zeta[t];
    return;
  }
  for (std::size_t t = 0; t < n; ++t) {
    double x = 0.0;
    for (std::size_t k = 0; k < width; ++k) x += h.coef[k] * zeta[t + k];
    out[t] = x;
  }
}

void sample_model(const ProcessModel& model, std::size_t n, Philox& rng, std::vector<double>& out) {
  if (model.kind == ModelKind::renewal_chain) {
    sample_renewal_increments(model.chain_spec(), n, rng, out, model.start);
    return;
  }
  sample_functional(model, model.increment_functional(), n, rng, out);
}

std::vector<double> sample_model(const ProcessModel& model, std::size_t n, std::uint64_t seed) {
  model.validate();
  Philox rng(seed, 0);
  std::vector<double> out;
  sample_model(model, n, rng, out);
  return out;
}

namespace {

void require_functional_oracle(const ProcessModel& model, PtVariant variant) {
  if (model.kind == ModelKind::renewal_chain)
    throw CapabilityError("renewal_chain P_T acts on state functions, not innovation functionals");
  const Capabilities caps = model.capabilities();
  if ((variant == PtVariant::adapted && !caps.pt_adapted) ||
      (variant == PtVariant::nonadapted && !caps.pt_nonadapted))
    throw CapabilityError(std::string("model has no ") + std::string(to_string(variant)) + " P_T oracle");
}

void require_in_domain(const InnovationFunctional& h, PtVariant variant) {
  if (h.empty()) return;
  if (variant == PtVariant::adapted && h.last() > 0)
    throw InvalidArgument("adapted P_T needs an M-measurable h (all innovation indices <= 0)");
  if (variant == PtVariant::nonadapted && h.first < 1)
    throw InvalidArgument("nonadapted P_T needs E[h | M] = 0 (all innovation indices >= 1)");
}

}  // namespace

InnovationFunctional apply_PT(const ProcessModel& model, PtVariant variant,
                              const InnovationFunctional& h, std::int64_t k) {
  require_functional_oracle(model, variant);
  require_in_domain(h, variant);
  if (k < 0) throw InvalidArgument("P_T power must be >= 0");
  if (k == 0) return h;
  if (variant == PtVariant::adapted) return condition_on(shift(h, k), 0);
  return innovation_part(shift(h, -k), 0);
}

std::vector<double> apply_PT(const ProcessModel& model, PtVariant variant, std::span<const double> h,
                             std::int64_t k) {
  const RenewalChainSpec& spec = model.chain_spec();
  if (variant != PtVariant::adapted)
    throw CapabilityError("renewal_chain has no nonadapted P_T oracle: state functions are M-measurable");
  if (k < 0) throw InvalidArgument("P_T power must be >= 0");
  std::vector<double> out(h.begin(), h.end());
  for (std::int64_t i = 0; i < k; ++i) out = apply_transition(spec, out);
  return out;
}

InnovationFunctional power_sum(const ProcessModel& model, PtVariant variant,
                               const InnovationFunctional& h, std::uint64_t n) {
  require_functional_oracle(model, variant);
  require_in_domain(h, variant);
  if (n == 0 || h.empty()) return {};
  const std::int64_t lo = variant == PtVariant::adapted ? h.first : 1;
  const std::int64_t hi = variant == PtVariant::adapted ? 0 : h.last();
  const auto width = static_cast<std::size_t>(hi - lo + 1);
  // prefix[k] = sum of h over indices lo, ..., lo + k - 1.
  std::vector<double> prefix(width + 1, 0.0);
  for (std::size_t k = 0; k < width; ++k) prefix[k + 1] = prefix[k] + h.at(lo + static_cast<std::int64_t>(k));
  const std::uint64_t span = static_cast<std::uint64_t>(width);
  const std::uint64_t terms = std::min(n, span);
  std::vector<double> out(width);
  for (std::size_t k = 0; k < width; ++k) {
    if (variant == PtVariant::adapted) {
      // d_r = sum_{i<n} h_{r-i}
      const std::size_t begin = k + 1 > terms ? k + 1 - static_cast<std::size_t>(terms) : 0;
      out[k] = prefix[k + 1] - prefix[begin];
    } else {
      // d_r = sum_{i<n} h_{r+i}
      const std::size_t end = std::min<std::size_t>(width, k + static_cast<std::size_t>(terms));
      out[k] = prefix[end] - prefix[k];
    }
  }
  return InnovationFunctional(lo, std::move(out)).trim();
}

InnovationFunctional variant_component(const InnovationFunctional& f, PtVariant variant) {
  return variant == PtVariant::adapted ? condition_on(f, 0) : innovation_part(f, 0);
}

InnovationFunctional martingale_part(const ProcessModel& model, PtVariant variant,
                                     const InnovationFunctional& f) {
  const InnovationFunctional pf = apply_PT(model, variant, f, 1);
  return f - shift(pf, variant == PtVariant::adapted ? -1 : 1);
}

double gaussian_abs_moment(double p) {
  return std::pow(2.0, p / 2.0) * std::tgamma((p + 1.0) / 2.0) / std::sqrt(std::numbers::pi);
}

namespace {

constexpr std::size_t kMaxEnumeratedTerms = 22;
constexpr std::size_t kMonteCarloNormSamples = std::size_t{1} << 18;

NormValue rademacher_exact(const std::vector<double>& weights, double p) {
  // Fix the first sign (|x| is even) and walk the remaining signs in Gray order.
  const std::size_t m = weights.size();
  const std::uint64_t patterns = std::uint64_t{1} << (m - 1);
  double x = 0.0;
  for (double w : weights) x += w;
  std::vector<int> sign(m, 1);
  double sum = std::pow(std::abs(x), p);
  for (std::uint64_t step = 1; step < patterns; ++step) {
    const auto bit = static_cast<std::size_t>(std::countr_zero(step)) + 1;
    x -= 2.0 * sign[bit] * weights[bit];
    sign[bit] = -sign[bit];
    sum += std::pow(std::abs(x), p);
  }
  return {std::pow(sum / static_cast<double>(patterns), 1.0 / p), 0.0, true};
}

}  // namespace

NormValue lp_norm(const ProcessModel& model, const InnovationFunctional& h, double p) {
  if (!(p >= 1.0)) throw InvalidArgument("L^p norm needs p >= 1");
  if (h.empty() || h.is_zero()) return {0.0, 0.0, true};
  if (model.innovation == InnovationLaw::normal && model.arch_b == 0.0)
    return {h.l2() * std::pow(gaussian_abs_moment(p), 1.0 / p), 0.0, true};
  if (model.innovation == InnovationLaw::rademacher) {
    std::vector<double> weights;
    for (double c : h.coef)
      if (c != 0.0) weights.push_back(c);
    if (weights.size() <= kMaxEnumeratedTerms) return rademacher_exact(weights, p);
  }
  Philox rng(tag("lp-norm-monte-carlo"), 0);
  double mean = 0.0;
  double m2 = 0.0;
  std::vector<double> draw;
  const auto width = static_cast<std::size_t>(h.last() - h.first + 1);
  for (std::size_t i = 0; i < kMonteCarloNormSamples; ++i) {
    const std::vector<double> zeta = draw_zeta(model, h.first, h.last(), rng);
    double x = 0.0;
    for (std::size_t k = 0; k < width; ++k) x += h.coef[k] * zeta[k];
    const double v = std::pow(std::abs(x), p);
    const double delta = v - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (v - mean);
  }
  const double n = static_cast<double>(kMonteCarloNormSamples);
  const double se_moment = std::sqrt(m2 / (n - 1.0) / n);
  const double value = std::pow(mean, 1.0 / p);
  // Delta method for m^{1/p}.
  const double se = value / (p * mean) * se_moment;
  return {value, se, false};
}

}  // namespace hwip
