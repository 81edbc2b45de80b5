#include "hwip/norms.hpp"

#include "hwip/errors.hpp"
#include "hwip/exponent.hpp"
#include "hwip/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace hwip {

namespace {

struct TailForms {
  double full = 0.0;
  double trimmed = 0.0;
};

TailForms tail_forms(std::vector<double> a, double p) {
  for (double& x : a) x = std::abs(x);
  std::sort(a.begin(), a.end());
  const std::size_t n = a.size();
  const auto min_rank = static_cast<std::size_t>(std::ceil(std::pow(static_cast<double>(n), 2.0 / 3.0)));
  TailForms out;
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0 && a[i] == a[i - 1]) continue;
    const std::size_t count = n - i;
    const double value = std::pow(a[i], p) * static_cast<double>(count) / static_cast<double>(n);
    out.full = std::max(out.full, value);
    if (count >= min_rank) out.trimmed = std::max(out.trimmed, value);
  }
  return out;
}

void check_samples(std::span<const double> samples, double p) {
  if (samples.empty()) throw InvalidArgument("weak-L^p estimate needs a nonempty sample");
  if (!(p > 1.0) || !std::isfinite(p)) throw InvalidArgument("weak-L^p estimate needs finite p > 1");
  for (double x : samples)
    if (!std::isfinite(x)) throw InvalidArgument("weak-L^p samples must be finite");
}

}  // namespace

WeakLpEstimate empirical_weak_lp(std::span<const double> samples, double p) {
  check_samples(samples, p);
  const TailForms t = tail_forms(std::vector<double>(samples.begin(), samples.end()), p);
  WeakLpEstimate out;
  out.p = p;
  out.sample_count = samples.size();
  out.tail_form = t.full;
  out.tail_form_trimmed = t.trimmed;
  out.norm_lower = std::pow(t.full, 1.0 / p);
  out.norm_upper = p / (p - 1.0) * out.norm_lower;
  return out;
}

Interval bootstrap_weak_lp(std::span<const double> samples, double p, std::size_t resamples,
                           std::uint64_t seed, double level) {
  check_samples(samples, p);
  if (resamples < 2) throw InvalidArgument("bootstrap needs at least 2 resamples");
  if (!(level > 0.0 && level < 1.0)) throw InvalidArgument("bootstrap level must lie in (0, 1)");
  const std::size_t n = samples.size();
  std::vector<double> stats(resamples);
  std::vector<double> draw(n);
  for (std::size_t b = 0; b < resamples; ++b) {
    Philox rng(seed, stream_id({tag("weak-lp-bootstrap"), b}));
    for (double& x : draw) x = samples[static_cast<std::size_t>(rng() % n)];
    stats[b] = tail_forms(draw, p).full;
  }
  std::sort(stats.begin(), stats.end());
  const double tail = (1.0 - level) / 2.0;
  auto pick = [&](double q) {
    const auto idx = static_cast<std::size_t>(std::floor(q * static_cast<double>(resamples - 1)));
    return stats[std::min(idx, resamples - 1)];
  };
  return {pick(tail), pick(1.0 - tail)};
}

MaxBoundReport weak_lp_max_bound_check(const std::vector<std::vector<double>>& samples, double p) {
  if (samples.empty()) throw InvalidArgument("max-bound check needs N >= 1 functions");
  const std::size_t reps = samples.front().size();
  if (reps == 0) throw InvalidArgument("max-bound check needs replicates");
  for (const auto& row : samples)
    if (row.size() != reps) throw InvalidArgument("every function needs the same replicate count");
  MaxBoundReport out;
  out.functions = samples.size();
  out.replicates = reps;
  std::vector<double> maxima(reps, 0.0);
  for (const auto& row : samples) {
    const WeakLpEstimate e = empirical_weak_lp(row, p);
    out.worst_single_root = std::max(out.worst_single_root, e.norm_lower);
    for (std::size_t r = 0; r < reps; ++r) maxima[r] = std::max(maxima[r], std::abs(row[r]));
  }
  out.max_tail_root = empirical_weak_lp(maxima, p).norm_lower;
  out.bound = p / (p - 1.0) * std::pow(static_cast<double>(out.functions), 1.0 / p) * out.worst_single_root;
  out.ratio = out.bound > 0.0 ? out.max_tail_root / out.bound : 0.0;
  out.pass = out.max_tail_root <= out.bound;
  return out;
}

namespace {

constexpr int kMaxChainLevel = 22;

std::uint64_t dyadic(int j) {
  return j >= 64 ? std::numeric_limits<std::uint64_t>::max() : std::uint64_t{1} << j;
}

void finish(MwNormReport& report) {
  CompensatedSum acc;
  report.partial_sums.clear();
  for (double t : report.terms) {
    acc.add(t);
    report.partial_sums.push_back(acc.value());
  }
  const std::size_t m = report.terms.size();
  const double last = report.terms.back();
  if (last == 0.0) {
    report.tail_estimate = 0.0;
    report.converged = true;
    return;
  }
  if (m < 2 || report.terms[m - 2] == 0.0) {
    report.tail_estimate = std::numeric_limits<double>::infinity();
    report.converged = false;
    return;
  }
  const double ratio = last / report.terms[m - 2];
  report.converged = ratio < 0.95;
  report.tail_estimate = ratio < 1.0 ? last * ratio / (1.0 - ratio) : std::numeric_limits<double>::infinity();
}

void check_mw_args(double p, int J) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw InvalidArgument("MW norm needs finite p >= 1");
  if (J < 0) throw InvalidArgument("MW truncation level J must be >= 0");
}

MwNormReport chain_mw_norm(const ProcessModel& model, PtVariant variant, double p, int J) {
  const RenewalChainSpec& spec = model.chain_spec();
  if (variant != PtVariant::adapted)
    throw CapabilityError("renewal_chain has no nonadapted P_T oracle");
  if (J > kMaxChainLevel)
    throw CapacityError("chain MW norm evaluates V_{2^J} exactly; J = " + std::to_string(J) +
                        " exceeds " + std::to_string(kMaxChainLevel) + "; reduce J");
  MwNormReport report;
  report.variant = variant;
  report.p = p;
  report.J = J;
  const ConditionalSumOracle oracle(spec, (std::int64_t{1} << J) - 1);
  const std::vector<double> g = spec.observable();
  for (int j = 0; j <= J; ++j) {
    std::vector<double> v = oracle.table((std::int64_t{1} << j) - 1);
    for (std::size_t m = 0; m < v.size(); ++m) v[m] += g[m];
    report.terms.push_back(std::pow(2.0, -0.5 * j) * lp_norm_stationary(spec, v, p));
    report.std_errors.push_back(0.0);
  }
  finish(report);
  return report;
}

}  // namespace

MwNormReport mw_norm(const ProcessModel& model, PtVariant variant, const InnovationFunctional& h, double p,
                     int J) {
  check_mw_args(p, J);
  MwNormReport report;
  report.variant = variant;
  report.p = p;
  report.J = J;
  InnovationFunctional previous;
  NormValue cached;
  bool have_cache = false;
  for (int j = 0; j <= J; ++j) {
    const InnovationFunctional v = power_sum(model, variant, h, dyadic(j));
    if (!have_cache || !(v == previous)) {
      cached = lp_norm(model, v, p);
      previous = v;
      have_cache = true;
    }
    const double scale = std::pow(2.0, -0.5 * j);
    report.terms.push_back(scale * cached.value);
    report.std_errors.push_back(scale * cached.std_error);
    report.exact = report.exact && cached.exact;
  }
  finish(report);
  return report;
}

MwNormReport mw_norm(const ProcessModel& model, PtVariant variant, double p, int J) {
  check_mw_args(p, J);
  if (model.kind == ModelKind::renewal_chain) return chain_mw_norm(model, variant, p, J);
  const InnovationFunctional h = variant_component(model.increment_functional(), variant);
  return mw_norm(model, variant, h, p, J);
}

WeightSequence renewal_weights(const RenewalChainSpec& spec) {
  std::vector<std::int64_t> u = spec.u;
  return [u](std::int64_t n) {
    const auto k = static_cast<double>(std::upper_bound(u.begin(), u.end(), n) - u.begin());
    return k == 0.0 ? 1.0 : 1.0 / (k * k);
  };
}

MwSeriesReport mw_series_diagnostic(const ProcessModel& model, double p, const WeightSequence& a,
                                    std::int64_t N) {
  if (N < 1) throw InvalidArgument("series diagnostic needs N >= 1");
  if (!(p >= 1.0) || !std::isfinite(p)) throw InvalidArgument("series diagnostic needs finite p >= 1");
  MwSeriesReport report;
  report.p = p;
  report.weighted = static_cast<bool>(a);

  // norm(n) = ||E[S_n(f)|M]||_p with S_n = f + ... + f o T^{n-1}.
  std::function<NormValue(std::int64_t)> norm;
  std::optional<ConditionalSumOracle> oracle;
  std::vector<double> g;
  InnovationFunctional h;
  InnovationFunctional previous;
  NormValue cached;
  bool have_cache = false;
  if (model.kind == ModelKind::renewal_chain) {
    const RenewalChainSpec& spec = model.chain_spec();
    oracle.emplace(spec, N - 1);
    g = spec.observable();
    norm = [&](std::int64_t n) {
      std::vector<double> v = oracle->table(n - 1);
      for (std::size_t m = 0; m < v.size(); ++m) v[m] += g[m];
      return NormValue{lp_norm_stationary(spec, v, p), 0.0, true};
    };
  } else {
    if (!model.capabilities().pt_adapted) throw CapabilityError("model has no E[S_n|M] oracle");
    h = condition_on(model.increment_functional(), 0);
    norm = [&](std::int64_t n) {
      const InnovationFunctional v = power_sum(model, PtVariant::adapted, h, static_cast<std::uint64_t>(n));
      if (!have_cache || !(v == previous)) {
        cached = lp_norm(model, v, p);
        previous = v;
        have_cache = true;
      }
      return cached;
    };
  }

  CompensatedSum total;
  CompensatedSum block;
  double variance = 0.0;
  std::int64_t next_checkpoint = 1;
  for (std::int64_t n = 1; n <= N; ++n) {
    const NormValue value = norm(n);
    const double weight = a ? a(n) : 1.0;
    const double scale = weight / std::pow(static_cast<double>(n), 1.5);
    const double term = scale * value.value;
    total.add(term);
    block.add(term);
    variance += (scale * value.std_error) * (scale * value.std_error);
    if (n == next_checkpoint || n == N) {
      report.rows.push_back({n, term, total.value(), std::sqrt(variance)});
      if (n == next_checkpoint) next_checkpoint *= 2;
    }
    // Block k covers 2^k <= n < 2^{k+1}.
    if ((n & (n + 1)) == 0) {
      report.block_sums.push_back(block.value());
      block = CompensatedSum{};
    }
  }
  for (std::size_t k = 1; k < report.block_sums.size(); ++k) {
    const double prev = report.block_sums[k - 1];
    report.block_ratios.push_back(prev > 0.0 ? report.block_sums[k] / prev
                                             : (report.block_sums[k] > 0.0 ? std::numeric_limits<double>::infinity() : 0.0));
  }
  // Ratio test over the final three complete dyadic blocks.
  const std::size_t tail = std::min<std::size_t>(3, report.block_ratios.size());
  bool ok = tail > 0;
  for (std::size_t k = report.block_ratios.size() - tail; k < report.block_ratios.size(); ++k)
    ok = ok && report.block_ratios[k] <= 0.9;
  if (!report.block_sums.empty() && report.block_sums.back() == 0.0) ok = true;
  report.converges = ok;
  report.verdict = ok ? "converges" : "no numerical evidence of convergence";
  return report;
}

}  // namespace hwip
