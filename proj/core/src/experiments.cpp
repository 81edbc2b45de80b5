#include "hwip/experiments.hpp"

#include "hwip/errors.hpp"
#include "hwip/exponent.hpp"
#include "hwip/holder.hpp"
#include "hwip/norms.hpp"
#include "hwip/parallel.hpp"
#include "hwip/rng.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

namespace hwip {

InequalityConstants InequalityConstants::make(double p, double K_of_PT) {
  HolderExponent::from_p(p);
  if (!(K_of_PT >= 1.0)) throw InvalidArgument("K(P_T) must be >= 1");
  InequalityConstants c;
  c.p = p;
  c.K_of_PT = K_of_PT;
  c.K_p = std::pow(2.0, 1.0 / p - 0.5) + std::sqrt(2.0) * (2.0 + K_of_PT);
  return c;
}

void CertificationReport::set(std::string key, double value) {
  for (auto& [k, v] : summary)
    if (k == key) {
      v = value;
      return;
    }
  summary.emplace_back(std::move(key), value);
}

double CertificationReport::get(std::string_view key) const {
  for (const auto& [k, v] : summary)
    if (k == key) return v;
  throw InvalidArgument("report '" + experiment + "' has no field '" + std::string(key) + "'");
}

bool CertificationReport::has(std::string_view key) const {
  for (const auto& kv : summary)
    if (kv.first == key) return true;
  return false;
}

std::vector<ProcessModel> default_model_suite(double p) {
  std::vector<ProcessModel> models;
  models.push_back(ProcessModel::iid(InnovationLaw::normal, 1.0, p));
  models.push_back(ProcessModel::martingale_difference(InnovationLaw::normal, 1.0, 0.5, 1.0, p));
  models.push_back(ProcessModel::martingale_plus_coboundary(1.0, {0.6, -0.3}, InnovationLaw::rademacher, p));
  models.push_back(ProcessModel::linear({1.0, 0.5, 0.25}, InnovationLaw::normal, p));
  models.push_back(ProcessModel::renewal(p, 4));
  return models;
}

double long_run_variance(const ProcessModel& model) {
  if (model.kind == ModelKind::renewal_chain) return model.chain_spec().long_run_variance();
  const InnovationFunctional f = model.increment_functional();
  double s = 0.0;
  for (double c : f.coef) s += c;
  return s * s;
}

namespace {

void check_grid(const std::vector<std::int64_t>& n_grid) {
  if (n_grid.empty()) throw InvalidArgument("n-grid must be nonempty");
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    if (n_grid[i] < 1) throw InvalidArgument("n-grid entries must be >= 1");
    if (i > 0 && n_grid[i] <= n_grid[i - 1]) throw InvalidArgument("n-grid must be strictly increasing");
  }
}

void check_replicates(std::size_t replicates) {
  if (replicates == 0) throw InvalidArgument("replicates must be >= 1");
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

}  // namespace

CertificationReport certify_dyadic_lemma(const std::vector<ProcessModel>& models, std::size_t paths_per_model,
                                         std::size_t n_max, double p, const RunOptions& options) {
  const HolderExponent ex = HolderExponent::from_p(p);
  if (models.empty()) throw InvalidArgument("dyadic lemma certificate needs at least one model");
  if (n_max < 2 || n_max > 4096) throw InvalidArgument("n_max must lie in [2, 4096]");
  check_replicates(paths_per_model);
  for (const auto& m : models) m.validate();

  struct PathResult {
    std::size_t violations = 0;
    double min_slack = std::numeric_limits<double>::infinity();
    double min_relative = std::numeric_limits<double>::infinity();
  };
  const std::size_t jobs = models.size() * paths_per_model;
  std::vector<PathResult> results(jobs);
  const double discount = std::pow(2.0, -ex.alpha);
  const std::uint64_t label = tag("dyadic-lemma");

  parallel_for(jobs, options.threads, [&](std::size_t job) {
    const std::size_t model_index = job / paths_per_model;
    const std::size_t r = job % paths_per_model;
    Philox rng(options.seed, stream_id({label, model_index, r}));
    std::vector<double> h;
    sample_model(models[model_index], n_max + 1, rng, h);
    const std::span<const double> head(h.data(), n_max);
    const std::vector<double> lhs = holder_max_prefixes(PolygonalPath::from_increments(head), ex.alpha);
    const std::vector<double> folded = pairwise_sum(head);
    const std::vector<double> inner = holder_max_prefixes(PolygonalPath::from_increments(folded), ex.alpha);
    PathResult res;
    double top = std::max(std::abs(h[0]), std::abs(h[1]));
    for (std::size_t n = 2; n <= n_max; ++n) {
      top = std::max(top, std::abs(h[n]));
      const double rhs = 6.0 * top + discount * inner[n / 2];
      const double slack = rhs - lhs[n];
      if (lhs[n] > rhs * (1.0 + 1e-9)) ++res.violations;
      res.min_slack = std::min(res.min_slack, slack);
      res.min_relative = std::min(res.min_relative, rhs > 0.0 ? slack / rhs : 0.0);
    }
    results[job] = res;
  });

  CertificationReport report;
  report.experiment = "dyadic_lemma";
  report.seed = options.seed;
  report.replicates = paths_per_model;
  for (std::size_t n = 2; n <= n_max; n *= 2) report.n_grid.push_back(static_cast<std::int64_t>(n));
  if (report.n_grid.back() != static_cast<std::int64_t>(n_max)) report.n_grid.push_back(static_cast<std::int64_t>(n_max));
  report.per_n.columns = {"model", "paths", "violations", "min_slack", "min_relative_slack"};
  report.per_replicate.columns = {"model", "replicate", "violations", "min_slack", "min_relative_slack"};
  std::size_t violations = 0;
  double worst = std::numeric_limits<double>::infinity();
  double worst_relative = std::numeric_limits<double>::infinity();
  for (std::size_t mi = 0; mi < models.size(); ++mi) {
    std::size_t v = 0;
    double ms = std::numeric_limits<double>::infinity();
    double mr = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < paths_per_model; ++r) {
      const PathResult& res = results[mi * paths_per_model + r];
      v += res.violations;
      ms = std::min(ms, res.min_slack);
      mr = std::min(mr, res.min_relative);
      report.per_replicate.rows.push_back({static_cast<double>(mi), static_cast<double>(r),
                                           static_cast<double>(res.violations), res.min_slack, res.min_relative});
    }
    report.per_n.rows.push_back({static_cast<double>(mi), static_cast<double>(paths_per_model),
                                 static_cast<double>(v), ms, mr});
    report.notes.push_back("model " + std::to_string(mi) + " = " + std::string(to_string(models[mi].kind)));
    violations += v;
    worst = std::min(worst, ms);
    worst_relative = std::min(worst_relative, mr);
  }
  report.set("p", p);
  report.set("alpha", ex.alpha);
  report.set("n_min", 2);
  report.set("n_max", static_cast<double>(n_max));
  report.set("models", static_cast<double>(models.size()));
  report.set("paths", static_cast<double>(jobs));
  report.set("checks", static_cast<double>(jobs * (n_max - 1)));
  report.set("violations", static_cast<double>(violations));
  report.set("worst_slack", worst);
  report.set("worst_relative_slack", worst_relative);
  report.pass = violations == 0;
  report.verdict = report.pass ? "pass: inequality holds on every path and every n"
                               : "fail: " + std::to_string(violations) + " violations";
  return report;
}

namespace {

// M(n) at every grid n for each replicate, rows indexed [replicate][grid].
std::vector<std::vector<double>> grid_statistics(const ProcessModel& model, const InnovationFunctional* h,
                                                 double alpha, const std::vector<std::int64_t>& n_grid,
                                                 std::size_t replicates, const RunOptions& options) {
  const auto length = static_cast<std::size_t>(n_grid.back());
  std::vector<std::vector<double>> out(replicates);
  const std::uint64_t label = tag("paths");
  parallel_for(replicates, options.threads, [&](std::size_t r) {
    Philox rng(options.seed, stream_id({label, r}));
    std::vector<double> x;
    if (h != nullptr)
      sample_functional(model, *h, length, rng, x);
    else
      sample_model(model, length, rng, x);
    const std::vector<double> m = holder_max_prefixes(PolygonalPath::from_increments(x), alpha);
    std::vector<double> row(n_grid.size());
    for (std::size_t g = 0; g < n_grid.size(); ++g) row[g] = m[static_cast<std::size_t>(n_grid[g])];
    out[r] = std::move(row);
  });
  return out;
}

std::vector<double> column(const std::vector<std::vector<double>>& rows, std::size_t g) {
  std::vector<double> c(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) c[r] = rows[r][g];
  return c;
}

void fill_per_replicate(CertificationReport& report, const std::vector<std::vector<double>>& rows) {
  report.per_replicate.columns = {"replicate", "n", "M"};
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t g = 0; g < rows[r].size(); ++g)
      report.per_replicate.rows.push_back(
          {static_cast<double>(r), static_cast<double>(report.n_grid[g]), rows[r][g]});
}

}  // namespace

CertificationReport certify_martingale_inequality(const ProcessModel& model, double p,
                                                  const std::vector<std::int64_t>& n_grid, std::size_t replicates,
                                                  const RunOptions& options) {
  const HolderExponent ex = HolderExponent::from_p(p);
  check_grid(n_grid);
  check_replicates(replicates);
  model.validate();
  if (!model.is_martingale_difference())
    throw InvalidArgument("martingale inequality needs a martingale-difference model, got " +
                          std::string(to_string(model.kind)));
  const InnovationFunctional f = model.increment_functional();
  const NormValue m_norm = lp_norm(model, f, p);
  const auto rows = grid_statistics(model, nullptr, ex.alpha, n_grid, replicates, options);

  CertificationReport report;
  report.experiment = "martingale_inequality";
  report.seed = options.seed;
  report.replicates = replicates;
  report.n_grid = n_grid;
  report.per_n.columns = {"n", "weak_lp_M", "weak_lp_M_upper", "ratio"};
  std::vector<double> xs;
  std::vector<double> ratios;
  double max_ratio = 0.0;
  for (std::size_t g = 0; g < n_grid.size(); ++g) {
    const WeakLpEstimate e = empirical_weak_lp(column(rows, g), p);
    const double n = static_cast<double>(n_grid[g]);
    const double ratio = m_norm.value > 0.0 ? e.norm_lower / (std::pow(n, 1.0 / p) * m_norm.value) : 0.0;
    report.per_n.rows.push_back({n, e.norm_lower, e.norm_upper, ratio});
    xs.push_back(n);
    ratios.push_back(ratio);
    max_ratio = std::max(max_ratio, ratio);
  }
  fill_per_replicate(report, rows);
  report.set("p", p);
  report.set("m_norm", m_norm.value);
  report.set("m_norm_stderr", m_norm.std_error);
  report.set("max_ratio", max_ratio);
  const bool degenerate = max_ratio == 0.0;
  const double slope = degenerate || n_grid.size() < 2 ? 0.0 : loglog_slope(xs, ratios);
  report.set("slope", slope);
  report.pass = slope <= 0.02;
  report.verdict = degenerate ? "pass: zero process" : (report.pass ? "pass: ratio bounded (slope <= 0.02)"
                                                                    : "fail: ratio grows (slope " + fmt(slope) + ")");
  report.notes.push_back("C_p has no published numeric value; only boundedness over n is tested");
  return report;
}

CertificationReport certify_mw_inequality(const ProcessModel& model, PtVariant variant, double p,
                                          const std::vector<std::int64_t>& n_grid, std::size_t replicates,
                                          const RunOptions& options) {
  const HolderExponent ex = HolderExponent::from_p(p);
  check_grid(n_grid);
  check_replicates(replicates);
  model.validate();
  const InequalityConstants constants = InequalityConstants::make(p);
  const int r_max = std::bit_width(static_cast<std::uint64_t>(n_grid.back()));

  double martingale_norm = 0.0;
  MwNormReport partial;
  MwNormReport full;
  std::vector<std::vector<double>> rows;
  CertificationReport report;
  if (model.kind == ModelKind::renewal_chain) {
    if (variant != PtVariant::adapted) throw CapabilityError("renewal_chain has no nonadapted P_T oracle");
    const RenewalChainSpec& spec = model.chain_spec();
    martingale_norm = martingale_part_norm(spec, spec.observable(), p);
    partial = mw_norm(model, variant, p, std::max(r_max - 1, 0));
    full = mw_norm(model, variant, p, 22);
    rows = grid_statistics(model, nullptr, ex.alpha, n_grid, replicates, options);
  } else {
    const InnovationFunctional f = model.increment_functional();
    const InnovationFunctional h = variant_component(f, variant);
    if (!(h == f))
      report.notes.push_back("increment is not in the variant's domain; certifying its component h");
    martingale_norm = lp_norm(model, martingale_part(model, variant, h), p).value;
    partial = mw_norm(model, variant, h, p, std::max(r_max - 1, 0));
    full = mw_norm(model, variant, h, p, 80);
    rows = grid_statistics(model, h == f ? nullptr : &h, ex.alpha, n_grid, replicates, options);
  }
  const double mw_total = full.total() + (std::isfinite(full.tail_estimate) ? full.tail_estimate : 0.0);

  report.experiment = "mw_inequality";
  report.seed = options.seed;
  report.replicates = replicates;
  report.n_grid = n_grid;
  report.per_n.columns = {"n", "r", "weak_lp_M", "bracket", "ratio", "corollary_ratio"};
  std::vector<double> xs;
  std::vector<double> ratios;
  double max_ratio = 0.0;
  double max_corollary = 0.0;
  for (std::size_t g = 0; g < n_grid.size(); ++g) {
    const double n = static_cast<double>(n_grid[g]);
    const int r = std::bit_width(static_cast<std::uint64_t>(n_grid[g]));
    const WeakLpEstimate e = empirical_weak_lp(column(rows, g), p);
    const double bracket = martingale_norm + constants.K_p * partial.partial_sums[static_cast<std::size_t>(r - 1)];
    const double ratio = bracket > 0.0 ? e.norm_lower / (std::pow(n, 1.0 / p) * bracket) : 0.0;
    // ||W(n)/sqrt(n)||_H = n^{-1/p} M(n).
    const double corollary = mw_total > 0.0 ? e.norm_lower * std::pow(n, -1.0 / p) / mw_total : 0.0;
    report.per_n.rows.push_back({n, static_cast<double>(r), e.norm_lower, bracket, ratio, corollary});
    xs.push_back(n);
    ratios.push_back(ratio);
    max_ratio = std::max(max_ratio, ratio);
    max_corollary = std::max(max_corollary, corollary);
  }
  fill_per_replicate(report, rows);
  report.set("p", p);
  report.set("variant_adapted", variant == PtVariant::adapted ? 1.0 : 0.0);
  report.set("K_of_PT", constants.K_of_PT);
  report.set("K_p", constants.K_p);
  report.set("martingale_part_norm", martingale_norm);
  report.set("mw_norm", mw_total);
  report.set("max_ratio", max_ratio);
  report.set("max_corollary_ratio", max_corollary);
  const bool degenerate = max_ratio == 0.0;
  const double slope = degenerate || n_grid.size() < 2 ? 0.0 : loglog_slope(xs, ratios);
  report.set("slope", slope);
  report.pass = slope <= 0.02;
  report.verdict = degenerate ? "pass: zero process" : (report.pass ? "pass: ratio bounded (slope <= 0.02)"
                                                                    : "fail: ratio grows (slope " + fmt(slope) + ")");
  report.notes.push_back("K_p uses the positive form 2^{1/p-1/2} + sqrt(2)(2 + K(P_T)); the proof's closing "
                         "identity carries the opposite sign");
  return report;
}

VarianceEstimate estimate_variance_constant(const ProcessModel& model, std::size_t n, std::size_t replicates,
                                            const RunOptions& options) {
  if (n == 0) throw InvalidArgument("variance estimate needs n >= 1");
  if (replicates < 2) throw InvalidArgument("variance estimate needs >= 2 replicates");
  model.validate();
  std::vector<double> values(replicates);
  const std::uint64_t label = tag("variance");
  parallel_for(replicates, options.threads, [&](std::size_t r) {
    Philox rng(options.seed, stream_id({label, r}));
    std::vector<double> x;
    sample_model(model, n, rng, x);
    const double s = compensated_sum(x);
    values[r] = s * s / static_cast<double>(n);
  });
  const MeanEstimate m = mean_estimate(values);
  return {m.mean, m.std_error};
}

ConvergenceReport fdd_convergence_test(const ProcessModel& model, std::size_t n, std::size_t replicates,
                                       const std::vector<double>& time_grid, const RunOptions& options) {
  if (n == 0) throw InvalidArgument("fdd test needs n >= 1");
  check_replicates(replicates);
  if (time_grid.empty()) throw InvalidArgument("time grid must be nonempty");
  for (double t : time_grid)
    if (!(t > 0.0 && t <= 1.0)) throw InvalidArgument("time grid must lie in (0, 1]");
  model.validate();

  ConvergenceReport out;
  out.time_grid = time_grid;
  out.eta_exact = long_run_variance(model);
  if (model.kind == ModelKind::renewal_chain) {
    out.eta_hat = out.eta_exact;
  } else {
    const VarianceEstimate v = estimate_variance_constant(model, n, replicates, options);
    out.eta_hat = v.eta_hat;
    out.eta_std_error = v.std_error;
  }

  std::vector<std::vector<double>> values(time_grid.size(), std::vector<double>(replicates));
  const std::uint64_t label = tag("fdd");
  const double root = std::sqrt(static_cast<double>(n));
  parallel_for(replicates, options.threads, [&](std::size_t r) {
    Philox rng(options.seed, stream_id({label, r}));
    std::vector<double> x;
    sample_model(model, n, rng, x);
    const PolygonalPath path = PolygonalPath::from_increments(x);
    for (std::size_t g = 0; g < time_grid.size(); ++g) values[g][r] = path.evaluate(time_grid[g]) / root;
  });
  for (std::size_t g = 0; g < time_grid.size(); ++g) {
    const double sd = std::sqrt(out.eta_hat * time_grid[g]);
    const KsResult ks = ks_one_sample(values[g], [sd](double x) { return sd > 0.0 ? normal_cdf(x / sd) : (x >= 0.0 ? 1.0 : 0.0); });
    out.fdd_ks.push_back(ks.distance);
    out.fdd_p_values.push_back(ks.p_value);
  }
  return out;
}

KsResult holder_distribution_ks(const ProcessModel& model, double p, std::size_t n_a, std::size_t n_b,
                                std::size_t replicates, const RunOptions& options) {
  const HolderExponent ex = HolderExponent::from_p(p);
  if (n_a == 0 || n_b == 0) throw InvalidArgument("Hoelder KS needs n >= 1");
  check_replicates(replicates);
  model.validate();
  const std::uint64_t label = tag("holder-ks");
  auto sample_norms = [&](std::size_t n) {
    std::vector<double> v(replicates);
    parallel_for(replicates, options.threads, [&](std::size_t r) {
      Philox rng(options.seed, stream_id({label, n, r}));
      std::vector<double> x;
      sample_model(model, n, rng, x);
      const HolderStatistic m = holder_max_exact(PolygonalPath::from_increments(x), ex.alpha);
      v[r] = std::pow(static_cast<double>(n), -1.0 / p) * m.value;
    });
    return v;
  };
  const std::vector<double> a = sample_norms(n_a);
  const std::vector<double> b = sample_norms(n_b);
  return ks_two_sample(a, b);
}

CertificationReport convergence_report(const ConvergenceReport& result, std::size_t n, std::size_t replicates,
                                       const RunOptions& options, double ks_limit, double holder_ks_limit) {
  CertificationReport report;
  report.experiment = "fdd_convergence";
  report.seed = options.seed;
  report.replicates = replicates;
  report.n_grid = {static_cast<std::int64_t>(n)};
  report.per_n.columns = {"t", "ks_distance", "ks_p_value"};
  double worst = 0.0;
  for (std::size_t g = 0; g < result.time_grid.size(); ++g) {
    report.per_n.rows.push_back({result.time_grid[g], result.fdd_ks[g], result.fdd_p_values[g]});
    worst = std::max(worst, result.fdd_ks[g]);
  }
  report.set("eta_hat", result.eta_hat);
  report.set("eta_stderr", result.eta_std_error);
  report.set("eta_exact", result.eta_exact);
  report.set("max_fdd_ks", worst);
  report.set("ks_limit", ks_limit);
  bool pass = worst <= ks_limit;
  if (result.holder_n.size() == 2) {
    report.set("holder_n_a", static_cast<double>(result.holder_n[0]));
    report.set("holder_n_b", static_cast<double>(result.holder_n[1]));
    report.set("holder_ks", result.holder_ks);
    report.set("holder_ks_p_value", result.holder_p_value);
    report.set("holder_ks_limit", holder_ks_limit);
    pass = pass && result.holder_ks <= holder_ks_limit;
  }
  report.pass = pass;
  report.verdict = pass ? "pass: desk-scale consistent with the Gaussian limit" : "fail: KS distance above limit";
  return report;
}

CertificationReport holder_tightness_diagnostic(const ProcessModel& model, double p,
                                                const std::vector<std::int64_t>& n_grid, std::size_t replicates,
                                                const std::vector<double>& delta_grid, double epsilon,
                                                const RunOptions& options) {
  const HolderExponent ex = HolderExponent::from_p(p);
  check_grid(n_grid);
  check_replicates(replicates);
  if (delta_grid.empty()) throw InvalidArgument("delta grid must be nonempty");
  for (std::size_t i = 0; i < delta_grid.size(); ++i) {
    if (!(delta_grid[i] > 0.0 && delta_grid[i] <= 1.0)) throw InvalidArgument("deltas must lie in (0, 1]");
    if (i > 0 && !(delta_grid[i] < delta_grid[i - 1])) throw InvalidArgument("deltas must be decreasing");
  }
  if (!(epsilon > 0.0)) throw InvalidArgument("epsilon must be > 0");
  model.validate();

  const std::size_t nd = delta_grid.size();
  // exceed[g][r * nd + k]
  std::vector<std::vector<unsigned char>> exceed(n_grid.size(), std::vector<unsigned char>(replicates * nd));
  const std::uint64_t label = tag("tightness");
  for (std::size_t g = 0; g < n_grid.size(); ++g) {
    const auto n = static_cast<std::size_t>(n_grid[g]);
    const double nn = static_cast<double>(n);
    const auto top_lag = std::min<std::size_t>(n, static_cast<std::size_t>(std::floor(nn * delta_grid.front())));
    parallel_for(replicates, options.threads, [&](std::size_t r) {
      Philox rng(options.seed, stream_id({label, g, r}));
      std::vector<double> x;
      sample_model(model, n, rng, x);
      const PolygonalPath path = PolygonalPath::from_increments(x);
      std::vector<double> running;
      if (top_lag >= 1) {
        running = holder_lag_maxima(path, ex.alpha, top_lag);
        for (std::size_t d = 1; d < running.size(); ++d) running[d] = std::max(running[d], running[d - 1]);
      }
      double step = 0.0;
      for (double v : x) step = std::max(step, std::abs(v));
      for (std::size_t k = 0; k < nd; ++k) {
        const auto lag = std::min<std::size_t>(n, static_cast<std::size_t>(std::floor(nn * delta_grid[k])));
        // modulus_restricted of W(n)/sqrt(n).
        const double modulus = lag == 0 ? step * nn * std::pow(delta_grid[k], 1.0 - ex.alpha)
                                        : std::pow(nn, ex.alpha) * running[lag - 1];
        exceed[g][r * nd + k] = modulus / std::sqrt(nn) > epsilon ? 1 : 0;
      }
    });
  }

  CertificationReport report;
  report.experiment = "tightness_diagnostic";
  report.seed = options.seed;
  report.replicates = replicates;
  report.n_grid = n_grid;
  report.per_n.columns = {"n", "delta", "probability", "ci_lower", "ci_upper"};
  report.per_replicate.columns = {"replicate", "n", "delta", "exceeds"};
  std::vector<double> sup_p(nd, 0.0);
  std::vector<double> sup_lower(nd, 0.0);
  std::vector<double> sup_upper(nd, 0.0);
  bool monotone = true;
  for (std::size_t g = 0; g < n_grid.size(); ++g) {
    double previous = 1.0;
    for (std::size_t k = 0; k < nd; ++k) {
      std::size_t hits = 0;
      for (std::size_t r = 0; r < replicates; ++r) hits += exceed[g][r * nd + k];
      const double phat = static_cast<double>(hits) / static_cast<double>(replicates);
      const Interval ci = wilson_interval(hits, replicates);
      report.per_n.rows.push_back({static_cast<double>(n_grid[g]), delta_grid[k], phat, ci.lower, ci.upper});
      if (phat > previous) monotone = false;
      previous = phat;
      if (phat > sup_p[k] || g == 0) {
        sup_p[k] = phat;
        sup_lower[k] = ci.lower;
        sup_upper[k] = ci.upper;
      }
    }
    for (std::size_t r = 0; r < replicates; ++r)
      for (std::size_t k = 0; k < nd; ++k)
        report.per_replicate.rows.push_back({static_cast<double>(r), static_cast<double>(n_grid[g]), delta_grid[k],
                                             static_cast<double>(exceed[g][r * nd + k])});
  }
  bool decreasing = true;
  for (std::size_t k = 1; k < nd; ++k)
    if (sup_lower[k] > sup_upper[k - 1]) decreasing = false;
  const bool all_zero = std::all_of(sup_p.begin(), sup_p.end(), [](double v) { return v == 0.0; });
  const bool shrinks = all_zero || sup_p.back() < sup_p.front();
  double floor_lower = 1.0;
  for (double v : sup_lower) floor_lower = std::min(floor_lower, v);

  report.set("p", p);
  report.set("alpha", ex.alpha);
  report.set("epsilon", epsilon);
  report.set("monotone_in_delta", monotone ? 1.0 : 0.0);
  report.set("sup_probability_largest_delta", sup_p.front());
  report.set("sup_probability_smallest_delta", sup_p.back());
  report.set("min_sup_ci_lower", floor_lower);
  if (floor_lower >= 0.1) {
    report.verdict = "non-tight evidence";
  } else if (decreasing && shrinks) {
    report.verdict = "tightness-consistent";
  } else {
    report.verdict = "inconclusive";
  }
  report.pass = monotone;
  report.notes.push_back("exceedance probabilities are nondecreasing in delta on shared paths (nested events)");
  return report;
}

namespace {

// P(T_n <= limit) for T_n a sum of n iid copies of tau, by exact convolution.
double renewal_sum_cdf(const RenewalChainSpec& spec, std::int64_t n, std::int64_t limit) {
  std::vector<double> dist(static_cast<std::size_t>(limit) + 1, 0.0);
  std::vector<double> next(dist.size());
  dist[0] = 1.0;
  std::int64_t lo = 0;
  std::int64_t hi = 0;  // support of dist
  for (std::int64_t step = 0; step < n; ++step) {
    std::fill(next.begin(), next.end(), 0.0);
    const std::int64_t new_lo = lo + spec.u.front();
    if (new_lo > limit) return 0.0;
    std::int64_t new_hi = new_lo;
    for (std::int64_t s = lo; s <= hi; ++s) {
      const double mass = dist[static_cast<std::size_t>(s)];
      if (mass == 0.0) continue;
      for (std::size_t j = 0; j < spec.u.size(); ++j) {
        const std::int64_t t = s + spec.u[j];
        if (t > limit) break;
        next[static_cast<std::size_t>(t)] += mass * spec.return_probs[j];
        new_hi = std::max(new_hi, t);
      }
    }
    dist.swap(next);
    lo = new_lo;
    hi = new_hi;
  }
  CompensatedSum total;
  for (std::int64_t s = lo; s <= hi; ++s) total.add(dist[static_cast<std::size_t>(s)]);
  return total.value();
}

std::vector<double> exceedance_flags(const ProcessModel& model, const NontightnessGeometry& geo,
                                     std::size_t replicates, std::uint64_t label, const RunOptions& options,
                                     std::vector<double>* statistics) {
  std::vector<double> r_values(replicates);
  const double scale = std::pow(static_cast<double>(geo.length), geo.alpha - 0.5);
  parallel_for(replicates, options.threads, [&](std::size_t r) {
    Philox rng(options.seed, stream_id({label, r}));
    std::vector<double> x;
    sample_model(model, static_cast<std::size_t>(geo.length), rng, x);
    const HolderStatistic w =
        holder_max_windowed(PolygonalPath::from_increments(x), geo.alpha, static_cast<std::size_t>(geo.max_lag));
    r_values[r] = scale * w.value;
  });
  if (statistics != nullptr) *statistics = r_values;
  return r_values;
}

void fill_exceedance(CertificationReport& report, const std::vector<double>& r_values, double threshold) {
  std::size_t hits = 0;
  report.per_replicate.columns = {"replicate", "R", "exceeds"};
  for (std::size_t r = 0; r < r_values.size(); ++r) {
    const bool hit = r_values[r] >= threshold;
    hits += hit ? 1 : 0;
    report.per_replicate.rows.push_back({static_cast<double>(r), r_values[r], hit ? 1.0 : 0.0});
  }
  const Interval ci = wilson_interval(hits, r_values.size());
  std::vector<double> sorted = r_values;
  std::sort(sorted.begin(), sorted.end());
  report.set("exceedances", static_cast<double>(hits));
  report.set("probability", static_cast<double>(hits) / static_cast<double>(r_values.size()));
  report.set("ci_lower", ci.lower);
  report.set("ci_upper", ci.upper);
  report.set("R_min", sorted.front());
  report.set("R_median", sorted[sorted.size() / 2]);
  report.set("R_max", sorted.back());
}

void fill_geometry(CertificationReport& report, const RenewalChainSpec& spec, const NontightnessParams& params,
                   const NontightnessGeometry& geo) {
  report.set("p", spec.p);
  report.set("depth", spec.depth);
  report.set("K", static_cast<double>(params.K));
  report.set("j_level", params.j_level);
  report.set("delta", params.delta);
  report.set("n", static_cast<double>(geo.n));
  report.set("path_length", static_cast<double>(geo.length));
  report.set("max_lag", static_cast<double>(geo.max_lag));
  report.set("alpha", geo.alpha);
  report.set("threshold", geo.threshold);
}

}  // namespace

NontightnessGeometry nontightness_geometry(const RenewalChainSpec& spec, const NontightnessParams& params) {
  const HolderExponent ex = HolderExponent::from_p(spec.p);
  if (!(static_cast<double>(params.K) > spec.mean_tau))
    throw InvalidArgument("K = " + std::to_string(params.K) + " must exceed E[tau] = " + fmt(spec.mean_tau));
  if (params.j_level < 2 || params.j_level > spec.depth)
    throw InvalidArgument("j_level must lie in [2, depth]");
  if (!(params.delta > 0.0 && params.delta <= 1.0)) throw InvalidArgument("delta must lie in (0, 1]");
  check_replicates(params.replicates);
  const std::int64_t uj = spec.u[static_cast<std::size_t>(params.j_level - 1)];

  NontightnessGeometry geo;
  geo.alpha = ex.alpha;
  geo.n = static_cast<std::int64_t>(std::floor(std::pow(static_cast<long double>(uj), (spec.p + 2.0L) / 2.0L)));
  geo.length = geo.n * params.K;
  geo.max_lag = static_cast<std::int64_t>(std::floor(static_cast<double>(geo.n) * params.delta));
  if (geo.max_lag < uj)
    throw InvalidArgument("delta too small: need u_j = " + std::to_string(uj) + " <= n delta = " +
                          fmt(static_cast<double>(geo.n) * params.delta));
  geo.threshold = spec.pi0 / (2.0 * std::pow(static_cast<double>(params.K), 1.0 / spec.p));

  const double level = geo.threshold * std::pow(static_cast<double>(geo.length), 1.0 / spec.p);
  for (std::size_t j = 0; j < spec.u.size(); ++j) {
    const auto tau = static_cast<double>(spec.u[j]);
    if (std::abs(1.0 - spec.pi0 * tau) / std::pow(tau, ex.alpha) >= level && spec.u[j] <= geo.max_lag)
      geo.mu_A += spec.return_probs[j];
  }
  geo.excursion_hit = -std::expm1(static_cast<double>(geo.n) * std::log1p(-geo.mu_A));
  if (geo.n <= 4096) {
    geo.tail_exact = true;
    geo.tail_Tn = std::max(0.0, 1.0 - renewal_sum_cdf(spec, geo.n, geo.length));
  } else {
    const double gap = static_cast<double>(params.K) - spec.mean_tau;
    geo.tail_Tn = std::min(1.0, spec.var_tau / (static_cast<double>(geo.n) * gap * gap));
  }
  geo.lower_bound = geo.excursion_hit - geo.tail_Tn;
  return geo;
}

CertificationReport nontightness_experiment(const RenewalChainSpec& spec, const NontightnessParams& params,
                                            const RunOptions& options) {
  const NontightnessGeometry geo = nontightness_geometry(spec, params);
  const long double steps = static_cast<long double>(geo.length) * static_cast<long double>(params.replicates);
  if (steps > static_cast<long double>(params.step_budget))
    throw CapacityError("non-tightness run needs " + std::to_string(static_cast<unsigned long long>(steps)) +
                        " chain steps (n K replicates), budget is " + std::to_string(params.step_budget) +
                        "; reduce replicates or j_level");
  ProcessModel model = ProcessModel::renewal(spec.p, spec.depth, ChainStart::stationary);
  const std::vector<double> r_values =
      exceedance_flags(model, geo, params.replicates, tag("nontightness"), options, nullptr);

  CertificationReport report;
  report.experiment = "nontightness";
  report.seed = options.seed;
  report.replicates = params.replicates;
  report.n_grid = {geo.n};
  fill_geometry(report, spec, params, geo);
  report.set("pi0", spec.pi0);
  report.set("mean_tau", spec.mean_tau);
  report.set("mu_A", geo.mu_A);
  report.set("excursion_hit", geo.excursion_hit);
  report.set("tail_Tn", geo.tail_Tn);
  report.set("tail_Tn_exact", geo.tail_exact ? 1.0 : 0.0);
  report.set("theoretical_lower_bound", geo.lower_bound);
  fill_exceedance(report, r_values, geo.threshold);
  const double half = (report.get("ci_upper") - report.get("ci_lower")) / 2.0;
  const bool consistent = report.get("probability") >= geo.lower_bound - 3.0 * half;
  report.set("bound_consistent", consistent ? 1.0 : 0.0);
  report.pass = consistent;
  report.verdict = consistent ? "pass: empirical probability consistent with the exact lower bound"
                              : "fail: empirical probability below the lower bound by more than 3 half-widths";
  report.notes.push_back(geo.tail_exact ? "mu(T_n > K n) by exact convolution of the tau law"
                                        : "mu(T_n > K n) bounded by Chebyshev");
  return report;
}

CertificationReport nontightness_contrast(const RenewalChainSpec& spec, const NontightnessParams& params,
                                          double variance, const RunOptions& options) {
  if (!(variance > 0.0) || !std::isfinite(variance)) throw InvalidArgument("contrast variance must be > 0");
  const NontightnessGeometry geo = nontightness_geometry(spec, params);
  const ProcessModel model = ProcessModel::iid(InnovationLaw::normal, std::sqrt(variance), spec.p);
  const std::vector<double> r_values =
      exceedance_flags(model, geo, params.replicates, tag("nontightness-contrast"), options, nullptr);
  CertificationReport report;
  report.experiment = "nontightness_contrast";
  report.seed = options.seed;
  report.replicates = params.replicates;
  report.n_grid = {geo.n};
  fill_geometry(report, spec, params, geo);
  report.set("variance", variance);
  fill_exceedance(report, r_values, geo.threshold);
  report.pass = report.get("probability") <= 0.1;
  report.verdict = report.pass ? "pass: Gaussian increments rarely reach the threshold"
                               : "fail: Gaussian increments reach the threshold too often";
  return report;
}

IdentityCheck renewal_identity_check(const RenewalChainSpec& spec, const RenewalPath& path) {
  if (path.states.size() != path.increments.size() + 1)
    throw InvalidArgument("renewal path needs one more state than increments");
  IdentityCheck out;
  CompensatedSum s;
  for (std::size_t t = 1; t < path.states.size(); ++t) {
    s.add(path.increments[t - 1]);
    if (path.states[t] != 0) continue;
    ++out.regenerations;
    const double expected = static_cast<double>(out.regenerations) - spec.pi0 * static_cast<double>(t);
    const double error = std::abs(s.value() - expected);
    out.max_error = std::max(out.max_error, error);
    if (error > 1e-10) out.pass = false;
  }
  return out;
}

CertificationReport certify_renewal_identity(const RenewalChainSpec& spec, std::size_t paths, std::size_t length,
                                             const RunOptions& options) {
  check_replicates(paths);
  if (length == 0) throw InvalidArgument("path length must be >= 1");
  std::vector<IdentityCheck> checks(paths);
  const std::uint64_t label = tag("renewal-identity");
  parallel_for(paths, options.threads, [&](std::size_t r) {
    Philox rng(options.seed, stream_id({label, r}));
    checks[r] = renewal_identity_check(spec, sample_renewal_path(spec, length, rng));
  });
  CertificationReport report;
  report.experiment = "renewal_identity";
  report.seed = options.seed;
  report.replicates = paths;
  report.n_grid = {static_cast<std::int64_t>(length)};
  report.per_replicate.columns = {"replicate", "regenerations", "max_error", "pass"};
  std::size_t failures = 0;
  std::size_t empty = 0;
  double worst = 0.0;
  double total = 0.0;
  for (std::size_t r = 0; r < paths; ++r) {
    const IdentityCheck& c = checks[r];
    failures += c.pass ? 0 : 1;
    empty += c.regenerations == 0 ? 1 : 0;
    worst = std::max(worst, c.max_error);
    total += static_cast<double>(c.regenerations);
    report.per_replicate.rows.push_back({static_cast<double>(r), static_cast<double>(c.regenerations), c.max_error,
                                         c.pass ? 1.0 : 0.0});
  }
  report.set("paths", static_cast<double>(paths));
  report.set("failures", static_cast<double>(failures));
  report.set("paths_without_regeneration", static_cast<double>(empty));
  report.set("regenerations", total);
  report.set("max_error", worst);
  report.pass = failures == 0 && empty == 0;
  report.verdict = report.pass ? "pass: S_{T_k} = k - pi_0 T_k on every path"
                               : "fail: identity violated or no regeneration observed";
  return report;
}

CertificationReport certify_conditional_sum_oracle(const RenewalChainSpec& spec, std::int64_t max_state,
                                                   std::int64_t max_n, std::size_t paths,
                                                   const RunOptions& options) {
  if (max_state < 0 || max_state >= spec.state_count()) throw InvalidArgument("max_state out of range");
  if (max_n < 1) throw InvalidArgument("max_n must be >= 1");
  if (paths < 2) throw InvalidArgument("oracle check needs >= 2 paths");
  const ConditionalSumOracle oracle(spec, max_n);
  const auto states = static_cast<std::size_t>(max_state + 1);
  const auto horizon = static_cast<std::size_t>(max_n);
  std::vector<std::vector<double>> mean(states, std::vector<double>(horizon));
  std::vector<std::vector<double>> se(states, std::vector<double>(horizon));
  const std::uint64_t label = tag("oracle-mc");
  parallel_for(states, options.threads, [&](std::size_t m) {
    std::vector<CompensatedSum> sum(horizon);
    std::vector<CompensatedSum> sq(horizon);
    std::vector<double> x;
    for (std::size_t r = 0; r < paths; ++r) {
      Philox rng(options.seed, stream_id({label, m, r}));
      sample_renewal_increments_from(spec, static_cast<std::int64_t>(m), horizon, rng, x);
      double s = 0.0;
      for (std::size_t k = 0; k < horizon; ++k) {
        s += x[k];
        sum[k].add(s);
        sq[k].add(s * s);
      }
    }
    const auto count = static_cast<double>(paths);
    for (std::size_t k = 0; k < horizon; ++k) {
      const double mu = sum[k].value() / count;
      const double var = std::max(0.0, (sq[k].value() - count * mu * mu) / (count - 1.0));
      mean[m][k] = mu;
      se[m][k] = std::sqrt(var / count);
    }
  });
  CertificationReport report;
  report.experiment = "conditional_sum_oracle";
  report.seed = options.seed;
  report.replicates = paths;
  report.per_n.columns = {"m", "n", "oracle", "monte_carlo", "stderr", "z"};
  std::size_t misses = 0;
  double worst_z = 0.0;
  for (std::size_t m = 0; m < states; ++m)
    for (std::size_t k = 0; k < horizon; ++k) {
      const auto n = static_cast<std::int64_t>(k + 1);
      const double exact = oracle.at(n, static_cast<std::int64_t>(m));
      const double diff = std::abs(mean[m][k] - exact);
      const double z = se[m][k] > 0.0 ? diff / se[m][k] : (diff <= 1e-12 ? 0.0 : std::numeric_limits<double>::infinity());
      if (diff > 4.0 * se[m][k] + 1e-12) ++misses;
      worst_z = std::max(worst_z, z);
      report.per_n.rows.push_back({static_cast<double>(m), static_cast<double>(n), exact, mean[m][k], se[m][k], z});
    }
  for (std::int64_t n = 1; n <= max_n; ++n) report.n_grid.push_back(n);
  report.set("max_state", static_cast<double>(max_state));
  report.set("max_n", static_cast<double>(max_n));
  report.set("misses", static_cast<double>(misses));
  report.set("worst_z", std::isfinite(worst_z) ? worst_z : -1.0);
  report.pass = misses == 0;
  report.verdict = report.pass ? "pass: oracle within 4 standard errors everywhere"
                               : "fail: " + std::to_string(misses) + " cells outside 4 standard errors";
  return report;
}

}  // namespace hwip
