// Acceptance gate: one PASS/FAIL line per criterion, then a reproducibility
// rerun at a different thread count. Exit status is nonzero if any line fails.

#include "hwip/errors.hpp"
#include "hwip/experiments.hpp"
#include "hwip/holder.hpp"
#include "hwip/io.hpp"
#include "hwip/models.hpp"
#include "hwip/norms.hpp"
#include "hwip/renewal.hpp"
#include "hwip/rng.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

using namespace hwip;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
  std::vector<std::string> info;
  Json artifact;  // everything the criterion computed, compared byte-wise in the rerun
  double seconds = 0.0;
};

std::string fixed(double x, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

// ---------------------------------------------------------------------------

Outcome dyadic_lemma(const RunOptions& opts) {
  Outcome out;
  out.pass = true;
  out.artifact = Json::array();
  std::size_t violations = 0;
  std::size_t checks = 0;
  for (double p : {2.5, 3.0, 4.0}) {
    const CertificationReport r = certify_dyadic_lemma(default_model_suite(p), 1000, 1024, p, opts);
    violations += static_cast<std::size_t>(r.get("violations"));
    checks += static_cast<std::size_t>(r.get("checks"));
    out.pass = out.pass && r.pass;
    out.info.push_back("p = " + fixed(p, 2) + ": worst relative slack " + fixed(r.get("worst_relative_slack")));
    out.artifact.push_back(to_json(r));
  }
  out.detail = std::to_string(checks) + " (path, n) checks over 5 model kinds x 1000 paths x p in {2.5, 3, 4}, " +
               std::to_string(violations) + " violations";
  return out;
}

Outcome vertex_identity(const RunOptions& opts) {
  // ||W||_H measured independently on a grid of step 1/(8n), which contains
  // every vertex; the sup of a polygonal path's quotient sits on vertices.
  Outcome out;
  double literal_worst = 0.0;
  double corrected_worst = 0.0;
  double dense_excess = 0.0;
  Json rows = Json::array();
  for (std::size_t r = 0; r < 100; ++r) {
    Philox rng(opts.seed, stream_id({tag("vertex-identity"), r}));
    const std::size_t n = 2 + rng() % 127;
    const double p = (r % 3 == 0) ? 2.5 : (r % 3 == 1 ? 3.0 : 4.0);
    const double alpha = 0.5 - 1.0 / p;
    const ProcessModel model = r % 2 ? ProcessModel::linear({1.0, 0.5, 0.25}) : ProcessModel::renewal(p, 4);
    std::vector<double> h;
    sample_model(model, n, rng, h);
    const PolygonalPath path = PolygonalPath::from_increments(h);

    const double M = holder_max_exact(path, alpha).value;
    const double vertex = holder_norm_of_path(path, alpha);
    const std::size_t points = 8 * n;
    std::vector<double> w(points + 1);
    for (std::size_t k = 0; k <= points; ++k) w[k] = path.evaluate(static_cast<double>(k) / static_cast<double>(points));
    double dense = 0.0;
    for (std::size_t a = 0; a < points; ++a)
      for (std::size_t b = a + 1; b <= points; ++b)
        dense = std::max(dense, std::abs(w[b] - w[a]) /
                                    std::pow(static_cast<double>(b - a) / static_cast<double>(points), alpha));
    const double na = std::pow(static_cast<double>(n), alpha);
    literal_worst = std::max(literal_worst, std::abs(na * dense - M) / M);
    corrected_worst = std::max(corrected_worst, std::abs(dense / na - M) / M);
    dense_excess = std::max(dense_excess, (dense - vertex) / vertex);
    rows.push_back({n, p, M, vertex, dense});
  }
  const bool literal = literal_worst <= 1e-12;
  const bool dense_ok = dense_excess <= 1e-9;
  out.pass = literal && dense_ok;
  out.detail = "n^alpha ||W||_H vs M: worst relative gap " + fixed(literal_worst) + " (need 1e-12); dense grid " +
               "excess over the vertex value " + fixed(dense_excess) + " (need 1e-9)";
  out.info.push_back("||W||_H = n^alpha M, i.e. n^{-alpha} ||W||_H = M: worst relative gap " +
                     fixed(corrected_worst) + (corrected_worst <= 1e-9 ? " (holds)" : " (does not hold)"));
  out.artifact = rows;
  return out;
}

Outcome sandwich(const RunOptions& opts) {
  Outcome out;
  std::size_t violations = 0;
  Json rows = Json::array();
  const std::vector<ProcessModel> models = default_model_suite(3.0);
  for (std::size_t r = 0; r < 1000; ++r) {
    Philox rng(opts.seed, stream_id({tag("sandwich"), r}));
    const std::size_t n = 1 + rng() % 2048;
    const double p = 2.2 + static_cast<double>(r % 7) * 0.5;
    const double alpha = 0.5 - 1.0 / p;
    std::vector<double> h;
    sample_model(models[r % models.size()], n, rng, h);
    const PolygonalPath path = PolygonalPath::from_increments(h);
    const double lower = dyadic_lower(path, alpha).value;
    const double exact = holder_max_exact(path, alpha).value;
    const double upper = dyadic_upper(h, alpha).value;
    if (!(lower <= exact && exact <= upper)) ++violations;
    rows.push_back({n, lower, exact, upper});
  }
  out.pass = violations == 0;
  out.detail = "1000 paths, n <= 2048: " + std::to_string(violations) + " violations of lower <= exact <= upper";
  out.artifact = rows;
  return out;
}

std::vector<double> pareto_draws(std::size_t count, double p, std::uint64_t seed, std::uint64_t stream) {
  Philox rng(seed, stream);
  std::vector<double> x(count);
  for (double& v : x) v = std::pow(rng.uniform_open(), -1.0 / p);
  return x;
}

Outcome weak_lp(const RunOptions& opts) {
  Outcome out;
  const std::vector<double> x = pareto_draws(100000, 3.0, opts.seed, stream_id({tag("pareto"), 0}));
  const WeakLpEstimate e = empirical_weak_lp(x, 3.0);
  const bool tail_ok = std::abs(e.tail_form - 1.0) <= 0.1;
  bool ratios_ok = true;
  Json artifact;
  artifact["estimate"] = to_json(e);
  std::string ratio_text;
  for (std::size_t N : {1u, 4u, 16u}) {
    std::vector<std::vector<double>> samples;
    for (std::size_t j = 0; j < N; ++j)
      samples.push_back(pareto_draws(100000, 3.0, opts.seed, stream_id({tag("pareto-max"), N, j})));
    const MaxBoundReport m = weak_lp_max_bound_check(samples, 3.0);
    ratios_ok = ratios_ok && m.pass;
    ratio_text += " N=" + std::to_string(N) + ": " + fixed(m.ratio);
    artifact["max_bound"].push_back(to_json(m));
  }
  out.pass = tail_ok && ratios_ok;
  out.detail = "tail form on 1e5 Pareto(3) draws = " + fixed(e.tail_form, 6) + " (need 1.0 +- 0.1); max-bound ratios" +
               ratio_text + " (need <= 1)";
  out.info.push_back("trimmed tail form (ranks >= N^{2/3}) = " + fixed(e.tail_form_trimmed, 6) +
                     "; the untrimmed maximum exceeds x with probability 1/x for any N");
  out.artifact = artifact;
  return out;
}

std::vector<std::int64_t> dyadic_grid(std::int64_t lo, std::int64_t hi) {
  std::vector<std::int64_t> g;
  for (std::int64_t n = lo; n <= hi; n *= 2) g.push_back(n);
  return g;
}

Outcome martingale_inequality(const RunOptions& opts) {
  Outcome out;
  const ProcessModel model = ProcessModel::martingale_difference(InnovationLaw::rademacher, 1.0, 0.0, 1.0, 4.0);
  const CertificationReport r = certify_martingale_inequality(model, 4.0, dyadic_grid(64, 4096), 2000, opts);
  const double slope = r.get("slope");
  out.pass = slope >= -0.05 && slope <= 0.02;
  out.detail = "Rademacher mds, p = 4, n = 64..4096, 2000 replicates: log-log slope " + fixed(slope) +
               " (need [-0.05, 0.02]); max ratio " + fixed(r.get("max_ratio"));
  out.artifact = to_json(r);
  return out;
}

Outcome mw_collapse(const RunOptions& opts) {
  Outcome out;
  const ProcessModel model = ProcessModel::martingale_difference(InnovationLaw::rademacher, 1.0, 0.0, 1.3, 4.0);
  const MwNormReport mw = mw_norm(model, PtVariant::adapted, 4.0, 80);
  const double f = lp_norm(model, model.increment_functional(), 4.0).value;
  const double target = (2.0 + std::numbers::sqrt2) * f;
  const double gap = std::abs(mw.total() - target);

  // Same paths and seeds: the left-hand statistics must agree exactly.
  const auto grid = dyadic_grid(64, 1024);
  const CertificationReport a = certify_martingale_inequality(model, 4.0, grid, 200, opts);
  const CertificationReport b = certify_mw_inequality(model, PtVariant::adapted, 4.0, grid, 200, opts);
  const bool same = to_json(a.per_replicate) == to_json(b.per_replicate);

  out.pass = gap <= 1e-10 && mw.exact && same;
  out.detail = "J = 80 partial sum " + fixed(mw.total(), 17) + " vs (2 + sqrt 2)||f||_4 = " + fixed(target, 17) +
               ", gap " + fixed(gap) + " (need 1e-10); martingale and MW certificates share statistics: " +
               (same ? "yes" : "no");
  out.artifact = {to_json(mw), to_json(a), to_json(b)};
  return out;
}

Outcome renewal_exactness(const RunOptions& opts) {
  Outcome out;
  // Independent 40-digit normalisation (tests/oracles/renewal_constants.py).
  constexpr double c_ref = 0.72636704662123706513;
  constexpr double mean_ref = 1.3595843139358747738;
  constexpr double pi0_ref = 0.73551893012437720561;
  const RenewalChainSpec spec = build_renewal_chain(3.0, 4);
  const double err = std::max({std::abs(spec.c - c_ref) / c_ref, std::abs(spec.mean_tau - mean_ref) / mean_ref,
                               std::abs(spec.pi0 - pi0_ref) / pi0_ref});
  const bool constants = err <= 1e-4 && std::abs(spec.c - 0.72637) < 5e-6 && std::abs(spec.mean_tau - 1.35958) < 5e-6 &&
                         std::abs(spec.pi0 - 0.73552) < 5e-6;
  const CertificationReport identity = certify_renewal_identity(spec, 1000, 10000, opts);
  const CertificationReport oracle = certify_conditional_sum_oracle(spec, 7, 64, 20000, opts);
  out.pass = constants && identity.pass && oracle.pass;
  out.detail = "c = " + fixed(spec.c, 7) + ", E[tau] = " + fixed(spec.mean_tau, 7) + ", pi_0 = " + fixed(spec.pi0, 7) +
               " (relative error " + fixed(err, 2) + "); identity failures " + fixed(identity.get("failures")) +
               " over 1000 paths; oracle cells outside 4 SE " + fixed(oracle.get("misses")) + " (m <= 7, n <= 64)";
  out.artifact = {to_json(spec), to_json(identity), to_json(oracle)};
  return out;
}

Outcome invariance_principle(const RunOptions& opts) {
  Outcome out;
  out.pass = true;
  out.artifact = Json::array();
  const std::vector<ProcessModel> models = {
      ProcessModel::iid(InnovationLaw::normal, 1.0, 4.0),
      ProcessModel::martingale_difference(InnovationLaw::normal, 1.0, 0.5, 1.0, 4.0)};
  for (const ProcessModel& model : models) {
    ConvergenceReport result = fdd_convergence_test(model, 4096, 2000, {0.25, 0.5, 0.75, 1.0}, opts);
    const KsResult ks = holder_distribution_ks(model, 4.0, 2048, 4096, 2000, opts);
    result.holder_n = {2048, 4096};
    result.holder_ks = ks.distance;
    result.holder_p_value = ks.p_value;
    const CertificationReport r = convergence_report(result, 4096, 2000, opts, 0.05, 0.08);
    out.pass = out.pass && r.pass;
    out.detail += std::string(out.detail.empty() ? "" : "; ") + std::string(to_string(model.kind)) +
                  ": max fdd KS " + fixed(r.get("max_fdd_ks")) + ", Hoelder KS " + fixed(ks.distance);
    out.artifact.push_back(to_json(r));
  }
  out.detail += " (limits 0.05 and 0.08)";
  return out;
}

Outcome nontightness(const RunOptions& opts) {
  Outcome out;
  const RenewalChainSpec spec = build_renewal_chain(3.0, 4);
  NontightnessParams params;  // K = 2, j = 4, delta = 1e-3, 200 replicates
  const CertificationReport chain = nontightness_experiment(spec, params, opts);
  // The contrast matches the chain's long-run variance so only the excursions differ.
  const CertificationReport gauss = nontightness_contrast(spec, params, spec.long_run_variance(), opts);
  const CertificationReport unit = nontightness_contrast(spec, params, 1.0, opts);
  const double prob = chain.get("probability");
  const double bound = chain.get("theoretical_lower_bound");
  out.pass = prob >= 0.8 && bound >= 0.9 && gauss.get("probability") <= 0.1 && chain.pass;
  out.detail = "n = " + fixed(chain.get("n"), 7) + ", threshold " + fixed(chain.get("threshold"), 6) +
               ": P(R >= threshold) = " + fixed(prob) + " [" + fixed(chain.get("ci_lower")) + ", " +
               fixed(chain.get("ci_upper")) + "] (need >= 0.8), exact lower bound " + fixed(bound) +
               " (need >= 0.9), Gaussian contrast " + fixed(gauss.get("probability")) + " (need <= 0.1)";
  out.info.push_back("contrast variance eta = " + fixed(spec.long_run_variance()) +
                     "; with unit variance the contrast probability is " + fixed(unit.get("probability")));
  out.artifact = {to_json(chain), to_json(gauss), to_json(unit)};
  return out;
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome(const RunOptions&)> run;
  double budget_seconds;  // 0: no runtime requirement
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "dyadic lemma certificate", dyadic_lemma, 300.0},
      {2, "vertex identity", vertex_identity, 0.0},
      {3, "sandwich property", sandwich, 0.0},
      {4, "weak-L^p estimator", weak_lp, 0.0},
      {5, "martingale inequality boundedness", martingale_inequality, 600.0},
      {6, "MW collapse for martingale differences", mw_collapse, 0.0},
      {7, "renewal chain exactness", renewal_exactness, 0.0},
      {8, "invariance-principle consistency", invariance_principle, 0.0},
      {9, "non-tightness demonstration", nontightness, 1800.0},
  };
  const RunOptions first{7, 1};
  const RunOptions second{7, 3};

  bool all = true;
  std::vector<std::string> dumps;
  for (const Criterion& c : criteria) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      o = c.run(first);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("error: ") + e.what();
    }
    o.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.budget_seconds > 0.0 && o.seconds > c.budget_seconds) {
      o.pass = false;
      o.detail += "; runtime over budget (" + fixed(c.budget_seconds) + " s)";
    }
    all = all && o.pass;
    std::printf("[%s] %d %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), o.seconds);
    for (const auto& line : o.info) std::printf("       info: %s\n", line.c_str());
    std::fflush(stdout);
    dumps.push_back(dump(o.artifact));
  }

  // 10: rerun everything with another thread count.
  std::size_t mismatches = 0;
  std::string which;
  const auto t0 = std::chrono::steady_clock::now();
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    std::string again;
    try {
      again = dump(criteria[k].run(second).artifact);
    } catch (const std::exception& e) {
      again = e.what();
    }
    if (again != dumps[k]) {
      ++mismatches;
      which += " " + std::to_string(criteria[k].id);
    }
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool repro = mismatches == 0;
  all = all && repro;
  std::printf("[%s] 10 reproducibility: criteria 1-9 rerun with %u threads vs %u: %zu reports differ%s (%.1f s)\n",
              repro ? "PASS" : "FAIL", second.threads, first.threads, mismatches,
              which.empty() ? "" : (" (" + which.substr(1) + ")").c_str(), seconds);
  return all ? EXIT_SUCCESS : EXIT_FAILURE;
}
