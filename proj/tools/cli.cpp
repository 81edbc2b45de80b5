#include "cli.hpp"

#include "hwip/errors.hpp"
#include "hwip/experiments.hpp"
#include "hwip/exponent.hpp"
#include "hwip/holder.hpp"
#include "hwip/norms.hpp"
#include "hwip/renewal.hpp"
#include "hwip/rng.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace hwip::cli {

namespace {

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "subcommand", "seed",       "threads",    "out",       "format",  "model",           "p",
      "n",          "n_grid",     "delta_grid", "time_grid", "replicates", "suite",         "variant",
      "J",          "N",          "weights",    "depth",     "K",       "delta",           "j",
      "epsilon",    "contrast",   "contrast_variance",       "step_budget", "n_max",       "max_state",
      "max_n",      "length",     "ks_limit",   "holder_ks_limit",        "input"};
  return keys;
}

std::string path_of(const std::string& key) { return "config." + key; }

// Typed access to the merged document. Every value read (or defaulted) is
// recorded in `used`, which becomes the embedded config.
class Params {
 public:
  Params(const Json& doc, Json& used) : doc_(doc), used_(used) {}

  bool has(const std::string& key) const { return doc_.contains(key); }

  double number(const std::string& key, double fallback) {
    double x = fallback;
    if (has(key)) {
      const Json& v = doc_.at(key);
      if (!v.is_number()) throw ConfigError(path_of(key), "expected a number");
      x = v.get<double>();
      if (!std::isfinite(x)) throw ConfigError(path_of(key), "must be finite");
    }
    used_[key] = x;
    return x;
  }

  std::int64_t integer(const std::string& key, std::int64_t fallback, std::int64_t min_value) {
    std::int64_t x = fallback;
    if (has(key)) {
      const Json& v = doc_.at(key);
      if (!v.is_number_integer()) throw ConfigError(path_of(key), "expected an integer");
      x = v.get<std::int64_t>();
    }
    if (x < min_value) throw ConfigError(path_of(key), "must be >= " + std::to_string(min_value));
    used_[key] = x;
    return x;
  }

  bool boolean(const std::string& key, bool fallback) {
    bool x = fallback;
    if (has(key)) {
      const Json& v = doc_.at(key);
      if (!v.is_boolean()) throw ConfigError(path_of(key), "expected true or false");
      x = v.get<bool>();
    }
    used_[key] = x;
    return x;
  }

  std::string choice(const std::string& key, const std::string& fallback, const std::vector<std::string>& allowed) {
    std::string x = fallback;
    if (has(key)) {
      const Json& v = doc_.at(key);
      if (!v.is_string()) throw ConfigError(path_of(key), "expected a string");
      x = v.get<std::string>();
    }
    if (std::find(allowed.begin(), allowed.end(), x) == allowed.end()) {
      std::string list;
      for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
      throw ConfigError(path_of(key), "expected one of {" + list + "}, got '" + x + "'");
    }
    used_[key] = x;
    return x;
  }

  std::string text(const std::string& key) {
    if (!has(key)) throw ConfigError(path_of(key), "missing required key");
    const Json& v = doc_.at(key);
    if (!v.is_string()) throw ConfigError(path_of(key), "expected a string");
    used_[key] = v;
    return v.get<std::string>();
  }

  std::vector<std::int64_t> integers(const std::string& key, std::vector<std::int64_t> fallback) {
    if (has(key)) {
      const Json& v = doc_.at(key);
      if (!v.is_array() || v.empty()) throw ConfigError(path_of(key), "expected a nonempty array of integers");
      fallback.clear();
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_number_integer() || v[i].get<std::int64_t>() < 1)
          throw ConfigError(path_of(key) + "[" + std::to_string(i) + "]", "expected a positive integer");
        fallback.push_back(v[i].get<std::int64_t>());
      }
    }
    used_[key] = fallback;
    return fallback;
  }

  std::vector<double> numbers(const std::string& key, std::vector<double> fallback) {
    if (has(key)) {
      const Json& v = doc_.at(key);
      if (!v.is_array() || v.empty()) throw ConfigError(path_of(key), "expected a nonempty array of numbers");
      fallback.clear();
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_number())
          throw ConfigError(path_of(key) + "[" + std::to_string(i) + "]", "expected a number");
        fallback.push_back(v[i].get<double>());
      }
    }
    used_[key] = fallback;
    return fallback;
  }

  /// The model document, defaulted and with `p` inherited from the top level.
  ProcessModel model(const Json& fallback, std::optional<double> p) {
    Json m = has("model") ? doc_.at("model") : fallback;
    if (m.is_object() && !m.contains("p") && p) m["p"] = *p;
    if (m.is_object() && m.value("kind", "") == "linear_process" && !m.contains("coefficients"))
      m["coefficients"] = {1.0, 0.5, 0.25};
    ProcessModel model = model_from_json(m, path_of("model"));
    used_["model"] = to_json(model);
    return model;
  }

 private:
  const Json& doc_;
  Json& used_;
};

// Wraps lower-level argument errors so the message carries the key path.
template <class Fn>
auto as_config(const std::string& key, Fn&& fn) {
  try {
    return fn();
  } catch (const ConfigError&) {
    throw;
  } catch (const InvalidArgument& e) {
    throw ConfigError(path_of(key), e.what());
  }
}

std::uint64_t parse_unsigned(const std::string& text, const std::string& where) {
  std::uint64_t x = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), x);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size())
    throw ConfigError(where, "expected a non-negative integer, got '" + text + "'");
  return x;
}

std::uint64_t unsigned_at(const Json& doc, const std::string& key) {
  const Json& v = doc.at(key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
    throw ConfigError(path_of(key), "expected a non-negative integer");
  return v.get<std::uint64_t>();
}

// Keys sorted, so the same settings give the same bytes however they were supplied.
Json sorted(const Json& doc) { return Json::parse(nlohmann::json::parse(doc.dump()).dump()); }

struct Outcome {
  std::vector<CertificationReport> reports;
  Json results = Json::object();
  std::vector<std::pair<std::string, Table>> extra_tables;
};

std::vector<std::int64_t> dyadic_range(std::int64_t lo, std::int64_t hi) {
  std::vector<std::int64_t> g;
  for (std::int64_t n = lo; n <= hi; n *= 2) g.push_back(n);
  return g;
}

Outcome run_simulate(Params& P, const RunOptions& opts) {
  const ProcessModel model = P.model(Json{{"kind", "iid"}}, std::nullopt);
  const double p = P.number("p", model.p);
  const auto n = static_cast<std::size_t>(P.integer("n", 1024, 1));
  const auto reps = static_cast<std::size_t>(P.integer("replicates", 1, 1));
  const double alpha = as_config("p", [&] { return HolderExponent::from_p(p).alpha; });

  CertificationReport r;
  r.experiment = "simulate";
  r.seed = opts.seed;
  r.replicates = reps;
  r.n_grid = {static_cast<std::int64_t>(n)};
  r.per_replicate.columns = {"replicate", "S_n", "holder_max", "holder_norm", "dyadic_lower", "dyadic_upper",
                             "argmax_i", "argmax_j"};
  Table paths{{"replicate", "k", "partial_sum"}, {}};
  double total = 0.0;
  for (std::size_t rep = 0; rep < reps; ++rep) {
    Philox rng(opts.seed, stream_id({tag("simulate"), rep}));
    std::vector<double> x;
    sample_model(model, n, rng, x);
    const PolygonalPath path = PolygonalPath::from_increments(x);
    const HolderStatistic m = holder_max_exact(path, alpha);
    const double norm = std::pow(static_cast<double>(n), alpha) * m.value;
    r.per_replicate.rows.push_back({static_cast<double>(rep), path[n], m.value, norm,
                                    dyadic_lower(path, alpha).value, dyadic_upper(x, alpha).value,
                                    static_cast<double>(m.argmax->first), static_cast<double>(m.argmax->second)});
    for (std::size_t k = 0; k <= n; ++k) paths.rows.push_back({static_cast<double>(rep), static_cast<double>(k), path[k]});
    total += norm;
  }
  r.set("n", static_cast<double>(n));
  r.set("p", p);
  r.set("alpha", alpha);
  r.set("mean_holder_norm", total / static_cast<double>(reps));
  r.pass = true;
  r.verdict = "simulated";
  Outcome out;
  out.reports.push_back(std::move(r));
  out.extra_tables.emplace_back("paths", std::move(paths));
  return out;
}

CertificationReport from_mw(const MwNormReport& mw) {
  CertificationReport r;
  r.experiment = "mw_norm";
  r.per_n.columns = {"j", "term", "stderr", "partial_sum"};
  for (std::size_t j = 0; j < mw.terms.size(); ++j)
    r.per_n.rows.push_back({static_cast<double>(j), mw.terms[j], mw.std_errors[j], mw.partial_sums[j]});
  r.set("p", mw.p);
  r.set("J", mw.J);
  r.set("total", mw.total());
  r.set("tail_estimate", mw.tail_estimate);
  r.set("exact", mw.exact ? 1.0 : 0.0);
  r.set("converged", mw.converged ? 1.0 : 0.0);
  r.pass = true;
  r.verdict = mw.converged ? "series terms shrink geometrically" : "series terms not yet shrinking";
  return r;
}

Outcome run_norms(Params& P, const RunOptions& opts) {
  const ProcessModel model = P.model(Json{{"kind", "linear_process"}, {"coefficients", {1.0, 0.5, 0.25}}}, std::nullopt);
  const double p = P.number("p", model.p);
  const PtVariant variant =
      parse_variant(P.choice("variant", "adapted", {"adapted", "nonadapted"}));
  const bool chain = model.kind == ModelKind::renewal_chain;
  const int J = static_cast<int>(P.integer("J", chain ? 16 : 40, 0));
  const std::int64_t N = P.integer("N", 0, 0);
  Outcome out;
  const MwNormReport mw = mw_norm(model, variant, p, J);
  CertificationReport r = from_mw(mw);
  r.seed = opts.seed;
  out.reports.push_back(std::move(r));
  if (N > 0) {
    const std::string weights = P.choice("weights", chain ? "renewal" : "none", {"none", "renewal"});
    WeightSequence a;
    if (weights == "renewal") a = renewal_weights(model.chain_spec());
    const MwSeriesReport s = mw_series_diagnostic(model, p, a, N);
    CertificationReport sr;
    sr.experiment = "mw_series";
    sr.seed = opts.seed;
    sr.per_n.columns = {"n", "term", "partial_sum", "stderr"};
    for (const auto& row : s.rows)
      sr.per_n.rows.push_back({static_cast<double>(row.n), row.term, row.partial_sum, row.std_error});
    for (const auto& row : s.rows) sr.n_grid.push_back(row.n);
    sr.set("N", static_cast<double>(N));
    sr.set("partial_sum", s.rows.back().partial_sum);
    for (std::size_t k = 0; k < s.block_ratios.size(); ++k)
      sr.set("block_ratio_" + std::to_string(k + 1), s.block_ratios[k]);
    sr.set("converges", s.converges ? 1.0 : 0.0);
    sr.pass = true;
    sr.verdict = s.verdict;
    out.reports.push_back(std::move(sr));
  }
  return out;
}

Outcome run_certify(Params& P, const RunOptions& opts) {
  const std::string suite = P.choice("suite", "dyadic-lemma",
                                     {"dyadic-lemma", "martingale", "mw", "fdd", "tightness", "renewal-identity",
                                      "conditional-sum"});
  Outcome out;
  if (suite == "dyadic-lemma") {
    const double p = P.number("p", 3.0);
    std::vector<ProcessModel> models;
    if (P.has("model"))
      models.push_back(P.model(Json::object(), p));
    else
      models = as_config("p", [&] { return default_model_suite(p); });
    const auto paths = static_cast<std::size_t>(P.integer("replicates", 1000, 1));
    const auto n_max = static_cast<std::size_t>(P.integer("n_max", 1024, 2));
    out.reports.push_back(as_config("n_max", [&] { return certify_dyadic_lemma(models, paths, n_max, p, opts); }));
  } else if (suite == "martingale") {
    const ProcessModel model = P.model(Json{{"kind", "martingale_difference"}, {"innovation", "rademacher"}}, 4.0);
    const double p = P.number("p", 4.0);
    const auto grid = P.integers("n_grid", dyadic_range(64, 4096));
    const auto reps = static_cast<std::size_t>(P.integer("replicates", 2000, 1));
    out.reports.push_back(as_config("model", [&] { return certify_martingale_inequality(model, p, grid, reps, opts); }));
  } else if (suite == "mw") {
    const ProcessModel model =
        P.model(Json{{"kind", "linear_process"}, {"coefficients", {1.0, 0.5, 0.25}}}, 4.0);
    const double p = P.number("p", 4.0);
    const PtVariant variant = parse_variant(P.choice("variant", "adapted", {"adapted", "nonadapted"}));
    const auto grid = P.integers("n_grid", dyadic_range(64, 4096));
    const auto reps = static_cast<std::size_t>(P.integer("replicates", 500, 1));
    out.reports.push_back(
        as_config("model", [&] { return certify_mw_inequality(model, variant, p, grid, reps, opts); }));
  } else if (suite == "fdd") {
    const ProcessModel model = P.model(Json{{"kind", "iid"}}, 4.0);
    const double p = P.number("p", model.p);
    const auto n = static_cast<std::size_t>(P.integer("n", 4096, 2));
    const auto reps = static_cast<std::size_t>(P.integer("replicates", 2000, 2));
    const auto grid = P.numbers("time_grid", {0.25, 0.5, 0.75, 1.0});
    const double ks_limit = P.number("ks_limit", 0.05);
    const double holder_limit = P.number("holder_ks_limit", 0.08);
    ConvergenceReport result = as_config("time_grid", [&] { return fdd_convergence_test(model, n, reps, grid, opts); });
    const KsResult ks = as_config("p", [&] { return holder_distribution_ks(model, p, n / 2, n, reps, opts); });
    result.holder_n = {static_cast<std::int64_t>(n / 2), static_cast<std::int64_t>(n)};
    result.holder_ks = ks.distance;
    result.holder_p_value = ks.p_value;
    out.reports.push_back(convergence_report(result, n, reps, opts, ks_limit, holder_limit));
  } else if (suite == "tightness") {
    const ProcessModel model = P.model(Json{{"kind", "renewal_chain"}, {"depth", 4}}, 3.0);
    const double p = P.number("p", model.p);
    const auto grid = P.integers("n_grid", {1024, 4096, 16384});
    const auto deltas = P.numbers("delta_grid", {0.5, 0.1, 0.02});
    const double eps = P.number("epsilon", 1.0);
    const auto reps = static_cast<std::size_t>(P.integer("replicates", 200, 1));
    out.reports.push_back(as_config("delta_grid", [&] {
      return holder_tightness_diagnostic(model, p, grid, reps, deltas, eps, opts);
    }));
  } else {
    const double p = P.number("p", 3.0);
    const int depth = static_cast<int>(P.integer("depth", 4, 2));
    const RenewalChainSpec spec = as_config("depth", [&] {
      try {
        return build_renewal_chain(p, depth);
      } catch (const CapacityError& e) {
        throw ConfigError(path_of("depth"), e.what());
      }
    });
    if (suite == "renewal-identity") {
      const auto paths = static_cast<std::size_t>(P.integer("replicates", 1000, 1));
      const auto length = static_cast<std::size_t>(P.integer("length", 10000, 1));
      out.reports.push_back(certify_renewal_identity(spec, paths, length, opts));
    } else {
      const std::int64_t max_state = P.integer("max_state", 7, 0);
      const std::int64_t max_n = P.integer("max_n", 64, 1);
      const auto paths = static_cast<std::size_t>(P.integer("replicates", 20000, 2));
      out.reports.push_back(
          as_config("max_state", [&] { return certify_conditional_sum_oracle(spec, max_state, max_n, paths, opts); }));
    }
    out.results["chain"] = to_json(spec);
  }
  return out;
}

Outcome run_counterexample(Params& P, const RunOptions& opts) {
  const double p = P.number("p", 3.0);
  const int depth = static_cast<int>(P.integer("depth", 4, 2));
  const RenewalChainSpec spec = as_config("p", [&] {
    try {
      return build_renewal_chain(p, depth);
    } catch (const CapacityError& e) {
      throw ConfigError(path_of("depth"), e.what());
    }
  });
  NontightnessParams params;
  params.K = P.integer("K", params.K, 1);
  params.j_level = static_cast<int>(P.integer("j", params.j_level, 2));
  params.delta = P.number("delta", params.delta);
  params.replicates = static_cast<std::size_t>(P.integer("replicates", static_cast<std::int64_t>(params.replicates), 1));
  params.step_budget = static_cast<std::uint64_t>(
      P.integer("step_budget", static_cast<std::int64_t>(params.step_budget), 1));
  const bool contrast = P.boolean("contrast", true);
  const double variance = P.number("contrast_variance", spec.long_run_variance());
  as_config("K", [&] { return nontightness_geometry(spec, params); });

  Outcome out;
  out.reports.push_back(nontightness_experiment(spec, params, opts));
  if (contrast)
    out.reports.push_back(as_config("contrast_variance", [&] { return nontightness_contrast(spec, params, variance, opts); }));
  out.results["chain"] = to_json(spec);
  return out;
}

std::string summary_text(const std::string& subcommand, const Json& artifact) {
  std::ostringstream s;
  s << "hwip " << subcommand << " (seed " << artifact["config"].value("seed", 0ULL) << ")\n";
  for (const Json& r : artifact["reports"]) {
    s << "[" << r["experiment"].get<std::string>() << "] " << r["verdict"].get<std::string>() << "\n";
    for (const auto& [key, value] : r["summary"].items()) {
      s << "  " << key << " = ";
      if (value.is_number())
        s << format_number(value.get<double>());
      else
        s << value.get<std::string>();
      s << "\n";
    }
    for (const Json& note : r["notes"]) s << "  note: " << note.get<std::string>() << "\n";
  }
  s << "overall: " << (artifact["pass"].get<bool>() ? "PASS" : "FAIL") << "\n";
  return s.str();
}

void write_csv(const std::filesystem::path& file, const Table& table, const std::string& config_line) {
  write_text_file(file, "# config=" + config_line + "\n" + to_csv(table));
}

}  // namespace

Environment Environment::from_process() {
  Environment env;
  if (const char* s = std::getenv("HWIP_SEED")) env.seed = s;
  if (const char* t = std::getenv("HWIP_THREADS")) env.threads = t;
  return env;
}

RunConfig resolve(const std::string& subcommand, const Json& file_doc, const Json& flag_doc, const Environment& env) {
  if (!file_doc.is_object()) throw ConfigError("config", "expected a JSON object at the top level");
  for (const auto& item : file_doc.items())
    if (!known_keys().count(item.key())) throw ConfigError(path_of(item.key()), "unknown key");
  if (file_doc.contains("subcommand")) {
    const Json& s = file_doc.at("subcommand");
    if (!s.is_string() || s.get<std::string>() != subcommand)
      throw ConfigError(path_of("subcommand"), "config is for '" + s.dump() + "', not '" + subcommand + "'");
  }

  Json merged = file_doc;
  for (const auto& item : flag_doc.items()) {
    if (item.key() == "model" && merged.contains("model") && merged["model"].is_object())
      merged["model"].update(item.value());
    else
      merged[item.key()] = item.value();
  }

  RunConfig config;
  config.subcommand = subcommand;
  if (flag_doc.contains("seed"))
    config.seed = unsigned_at(flag_doc, "seed");
  else if (env.seed)
    config.seed = parse_unsigned(*env.seed, "env.HWIP_SEED");
  else if (file_doc.contains("seed"))
    config.seed = unsigned_at(file_doc, "seed");

  std::uint64_t threads = 1;
  if (flag_doc.contains("threads"))
    threads = unsigned_at(flag_doc, "threads");
  else if (env.threads)
    threads = parse_unsigned(*env.threads, "env.HWIP_THREADS");
  else if (file_doc.contains("threads"))
    threads = unsigned_at(file_doc, "threads");
  if (threads > 4096) throw ConfigError(flag_doc.contains("threads") ? path_of("threads") : "env.HWIP_THREADS",
                                        "at most 4096 threads");
  config.threads = static_cast<unsigned>(threads);

  if (merged.contains("out")) {
    if (!merged["out"].is_string()) throw ConfigError(path_of("out"), "expected a directory path");
    config.out = merged["out"].get<std::string>();
  }
  if (merged.contains("format")) {
    const Json& f = merged["format"];
    const std::string v = f.is_string() ? f.get<std::string>() : "";
    if (v == "json")
      config.format = Format::json;
    else if (v == "csv")
      config.format = Format::csv;
    else if (v == "both")
      config.format = Format::both;
    else
      throw ConfigError(path_of("format"), "expected one of {json, csv, both}");
  }
  merged.erase("threads");
  merged.erase("out");
  merged.erase("format");
  merged.erase("subcommand");
  merged["seed"] = config.seed;
  config.doc = sorted(merged);
  return config;
}

int execute(const RunConfig& config, std::ostream& out) {
  const RunOptions opts{config.seed, config.threads};
  Json used = Json::object();
  Params P(config.doc, used);
  Json artifact;
  Outcome outcome;

  if (config.subcommand == "report") {
    const std::string input = P.text("input");
    std::ifstream in(input);
    if (!in) throw ConfigError(path_of("input"), "cannot read '" + input + "'");
    try {
      artifact = Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      throw ConfigError(path_of("input"), std::string("not valid JSON: ") + e.what());
    }
    if (!artifact.is_object() || !artifact.contains("reports") || !artifact.contains("config") ||
        !artifact.contains("pass"))
      throw ConfigError(path_of("input"), "not an hwip report (needs config, reports and pass)");
    const std::string text = summary_text(artifact["config"].value("subcommand", std::string("report")), artifact);
    out << text;
    write_text_file(config.out / "report_summary.txt", text);
    return artifact["pass"].get<bool>() ? kPass : kFail;
  }

  if (config.subcommand == "simulate")
    outcome = run_simulate(P, opts);
  else if (config.subcommand == "norms")
    outcome = run_norms(P, opts);
  else if (config.subcommand == "certify")
    outcome = run_certify(P, opts);
  else if (config.subcommand == "counterexample")
    outcome = run_counterexample(P, opts);
  else
    throw ConfigError("subcommand", "unknown subcommand '" + config.subcommand + "'");

  for (const auto& item : config.doc.items())
    if (!used.contains(item.key()) && item.key() != "seed")
      throw ConfigError(path_of(item.key()), "not used by '" + config.subcommand + "'");

  Json effective = Json::object();
  effective["subcommand"] = config.subcommand;
  effective["seed"] = config.seed;
  const Json used_sorted = sorted(used);
  for (const auto& item : used_sorted.items()) effective[item.key()] = item.value();

  bool pass = true;
  artifact["config"] = effective;
  artifact["reports"] = Json::array();
  for (const auto& r : outcome.reports) {
    artifact["reports"].push_back(to_json(r));
    pass = pass && r.pass;
  }
  if (!outcome.results.empty()) artifact["results"] = outcome.results;
  artifact["pass"] = pass;

  const std::string stem = config.subcommand;
  if (config.format != Format::csv) write_text_file(config.out / (stem + ".json"), dump(artifact));
  if (config.format != Format::json) {
    const std::string line = effective.dump();
    for (const auto& r : outcome.reports) {
      if (!r.per_n.rows.empty()) write_csv(config.out / (stem + "_" + r.experiment + "_per_n.csv"), r.per_n, line);
      if (!r.per_replicate.rows.empty())
        write_csv(config.out / (stem + "_" + r.experiment + "_per_replicate.csv"), r.per_replicate, line);
    }
    for (const auto& [name, table] : outcome.extra_tables)
      write_csv(config.out / (stem + "_" + name + ".csv"), table, line);
  }
  const std::string text = summary_text(stem, artifact);
  write_text_file(config.out / (stem + "_summary.txt"), text);
  out << text;
  return pass ? kPass : kFail;
}

int main_entry(const std::vector<std::string>& args, const Environment& env, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hoelder-space invariance principle toolkit"};
  app.require_subcommand(1);
  struct Flags {
    std::string config, out, format, suite, variant, model, input, weights;
    std::uint64_t seed = 0;
    std::uint64_t threads = 0;
    double p = 0, delta = 0, epsilon = 0, contrast_variance = 0;
    std::int64_t n = 0, replicates = 0, J = 0, N = 0, depth = 0, K = 0, j = 0, n_max = 0, length = 0, max_state = 0,
                 max_n = 0;
    std::vector<std::int64_t> n_grid;
    std::vector<double> delta_grid, time_grid;
    bool no_contrast = false;
  } f;

  std::vector<std::pair<std::string, CLI::App*>> subs;
  for (const char* name : {"simulate", "norms", "certify", "counterexample", "report"}) {
    CLI::App* s = app.add_subcommand(name);
    s->add_option("--config", f.config, "JSON config file");
    s->add_option("--seed", f.seed, "master seed (default 7)");
    s->add_option("--out", f.out, "output directory");
    s->add_option("--threads", f.threads, "worker threads, 0 = all cores");
    s->add_option("--format", f.format, "json, csv or both")->check(CLI::IsMember({"json", "csv", "both"}));
    s->add_option("--model", f.model, "model kind");
    s->add_option("--p", f.p, "moment order p > 2");
    s->add_option("--n", f.n, "path length");
    s->add_option("--n-grid", f.n_grid, "increasing path lengths")->delimiter(',');
    s->add_option("--delta-grid", f.delta_grid, "decreasing window fractions")->delimiter(',');
    s->add_option("--time-grid", f.time_grid, "times in (0, 1]")->delimiter(',');
    s->add_option("--replicates", f.replicates, "replicates or paths");
    s->add_option("--suite", f.suite, "certification suite");
    s->add_option("--variant", f.variant, "adapted or nonadapted");
    s->add_option("--J", f.J, "MW truncation level");
    s->add_option("--N", f.N, "series length for the MW diagnostic");
    s->add_option("--weights", f.weights, "none or renewal");
    s->add_option("--depth", f.depth, "renewal depth");
    s->add_option("--K", f.K, "path length multiplier");
    s->add_option("--delta", f.delta, "window fraction");
    s->add_option("--j", f.j, "subsequence level");
    s->add_option("--epsilon", f.epsilon, "modulus threshold");
    s->add_option("--contrast-variance", f.contrast_variance, "variance of the Gaussian contrast");
    s->add_flag("--no-contrast", f.no_contrast, "skip the Gaussian contrast run");
    s->add_option("--n-max", f.n_max, "largest n for the dyadic certificate");
    s->add_option("--length", f.length, "renewal path length");
    s->add_option("--max-state", f.max_state, "largest initial state");
    s->add_option("--max-n", f.max_n, "largest horizon");
    s->add_option("--input", f.input, "report JSON to summarise");
    subs.emplace_back(name, s);
  }

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kPass : kConfigError;
  }

  try {
    std::string subcommand;
    CLI::App* active = nullptr;
    for (const auto& [name, s] : subs)
      if (s->parsed()) {
        subcommand = name;
        active = s;
      }
    auto given = [&](const std::string& flag) { return active->count(flag) > 0; };

    Json file_doc = Json::object();
    if (given("--config")) {
      std::ifstream in(f.config);
      if (!in) throw ConfigError("--config", "cannot read '" + f.config + "'");
      try {
        file_doc = Json::parse(in);
      } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("config", std::string("malformed JSON in '") + f.config + "': " + e.what());
      }
    }

    Json flags = Json::object();
    if (given("--seed")) flags["seed"] = f.seed;
    if (given("--threads")) flags["threads"] = f.threads;
    if (given("--out")) flags["out"] = f.out;
    if (given("--format")) flags["format"] = f.format;
    if (given("--model")) flags["model"] = Json{{"kind", f.model}};
    if (given("--p")) flags["p"] = f.p;
    if (given("--n")) flags["n"] = f.n;
    if (given("--n-grid")) flags["n_grid"] = f.n_grid;
    if (given("--delta-grid")) flags["delta_grid"] = f.delta_grid;
    if (given("--time-grid")) flags["time_grid"] = f.time_grid;
    if (given("--replicates")) flags["replicates"] = f.replicates;
    if (given("--suite")) flags["suite"] = f.suite;
    if (given("--variant")) flags["variant"] = f.variant;
    if (given("--J")) flags["J"] = f.J;
    if (given("--N")) flags["N"] = f.N;
    if (given("--weights")) flags["weights"] = f.weights;
    if (given("--depth")) flags["depth"] = f.depth;
    if (given("--K")) flags["K"] = f.K;
    if (given("--delta")) flags["delta"] = f.delta;
    if (given("--j")) flags["j"] = f.j;
    if (given("--epsilon")) flags["epsilon"] = f.epsilon;
    if (given("--contrast-variance")) flags["contrast_variance"] = f.contrast_variance;
    if (given("--no-contrast")) flags["contrast"] = false;
    if (given("--n-max")) flags["n_max"] = f.n_max;
    if (given("--length")) flags["length"] = f.length;
    if (given("--max-state")) flags["max_state"] = f.max_state;
    if (given("--max-n")) flags["max_n"] = f.max_n;
    if (given("--input")) flags["input"] = f.input;

    const RunConfig config = resolve(subcommand, file_doc, flags, env);
    return execute(config, out);
  } catch (const ConfigError& e) {
    err << "hwip: config error at " << e.what() << "\n";
  } catch (const CapacityError& e) {
    err << "hwip: capacity error: " << e.what() << " (reduce n, depth or replicates)\n";
  } catch (const CapabilityError& e) {
    err << "hwip: unsupported: " << e.what() << "\n";
  } catch (const InvalidArgument& e) {
    err << "hwip: invalid argument: " << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "hwip: error: " << e.what() << "\n";
  }
  return kConfigError;
}

}  // namespace hwip::cli
