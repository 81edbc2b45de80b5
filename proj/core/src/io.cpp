#include "hwip/io.hpp"

#include "hwip/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace hwip {

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

Json to_json(const HolderStatistic& stat) {
  Json j;
  j["value"] = stat.value;
  j["method"] = std::string(to_string(stat.method));
  j["alpha"] = stat.alpha;
  if (stat.argmax) {
    j["argmax_i"] = stat.argmax->first;
    j["argmax_j"] = stat.argmax->second;
  } else {
    j["argmax_i"] = nullptr;
    j["argmax_j"] = nullptr;
  }
  return j;
}

Json to_json(const WeakLpEstimate& e) {
  Json j;
  j["p"] = e.p;
  j["sample_count"] = e.sample_count;
  j["tail_form"] = e.tail_form;
  j["tail_form_root"] = e.norm_lower;
  j["dual_norm_bracket"] = {e.norm_lower, e.norm_upper};
  j["tail_form_trimmed"] = e.tail_form_trimmed;
  if (e.bootstrap_ci)
    j["bootstrap_ci"] = {e.bootstrap_ci->lower, e.bootstrap_ci->upper};
  else
    j["bootstrap_ci"] = nullptr;
  return j;
}

Json to_json(const MaxBoundReport& r) {
  Json j;
  j["functions"] = r.functions;
  j["replicates"] = r.replicates;
  j["max_tail_root"] = r.max_tail_root;
  j["worst_single_root"] = r.worst_single_root;
  j["bound"] = r.bound;
  j["ratio"] = r.ratio;
  j["pass"] = r.pass;
  return j;
}

Json to_json(const MwNormReport& r) {
  Json j;
  j["variant"] = std::string(to_string(r.variant));
  j["p"] = r.p;
  j["J"] = r.J;
  j["exact"] = r.exact;
  Json terms = Json::array();
  for (std::size_t k = 0; k < r.terms.size(); ++k)
    terms.push_back({{"j", k}, {"term", r.terms[k]}, {"stderr", r.std_errors[k]}, {"partial_sum", r.partial_sums[k]}});
  j["terms"] = terms;
  j["total"] = r.total();
  j["tail_estimate"] = std::isfinite(r.tail_estimate) ? Json(r.tail_estimate) : Json(nullptr);
  j["converged"] = r.converged;
  return j;
}

Json to_json(const MwSeriesReport& r) {
  Json j;
  j["p"] = r.p;
  j["weighted"] = r.weighted;
  Json rows = Json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"n", row.n}, {"term", row.term}, {"partial_sum", row.partial_sum}, {"stderr", row.std_error}});
  j["rows"] = rows;
  j["block_sums"] = r.block_sums;
  Json ratios = Json::array();
  for (double x : r.block_ratios) ratios.push_back(std::isfinite(x) ? Json(x) : Json(nullptr));
  j["block_ratios"] = ratios;
  j["converges"] = r.converges;
  j["verdict"] = r.verdict;
  return j;
}

Json to_json(const RenewalChainSpec& spec) {
  Json j;
  j["p"] = spec.p;
  j["depth"] = spec.depth;
  j["u"] = spec.u;
  j["c"] = spec.c;
  j["return_probs"] = spec.return_probs;
  j["pi0"] = spec.pi0;
  j["mean_tau"] = spec.mean_tau;
  j["var_tau"] = spec.var_tau;
  j["long_run_variance"] = spec.long_run_variance();
  return j;
}

Json to_json(const ProcessModel& model) {
  Json j;
  j["kind"] = std::string(to_string(model.kind));
  j["p"] = model.p;
  if (model.kind == ModelKind::renewal_chain) {
    j["depth"] = model.depth;
    j["start"] = model.start == ChainStart::stationary ? "stationary" : "zero";
    j["chain"] = to_json(model.chain_spec());
    return j;
  }
  j["innovation"] = std::string(to_string(model.innovation));
  j["scale"] = model.scale;
  j["arch_a"] = model.arch_a;
  j["arch_b"] = model.arch_b;
  j["coefficients"] = model.coefficients;
  return j;
}

Json to_json(const Table& table) {
  Json j;
  j["columns"] = table.columns;
  Json rows = Json::array();
  for (const auto& row : table.rows) {
    Json r = Json::array();
    for (double x : row) r.push_back(std::isfinite(x) ? Json(x) : Json(format_number(x)));
    rows.push_back(r);
  }
  j["rows"] = rows;
  return j;
}

Json to_json(const CertificationReport& report) {
  Json j;
  j["experiment"] = report.experiment;
  j["seed"] = report.seed;
  j["replicates"] = report.replicates;
  j["n_grid"] = report.n_grid;
  Json summary = Json::object();
  for (const auto& [k, v] : report.summary) summary[k] = std::isfinite(v) ? Json(v) : Json(format_number(v));
  j["summary"] = summary;
  j["per_n"] = to_json(report.per_n);
  if (!report.per_replicate.rows.empty()) j["per_replicate"] = to_json(report.per_replicate);
  j["notes"] = report.notes;
  j["pass"] = report.pass;
  j["verdict"] = report.verdict;
  return j;
}

namespace {

double number_at(const Json& doc, const std::string& key, const std::string& where) {
  const Json& v = doc.at(key);
  if (!v.is_number()) throw ConfigError(where + "." + key, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(where + "." + key, "must be finite");
  return x;
}

std::string string_at(const Json& doc, const std::string& key, const std::string& where) {
  const Json& v = doc.at(key);
  if (!v.is_string()) throw ConfigError(where + "." + key, "expected a string");
  return v.get<std::string>();
}

}  // namespace

ProcessModel model_from_json(const Json& doc, const std::string& where) {
  if (!doc.is_object()) throw ConfigError(where, "expected an object");
  static const std::set<std::string> known = {"kind",  "p",      "depth",  "coefficients", "innovation",
                                              "scale", "arch_a", "arch_b", "start",        "seed"};
  for (const auto& item : doc.items())
    if (!known.count(item.key())) throw ConfigError(where + "." + item.key(), "unknown key");
  if (!doc.contains("kind")) throw ConfigError(where + ".kind", "missing required key");

  ProcessModel model;
  try {
    model.kind = parse_model_kind(string_at(doc, "kind", where));
  } catch (const ConfigError&) {
    throw;
  } catch (const InvalidArgument& e) {
    throw ConfigError(where + ".kind", e.what());
  }
  if (doc.contains("p")) model.p = number_at(doc, "p", where);
  if (doc.contains("depth")) {
    const Json& d = doc.at("depth");
    if (!d.is_number_integer()) throw ConfigError(where + ".depth", "expected an integer");
    model.depth = d.get<int>();
  }
  if (doc.contains("start")) {
    const std::string s = string_at(doc, "start", where);
    if (s == "stationary")
      model.start = ChainStart::stationary;
    else if (s == "zero")
      model.start = ChainStart::zero;
    else
      throw ConfigError(where + ".start", "expected \"stationary\" or \"zero\"");
  }
  if (doc.contains("innovation")) {
    try {
      model.innovation = parse_innovation_law(string_at(doc, "innovation", where));
    } catch (const ConfigError&) {
      throw;
    } catch (const InvalidArgument& e) {
      throw ConfigError(where + ".innovation", e.what());
    }
  }
  if (doc.contains("scale")) model.scale = number_at(doc, "scale", where);
  if (doc.contains("arch_a")) model.arch_a = number_at(doc, "arch_a", where);
  if (doc.contains("arch_b")) model.arch_b = number_at(doc, "arch_b", where);
  if (doc.contains("coefficients")) {
    const Json& c = doc.at("coefficients");
    if (!c.is_array()) throw ConfigError(where + ".coefficients", "expected an array of numbers");
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (!c[i].is_number())
        throw ConfigError(where + ".coefficients[" + std::to_string(i) + "]", "expected a number");
      model.coefficients.push_back(c[i].get<double>());
    }
  }
  try {
    if (model.kind == ModelKind::renewal_chain) {
      model.chain = build_renewal_chain(model.p, model.depth);
    }
    model.validate();
  } catch (const CapacityError& e) {
    throw ConfigError(where + ".depth", e.what());
  } catch (const InvalidArgument& e) {
    throw ConfigError(where, e.what());
  }
  return model;
}

std::string dump(const Json& doc) { return doc.dump(2) + "\n"; }

std::string to_csv(const Table& table) {
  std::string out;
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    if (c) out += ',';
    out += table.columns[c];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      out += format_number(row[c]);
    }
    out += '\n';
  }
  return out;
}

std::string to_csv(const MwSeriesReport& report) {
  Table t;
  t.columns = {"n", "term", "partial_sum", "stderr"};
  for (const auto& r : report.rows)
    t.rows.push_back({static_cast<double>(r.n), r.term, r.partial_sum, r.std_error});
  return to_csv(t);
}

std::string partial_sums_csv(const PolygonalPath& path) {
  std::string out = "partial_sum\n";
  for (double s : path.partial_sums()) {
    out += format_number(s);
    out += '\n';
  }
  return out;
}

PolygonalPath read_partial_sums_csv(std::istream& in) {
  std::vector<double> sums;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    double x = 0.0;
    const auto res = std::from_chars(line.data(), line.data() + line.size(), x);
    if (res.ec != std::errc() || res.ptr != line.data() + line.size()) {
      if (sums.empty() && line_no == 1) continue;  // header
      throw InvalidArgument("line " + std::to_string(line_no) + ": not a number: '" + line + "'");
    }
    sums.push_back(x);
  }
  return PolygonalPath::from_partial_sums(std::move(sums));
}

void write_text_file(const std::filesystem::path& file, std::string_view content) {
  if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + file.string() + "' for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw std::runtime_error("write to '" + file.string() + "' failed");
}

}  // namespace hwip
