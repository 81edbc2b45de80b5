#include "cli.hpp"

#include "hwip/errors.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;
using namespace hwip;
using namespace hwip::cli;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args, const Environment& env = {}) {
  args.insert(args.begin(), "hwip");
  std::ostringstream out, err;
  const int code = main_entry(args, env, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("hwip_cli_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path write_config(const fs::path& dir, const std::string& text) {
  const fs::path file = dir / "config.json";
  std::ofstream(file) << text;
  return file;
}

}  // namespace

TEST_CASE("help exits cleanly, missing subcommand is a usage error") {
  CHECK(run({"--help"}).code == kPass);
  CHECK(run({}).code == kConfigError);
  CHECK(run({"simulate", "--format", "xml"}).code == kConfigError);
}

TEST_CASE("config errors name the offending key path") {
  const fs::path dir = scratch("errors");
  Run r = run({"simulate", "--config", write_config(dir, R"({"bogus": 1})").string(), "--out", dir.string()});
  CHECK(r.code == kConfigError);
  CHECK(r.err.find("config.bogus") != std::string::npos);

  r = run({"simulate", "--config", write_config(dir, R"({"model": {"kind": "iid", "scal": 2}})").string()});
  CHECK(r.code == kConfigError);
  CHECK(r.err.find("config.model.scal") != std::string::npos);

  r = run({"simulate", "--config", write_config(dir, R"({"n": "many"})").string(), "--out", dir.string()});
  CHECK(r.code == kConfigError);
  CHECK(r.err.find("config.n") != std::string::npos);

  r = run({"simulate", "--config", write_config(dir, R"({"n": 8,)").string()});
  CHECK(r.code == kConfigError);
  CHECK(r.err.find("config") != std::string::npos);

  r = run({"certify", "--suite", "martingale", "--n", "64", "--out", dir.string()});
  CHECK(r.code == kConfigError);
  CHECK(r.err.find("config.n") != std::string::npos);

  r = run({"certify", "--suite", "nope", "--out", dir.string()});
  CHECK(r.code == kConfigError);
  CHECK(r.err.find("config.suite") != std::string::npos);

  r = run({"simulate", "--out", dir.string()}, Environment{std::string("seven"), std::nullopt});
  CHECK(r.code == kConfigError);
  CHECK(r.err.find("env.HWIP_SEED") != std::string::npos);
}

TEST_CASE("capacity errors exit with code 2") {
  const fs::path dir = scratch("capacity");
  const Run r = run({"counterexample", "--depth", "7", "--out", dir.string()});
  CHECK(r.code == kConfigError);
  CHECK(r.err.find("k = 6") != std::string::npos);
}

TEST_CASE("precedence: flags over environment over config file") {
  const Json file = {{"seed", 11}, {"threads", 2}, {"n", 16}};
  const Environment env{std::string("13"), std::string("3")};

  RunConfig c = resolve("simulate", file, Json::object(), Environment{});
  CHECK(c.seed == 11);
  CHECK(c.threads == 2);

  c = resolve("simulate", file, Json::object(), env);
  CHECK(c.seed == 13);
  CHECK(c.threads == 3);

  c = resolve("simulate", file, Json{{"seed", 17}, {"threads", 1}, {"n", 32}}, env);
  CHECK(c.seed == 17);
  CHECK(c.threads == 1);
  CHECK(c.doc["n"] == 32);

  c = resolve("simulate", Json::object(), Json::object(), Environment{});
  CHECK(c.seed == 7);

  CHECK_THROWS_AS(resolve("simulate", Json::array(), Json::object(), Environment{}), ConfigError);
  CHECK_THROWS_AS(resolve("simulate", Json{{"subcommand", "norms"}}, Json::object(), Environment{}), ConfigError);
}

TEST_CASE("embedded config leaves out threads and the output directory") {
  const RunConfig c =
      resolve("simulate", Json{{"threads", 4}, {"out", "x"}, {"format", "json"}, {"n", 8}}, Json::object(), {});
  CHECK_FALSE(c.doc.contains("threads"));
  CHECK_FALSE(c.doc.contains("out"));
  CHECK_FALSE(c.doc.contains("format"));
  CHECK(c.doc["seed"] == 7);
  CHECK(c.out == fs::path("x"));
  CHECK(c.format == Format::json);
}

TEST_CASE("outputs are byte-identical across thread counts") {
  const fs::path a = scratch("threads_a");
  const fs::path b = scratch("threads_b");
  const std::vector<std::string> base = {"certify", "--suite", "dyadic-lemma", "--replicates", "20", "--n-max", "64",
                                         "--seed", "5"};
  auto args_a = base;
  args_a.insert(args_a.end(), {"--threads", "1", "--out", a.string()});
  auto args_b = base;
  args_b.insert(args_b.end(), {"--out", b.string()});
  const Run ra = run(args_a);
  const Run rb = run(args_b, Environment{std::nullopt, std::string("3")});
  REQUIRE(ra.code == kPass);
  REQUIRE(rb.code == kPass);
  CHECK(ra.out == rb.out);
  std::size_t files = 0;
  for (const auto& entry : fs::directory_iterator(a)) {
    ++files;
    CHECK(slurp(entry.path()) == slurp(b / entry.path().filename()));
  }
  CHECK(files >= 3);
}

TEST_CASE("artifacts embed the config and summaries trace to JSON fields") {
  const fs::path dir = scratch("artifacts");
  const Run r = run({"simulate", "--n", "32", "--replicates", "3", "--seed", "9", "--out", dir.string()});
  REQUIRE(r.code == kPass);
  const Json doc = Json::parse(slurp(dir / "simulate.json"));
  CHECK(doc["config"]["seed"] == 9);
  CHECK(doc["config"]["n"] == 32);
  CHECK(doc["config"]["model"]["kind"] == "iid");
  CHECK(doc["pass"] == true);
  const Json& summary = doc["reports"][0]["summary"];
  for (const auto& [key, value] : summary.items())
    CHECK(r.out.find(key + " = " + format_number(value.get<double>())) != std::string::npos);

  const std::string csv = slurp(dir / "simulate_paths.csv");
  REQUIRE(csv.rfind("# config=", 0) == 0);
  CHECK(csv.find(doc["config"].dump()) != std::string::npos);
  CHECK(slurp(dir / "simulate_summary.txt") == r.out);
}

TEST_CASE("format selects the artifact kinds") {
  const fs::path j = scratch("format_json");
  REQUIRE(run({"simulate", "--n", "8", "--format", "json", "--out", j.string()}).code == kPass);
  CHECK(fs::exists(j / "simulate.json"));
  CHECK_FALSE(fs::exists(j / "simulate_paths.csv"));
  const fs::path c = scratch("format_csv");
  REQUIRE(run({"simulate", "--n", "8", "--format", "csv", "--out", c.string()}).code == kPass);
  CHECK_FALSE(fs::exists(c / "simulate.json"));
  CHECK(fs::exists(c / "simulate_paths.csv"));
}

TEST_CASE("norms and certify suites run end to end") {
  const fs::path dir = scratch("suites");
  Run r = run({"norms", "--model", "martingale_difference", "--J", "20", "--out", dir.string()});
  CHECK(r.code == kPass);
  CHECK(r.out.find("[mw_norm]") != std::string::npos);

  r = run({"norms", "--model", "renewal_chain", "--p", "3", "--J", "6", "--N", "64", "--out", dir.string()});
  CHECK(r.code == kPass);
  CHECK(r.out.find("[mw_series]") != std::string::npos);

  r = run({"certify", "--suite", "renewal-identity", "--replicates", "20", "--length", "500", "--out", dir.string()});
  CHECK(r.code == kPass);
  const Json doc = Json::parse(slurp(dir / "certify.json"));
  CHECK(doc["config"]["suite"] == "renewal-identity");
  CHECK(doc["results"]["chain"]["u"] == Json({1, 2, 7, 131}));
}

TEST_CASE("report re-renders a stored artifact and propagates its verdict") {
  const fs::path dir = scratch("report");
  const Run first = run({"simulate", "--n", "16", "--out", dir.string()});
  REQUIRE(first.code == kPass);
  const Run again = run({"report", "--input", (dir / "simulate.json").string(), "--out", dir.string()});
  CHECK(again.code == kPass);
  CHECK(again.out == first.out);

  Json doc = Json::parse(slurp(dir / "simulate.json"));
  doc["pass"] = false;
  doc["reports"][0]["pass"] = false;
  std::ofstream(dir / "failed.json") << doc.dump();
  const Run failed = run({"report", "--input", (dir / "failed.json").string(), "--out", dir.string()});
  CHECK(failed.code == kFail);
  CHECK(failed.out.find("overall: FAIL") != std::string::npos);

  CHECK(run({"report", "--out", dir.string()}).code == kConfigError);
  std::ofstream(dir / "junk.json") << "{";
  CHECK(run({"report", "--input", (dir / "junk.json").string(), "--out", dir.string()}).code == kConfigError);
}
