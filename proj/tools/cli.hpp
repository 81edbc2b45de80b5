#pragma once

#include "hwip/io.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace hwip::cli {

enum class Format { json, csv, both };

/// Fully resolved run. `doc` holds every experiment parameter after
/// flags > environment > config-file precedence; it is what gets embedded
/// in the artifacts (threads and the output directory are left out, since
/// they must not change output bytes).
struct RunConfig {
  std::string subcommand;
  Json doc = Json::object();
  std::uint64_t seed = 7;
  unsigned threads = 1;
  std::filesystem::path out = "hwip-out";
  Format format = Format::both;
};

struct Environment {
  std::optional<std::string> seed;     // HWIP_SEED
  std::optional<std::string> threads;  // HWIP_THREADS
  static Environment from_process();
};

enum ExitCode : int { kPass = 0, kFail = 1, kConfigError = 2 };

/// Parses argv, resolves the config and executes it.
int main_entry(const std::vector<std::string>& args, const Environment& env, std::ostream& out, std::ostream& err);

/// Throws ConfigError naming the key path on schema violations.
RunConfig resolve(const std::string& subcommand, const Json& file_doc, const Json& flag_doc, const Environment& env);

/// Runs the pipeline and writes artifacts; returns kPass or kFail.
int execute(const RunConfig& config, std::ostream& out);

}  // namespace hwip::cli
