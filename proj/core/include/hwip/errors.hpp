#pragma once

#include <stdexcept>
#include <string>

namespace hwip {

// A computation would exceed a configured size budget (integer range, DP
// length, state-table size, simulation step count). The message names the
// offending quantity so callers can shrink n, depth or replicates.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The requested (model, operator) pair has no closed-form oracle.
class CapabilityError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Precondition violated by caller-supplied arguments.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A configuration document does not match the schema; key_path names the
// offending field ("model.coefficients[2]").
class ConfigError : public InvalidArgument {
 public:
  ConfigError(std::string key_path, const std::string& message)
      : InvalidArgument(key_path + ": " + message), key_path_(std::move(key_path)) {}
  const std::string& key_path() const noexcept { return key_path_; }

 private:
  std::string key_path_;
};

}  // namespace hwip
