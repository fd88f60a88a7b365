#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cflow {

struct SuiteOptions {
  int n = 2;
  std::optional<double> p;
  std::vector<int> resolution;  // empty: suite default
  int trials = 1000;
  std::uint64_t seed = 7;
  std::optional<double> tol;  // overrides the primary tolerance of the suite
};

struct CheckResult {
  std::string name;
  double measured = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string note;
};

std::vector<std::string> suite_names();

/// Runs one verification suite. Throws ConfigError for an unknown suite or
/// options the suite does not support.
std::vector<CheckResult> run_suite(const std::string& name, const SuiteOptions& opt);

}  // namespace cflow
