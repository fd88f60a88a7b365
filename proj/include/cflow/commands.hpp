#pragma once

#include <iosfwd>
#include <string>

#include "cflow/suites.hpp"

namespace cflow {

// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumerical = 3;

/// Runs a configured flow into out_dir: trajectory.csv, body_t<t>.csv
/// snapshots and run_meta. Config errors are reported before anything is
/// written.
int cmd_run(const std::string& config_path, const std::string& out_dir, std::ostream& log);

int cmd_verify(const std::string& suite, const SuiteOptions& opt, std::ostream& log);

/// Offline bound report on a trajectory CSV. Reads p and the flow direction
/// from a run_meta file next to it when present.
int cmd_report(const std::string& csv_path, std::ostream& log);

/// Name of the snapshot file for time t ("body_t1.500000.csv").
std::string snapshot_name(double t);

}  // namespace cflow
