#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cflow/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Anisotropic Gauss curvature flows of convex bodies"};
  app.require_subcommand(1);

  std::string config;
  std::string out_dir;
  auto* run = app.add_subcommand("run", "integrate a configured flow");
  run->add_option("--config", config, "run configuration file")->required();
  run->add_option("--out", out_dir, "output directory")->required();

  std::string suite;
  cflow::SuiteOptions opt;
  double p = 0.0;
  double tol = 0.0;
  auto* verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("suite", suite, "suite name")->required();
  verify->add_option("--n", opt.n, "ambient dimension")->check(CLI::IsMember({2, 3}));
  auto* p_opt = verify->add_option("--p", p, "power");
  verify->add_option("--resolution", opt.resolution, "grid resolution (N, or N_theta N_phi)");
  verify->add_option("--trials", opt.trials, "random trials")->check(CLI::PositiveNumber);
  verify->add_option("--seed", opt.seed, "RNG seed");
  auto* tol_opt = verify->add_option("--tol", tol, "primary tolerance")->check(CLI::PositiveNumber);

  std::string csv;
  auto* report = app.add_subcommand("report", "check a trajectory against the a-priori bounds");
  report->add_option("csv", csv, "trajectory.csv")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : cflow::kExitUsage;
  }

  if (*run) return cflow::cmd_run(config, out_dir, std::cerr);
  if (*verify) {
    if (*p_opt) opt.p = p;
    if (*tol_opt) opt.tol = tol;
    return cflow::cmd_verify(suite, opt, std::cout);
  }
  return cflow::cmd_report(csv, std::cout);
}
