#include "cflow/commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include <Eigen/Core>
#include <fftw3.h>

#include "cflow/diagnostics.hpp"
#include "cflow/errors.hpp"
#include "cflow/run_config.hpp"
#include "cflow/snapshot.hpp"

namespace cflow {

namespace {

namespace fs = std::filesystem;

constexpr const char* kVersion = "0.1.0";

void write_meta(const fs::path& dir, const RunConfig& cfg, const SphereGrid& grid, double v0, bool recentered,
                const FlowState& st, const std::string& status) {
  std::ofstream out(dir / "run_meta", std::ios::binary);
  out << "cflow_version = " << kVersion << '\n';
  out << "eigen_version = " << EIGEN_WORLD_VERSION << '.' << EIGEN_MAJOR_VERSION << '.' << EIGEN_MINOR_VERSION << '\n';
  out << "fftw_version = " << fftw_version << '\n';
  out << "n = " << cfg.flow.n << '\n';
  out << "p = " << format_double(cfg.flow.p) << '\n';
  out << "direction = " << to_string(cfg.flow.direction) << '\n';
  out << "phi = " << cfg.flow.phi.describe() << '\n';
  out << "phi_is_unit = " << (cfg.flow.phi.is_unit() ? "true" : "false") << '\n';
  out << "body = " << cfg.body.describe() << '\n';
  out << "recentered = " << (recentered ? "true" : "false") << '\n';
  out << "grid = " << grid.describe() << '\n';
  out << "outside_analysed_range = " << (cfg.flow.outside_analysed_range() ? "true" : "false") << '\n';
  out << "V0 = " << format_double(v0) << '\n';
  out << "volume_floor = " << format_double(cfg.flow.volume_floor) << '\n';
  out << "status = " << status << '\n';
  out << "t_final = " << format_double(st.t) << '\n';
  out << "steps = " << st.step_count << '\n';
  out << "--- config ---\n" << cfg.text;
}

std::map<std::string, std::string> read_meta(const fs::path& path) {
  std::map<std::string, std::string> meta;
  std::ifstream in(path);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("---", 0) == 0) break;
    const auto eq = line.find(" = ");
    if (eq != std::string::npos) meta[line.substr(0, eq)] = line.substr(eq + 3);
  }
  return meta;
}

bool reached(double t, double target) { return target - t <= 1e-12 * std::max(1.0, std::abs(target)); }

}  // namespace

std::string snapshot_name(double t) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "body_t%.6f.csv", t);
  return buf;
}

int cmd_run(const std::string& config_path, const std::string& out_dir, std::ostream& log) {
  RunConfig cfg;
  GridPtr grid;
  ScalarField s0 = ScalarField::constant(SphereGrid::circle(16), 1.0);
  bool recentered = false;
  try {
    cfg = load_run_config(config_path);
    grid = build_grid(cfg.flow.n, cfg.resolution);
    s0 = initial_support(cfg, grid, &recentered);
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << '\n';
    return kExitUsage;
  }

  FlowConfig& flow = cfg.flow;
  const ConvexBody body0(s0);
  const double v0 = body0.volume();
  if (flow.direction == FlowDirection::shrinking_primal && cfg.volume_floor_fraction > 0.0)
    flow.volume_floor = cfg.volume_floor_fraction * v0;

  ScalarField start = s0;
  if (flow.direction == FlowDirection::expanding_dual) start = polar_dual(body0).support();
  if (flow.direction == FlowDirection::expanding_radial) start = support_to_radial(s0);
  FlowState st = make_state(start, flow);

  const fs::path dir(out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    log << "cannot create output directory " << out_dir << ": " << ec.message() << '\n';
    return kExitUsage;
  }
  std::ofstream csv(dir / "trajectory.csv", std::ios::binary);
  if (!csv) {
    log << "cannot write " << (dir / "trajectory.csv").string() << '\n';
    return kExitUsage;
  }
  if (recentered) log << "note: initial body recentered at its Steiner point\n";
  if (flow.outside_analysed_range()) log << "note: p >= 1 expanding run, outside the analysed range\n";

  write_csv_header(csv, flow.n);
  write_csv_row(csv, record(body0, 0.0, 0.0, flow.phi, flow.p));
  write_snapshot_file((dir / snapshot_name(0.0)).string(), s0, 0.0);

  const double inf = std::numeric_limits<double>::infinity();
  double next_csv = cfg.csv_interval > 0.0 ? cfg.csv_interval : inf;
  double next_snap = cfg.snapshot_interval > 0.0 ? cfg.snapshot_interval : inf;
  std::string status = "finished";
  int code = kExitOk;
  try {
    for (;;) {
      const double target = std::min({flow.t_end, next_csv, next_snap});
      const StepStatus s = step(st, flow, target - st.t);
      for (double mark : {flow.t_end, next_csv, next_snap})
        if (std::isfinite(mark) && reached(st.t, mark)) st.t = mark;

      bool need_body = false;
      const bool extinct = s == StepStatus::extinct;
      bool done = extinct || st.t >= flow.t_end;
      std::optional<ConvexBody> primal;
      auto primal_now = [&]() -> const ConvexBody& {
        if (!primal) primal = primal_body(st, flow);
        return *primal;
      };
      if (cfg.stop == StopRule::volume_growth && primal_now().volume() >= cfg.volume_growth * v0) done = true;

      bool write_row = cfg.csv_interval > 0.0 ? st.t == next_csv : st.step_count % cfg.csv_every == 0;
      bool write_snap = cfg.snapshot_interval > 0.0
                            ? st.t == next_snap
                            : cfg.snapshot_every > 0 && st.step_count % cfg.snapshot_every == 0;
      need_body = write_row || write_snap || done;
      if (need_body) {
        const ConvexBody& k = primal_now();
        if (write_row || done) write_csv_row(csv, record(k, st.t, st.dt_last, flow.phi, flow.p));
        if (write_snap || done) write_snapshot_file((dir / snapshot_name(st.t)).string(), k.support(), st.t);
      }
      if (st.t == next_csv) next_csv += cfg.csv_interval;
      if (st.t == next_snap) next_snap += cfg.snapshot_interval;
      if (extinct) status = "extinct";
      if (done) break;
    }
  } catch (const IntegrationFailure& e) {
    status = std::string("integration failure: ") + e.what();
    code = kExitNumerical;
  } catch (const InterpolationFailure& e) {
    status = std::string("interpolation failure: ") + e.what();
    code = kExitNumerical;
  } catch (const NonConvexError& e) {
    status = std::string("convexity lost: ") + e.what();
    code = kExitNumerical;
  } catch (const DomainError& e) {
    status = std::string("domain error: ") + e.what();
    code = kExitNumerical;
  }
  csv.close();
  write_meta(dir, cfg, *grid, v0, recentered, st, status);
  log << "run " << status << " at t = " << st.t << " after " << st.step_count << " steps\n";
  return code;
}

int cmd_verify(const std::string& suite, const SuiteOptions& opt, std::ostream& log) {
  std::vector<CheckResult> checks;
  try {
    checks = run_suite(suite, opt);
  } catch (const ConfigError& e) {
    log << "verify: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::runtime_error& e) {
    log << "verify " << suite << ": numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
  bool all = true;
  for (const auto& c : checks) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%.3e vs %.3e", c.measured, c.tolerance);
    log << (c.pass ? "PASS " : "FAIL ") << suite << ": " << c.name << ": " << buf;
    if (!c.note.empty()) log << " (" << c.note << ")";
    log << '\n';
    all = all && c.pass;
  }
  return all ? kExitOk : kExitCheckFailed;
}

int cmd_report(const std::string& csv_path, std::ostream& log) {
  std::vector<DiagnosticsRecord> traj;
  try {
    traj = read_csv_file(csv_path);
  } catch (const ConfigError& e) {
    log << "report: " << e.what() << '\n';
    return kExitUsage;
  }
  if (traj.empty()) {
    log << "report: trajectory has no rows\n";
    return kExitUsage;
  }
  const auto meta = read_meta(fs::path(csv_path).parent_path() / "run_meta");
  const bool have_meta = meta.count("p") > 0;
  const double p = have_meta ? std::stod(meta.at("p")) : std::numeric_limits<double>::quiet_NaN();
  const std::string direction = meta.count("direction") ? meta.at("direction") : "expanding_primal";
  const bool unit_phi = !meta.count("phi_is_unit") || meta.at("phi_is_unit") == "true";
  const bool shrinking = direction == "shrinking_primal";

  std::vector<BoundReport> reports{check_record_invariants(traj)};
  if (!shrinking && unit_phi) {
    reports.push_back(check_gradient_bound(traj));
    reports.push_back(check_oscillation(traj));
    reports.push_back(check_ratio_convergence(traj));
    reports.push_back(check_unit_ball_convergence(traj));
    if (have_meta && p < 1.0)
      for (auto& r : check_curvature_bounds(traj, p, default_burn_in(traj))) reports.push_back(r);
    else
      log << "note: curvature decay checks need 0 < p < 1 from run_meta\n";
  }
  if (shrinking) reports.push_back(check_width_ratio(traj));
  if (!unit_phi) log << "note: anisotropic run, Phi = 1 bound checks not applicable\n";

  bool all = true;
  for (const auto& r : reports) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%.6g vs %.6g", r.measured, r.limit);
    log << (r.skipped ? "SKIP " : r.pass ? "PASS " : "FAIL ") << r.name << ": " << (r.skipped ? "-" : buf) << " ("
        << r.detail << ")\n";
    all = all && r.pass;
  }
  log << "rows " << traj.size() << ", t_end " << traj.back().t << '\n';
  return all ? kExitOk : kExitCheckFailed;
}

}  // namespace cflow
