#include "cflow/suites.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <sstream>

#include "cflow/diagnostics.hpp"
#include "cflow/errors.hpp"
#include "cflow/flow.hpp"
#include "cflow/radii.hpp"
#include "cflow/run_config.hpp"
#include "cflow/snapshot.hpp"
#include "cflow/verification.hpp"

namespace cflow {

namespace {

using Checks = std::vector<CheckResult>;

CheckResult upper(const std::string& name, double measured, double tol, const std::string& note = {}) {
  return {name, measured, tol, measured <= tol, note};
}

GridPtr grid_for(const SuiteOptions& opt, std::vector<int> fallback) {
  return build_grid(opt.n, opt.resolution.empty() ? fallback : opt.resolution);
}

std::vector<int> default_resolution(int n, int n2, int n3_theta) {
  return n == 2 ? std::vector<int>{n2} : std::vector<int>{n3_theta, 2 * n3_theta};
}

std::vector<double> elongated_axes(int n) {
  return n == 2 ? std::vector<double>{1.0, 1.5} : std::vector<double>{1.0, 1.2, 1.5};
}

FlowConfig flow_config(int n, double p, FlowDirection d = FlowDirection::expanding_primal) {
  FlowConfig cfg;
  cfg.n = n;
  cfg.p = p;
  cfg.direction = d;
  return cfg;
}

std::string describe(const GridPtr& g) { return g->describe(); }

// Successive defects along a refinement ladder: every pair whose coarse defect
// is above the roundoff floor must shrink by at least `factor`.
CheckResult ladder_check(const std::string& name, const std::vector<std::pair<std::string, double>>& ladder,
                         double factor, double floor) {
  std::ostringstream note;
  double worst = std::numeric_limits<double>::infinity();
  int pairs = 0;
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    note << (i ? ", " : "") << ladder[i].first << ": " << ladder[i].second;
    if (i + 1 < ladder.size() && ladder[i].second > floor) {
      worst = std::min(worst, ladder[i].second / std::max(ladder[i + 1].second, 1e-300));
      ++pairs;
    }
  }
  CheckResult r{name, pairs ? worst : 0.0, factor, pairs > 0 && worst >= factor, note.str()};
  if (pairs == 0) r.note += " (no pair above the floor)";
  return r;
}

Checks suite_ball_exact(const SuiteOptions& opt) {
  Checks out;
  const auto grid = grid_for(opt, default_resolution(opt.n, 256, 64));
  const double tol = opt.tol.value_or(opt.n == 2 ? 1e-8 : 1e-6);
  std::vector<double> ps = opt.p ? std::vector<double>{*opt.p} : std::vector<double>{0.25, 0.5, 0.75};
  for (double p : ps) {
    const FlowConfig cfg = flow_config(opt.n, p);
    cfg.validate();
    FlowState st = make_state(ScalarField::constant(grid, 1.0), cfg);
    double err = 0.0;
    advance_to(st, cfg, 5.0, std::nullopt, [&](const FlowState& s) {
      const double R = ball_radius_expanding(1.0, p, s.t);
      for (double v : s.variable.values()) err = std::max(err, std::abs(v - R));
    });
    out.push_back(upper("ball p=" + std::to_string(p).substr(0, 4) + " max |s - R(t)|", err, tol,
                        describe(grid) + ", t_end = 5, " + std::to_string(st.step_count) + " steps"));
  }
  return out;
}

Checks suite_dual_crosscheck(const SuiteOptions& opt) {
  Checks out;
  const double p = opt.p.value_or(0.5);
  const FlowConfig cfg = flow_config(opt.n, p);
  cfg.validate();
  const auto axes = elongated_axes(opt.n);
  const auto grid = grid_for(opt, default_resolution(opt.n, 512, 32));
  const std::vector<double> checkpoints{0.1, 0.25, 0.5};

  const auto ell = cross_check_dual(cfg, ellipsoid_support(grid, axes), checkpoints);
  out.push_back(upper("ellipsoid dual defect", ell.max_defect, opt.tol.value_or(1e-3), describe(grid) + ", horizon 0.5"));

  Vec3 v = Vec3::Zero();
  v.x() = 0.3;
  const auto tb = cross_check_dual(cfg, translated_ball_support(grid, 1.0, v), {0.5});
  out.push_back(upper("translated ball dual defect", tb.max_defect, 1e-4, describe(grid)));

  // Joint refinement of h and dt with a fixed step that is stable on the finer grid.
  std::vector<std::pair<std::string, double>> ladder;
  const std::vector<int> levels = opt.n == 2 ? std::vector<int>{16, 32, 64} : std::vector<int>{24, 48};
  const std::vector<int> top = default_resolution(opt.n, levels.back(), levels.back());
  const auto finest = build_grid(opt.n, top);
  const double dt_finest =
      cfg.dt_safety * finest->h_min() * finest->h_min() / initial_dual_pair_dmax(cfg, ellipsoid_support(finest, axes));
  double dt = dt_finest * std::pow(2.0, static_cast<double>(levels.size() - 1));
  for (int level : levels) {
    const auto g = build_grid(opt.n, default_resolution(opt.n, level, level));
    ladder.emplace_back(g->describe(), cross_check_dual(cfg, ellipsoid_support(g, axes), {0.5}, dt).max_defect);
    dt *= 0.5;
  }
  // On S^2 the polar filter limits the joint refinement to roughly first order.
  const double factor = opt.n == 2 ? 3.0 : 1.5;
  out.push_back(ladder_check("dual defect reduction factor per doubling of N and 1/dt", ladder, factor, 1e-12));
  return out;
}

Checks suite_kaltenbach(const SuiteOptions& opt) {
  Checks out;
  if (opt.n == 2) {
    const auto grid = grid_for(opt, {512});
    const auto ell = kaltenbach_check(ConvexBody(ellipsoid_support(grid, {1.0, 2.0})));
    out.push_back(upper("ellipse (1,2) defect", ell.max_defect, opt.tol.value_or(1e-4),
                        describe(grid) + ", pairing error " + format_double(ell.max_pairing_error)));
    const auto pert = kaltenbach_check(ConvexBody(ScalarField::from_function(
        grid, [](const Vec3& z) { return 1.0 + 0.1 * harmonic_basis(2, 2, 0, z); })));
    out.push_back(upper("1 + 0.1 cos 2theta defect", pert.max_defect, 1e-3, describe(grid)));
    std::vector<std::pair<std::string, double>> ladder;
    for (int N : {64, 128, 256, 512}) {
      const auto g = SphereGrid::circle(N);
      ladder.emplace_back(g->describe(), kaltenbach_check(ConvexBody(ellipsoid_support(g, {1.0, 2.0}))).max_defect);
    }
    out.push_back(ladder_check("ellipse defect reduction factor per doubling", ladder, 2.0, 1e-10));
  } else {
    const auto grid = grid_for(opt, {64, 128});
    const std::vector<double> axes{1.0, 1.2, 1.5};
    const auto ell = kaltenbach_check(ConvexBody(ellipsoid_support(grid, axes)));
    out.push_back(upper("ellipsoid (1,1.2,1.5) defect", ell.max_defect, opt.tol.value_or(1e-2),
                        describe(grid) + ", pairing error " + format_double(ell.max_pairing_error)));
    for (int base : {24, 32}) {
      std::vector<std::pair<std::string, double>> ladder;
      for (int nt : {base, 2 * base}) {
        const auto g = SphereGrid::sphere(nt, 2 * nt);
        ladder.emplace_back(g->describe(), kaltenbach_check(ConvexBody(ellipsoid_support(g, axes))).max_defect);
      }
      out.push_back(ladder_check("ellipsoid defect reduction factor per doubling", ladder, 2.0, 1e-10));
    }
  }
  return out;
}

Checks suite_rescaling(const SuiteOptions& opt) {
  Checks out;
  const double p = opt.p.value_or(0.5);
  const FlowConfig cfg = flow_config(opt.n, p);
  cfg.validate();
  const auto grid = grid_for(opt, default_resolution(opt.n, 512, 32));
  const std::vector<double> checkpoints{0.1, 0.5, 1.0};
  const auto s0 = ellipsoid_support(grid, elongated_axes(opt.n));
  out.push_back(upper("ellipsoid a=2 defect", verify_rescaling_property(cfg, s0, 2.0, checkpoints).max_defect,
                      opt.tol.value_or(1e-5), describe(grid)));
  out.push_back(upper("ellipsoid a=1 defect", verify_rescaling_property(cfg, s0, 1.0, checkpoints).max_defect, 0.0));
  out.push_back(upper("ball a=3 defect",
                      verify_rescaling_property(cfg, ScalarField::constant(grid, 1.0), 3.0, checkpoints).max_defect,
                      1e-9));
  return out;
}

Checks suite_g_properties(const SuiteOptions& opt) {
  const double p = opt.p.value_or(0.5);
  if (!(p > 0.0)) throw ConfigError("p must be positive");
  const double tol = opt.tol.value_or(1e-8);
  const int dim = opt.n - 1;
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> logu(std::log(0.1), std::log(10.0));
  auto draw = [&] {
    std::vector<double> l(static_cast<std::size_t>(dim));
    for (double& x : l) x = std::exp(logu(rng));
    return l;
  };
  auto G = [&](const std::vector<double>& l) { return speed_G(l, p); };

  double concavity = 0.0, min_partial = std::numeric_limits<double>::infinity(), inversion = 0.0, euler = 0.0;
  for (int trial = 0; trial < opt.trials; ++trial) {
    const auto a = draw();
    const auto b = draw();
    std::vector<double> mid(a.size()), inv(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      mid[i] = 0.5 * (a[i] + b[i]);
      inv[i] = 1.0 / a[i];
    }
    const double ga = G(a);
    concavity = std::max(concavity, (0.5 * (ga + G(b)) - G(mid)) / std::max(ga, G(b)));
    inversion = std::max(inversion, std::abs(ga * G(inv) - 1.0));
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double h = 1e-5 * a[i];
      auto up = a, down = a;
      up[i] += h;
      down[i] -= h;
      const double d = (G(up) - G(down)) / (2.0 * h);
      min_partial = std::min(min_partial, d * a[i] / ga);
      sum += a[i] * d;
    }
    euler = std::max(euler, std::abs(sum - p * ga) / (p * ga));
  }
  Checks out;
  const std::string trials = std::to_string(opt.trials) + " samples, seed " + std::to_string(opt.seed);
  if (p <= 1.0)
    out.push_back(upper("property 1: midpoint concavity violation", concavity, tol, trials));
  else
    out.push_back({"property 1: midpoint concavity violation", concavity, tol, true, "not claimed for p > 1, skipped"});
  out.push_back({"property 2: min lambda_i dG/dlambda_i / G", min_partial, 0.0, min_partial > 0.0, trials});
  out.push_back(upper("property 4: max |G(l) G(1/l) - 1|", inversion, tol, trials));
  out.push_back(upper("property 5: max |sum l_i dG/dl_i - pG| / pG", euler, tol, trials));
  return out;
}

Checks suite_convergence(const SuiteOptions& opt) {
  Checks out;
  const double p = opt.p.value_or(0.5);
  FlowConfig cfg = flow_config(opt.n, p);
  cfg.validate();
  const auto grid = grid_for(opt, default_resolution(opt.n, 256, 64));
  FlowState st = make_state(ellipsoid_support(grid, elongated_axes(opt.n)), cfg);
  const Anisotropy unit;
  std::vector<DiagnosticsRecord> traj{record(st.body, 0.0, 0.0, unit, p)};
  const double v0 = st.body.volume();
  while (st.body.volume() < 1e4 * v0) {
    step(st, cfg);
    traj.push_back(record(st.body, st.t, st.dt_last, unit, p));
  }
  const auto& last = traj.back();
  const std::string where = describe(grid) + ", t_end = " + std::to_string(last.t);
  out.push_back(upper("dev_unit at V x 1e4", last.dev_unit, opt.tol.value_or(0.02), where));
  out.push_back(upper("max |lambda(s~) - 1|", rescaled_radii_deviation(last), 0.05, where));
  out.push_back(upper("ratio - 1", last.ratio - 1.0, 0.01, where));
  for (const auto& r : {check_gradient_bound(traj), check_oscillation(traj), check_ratio_convergence(traj)})
    out.push_back({r.name, r.measured, r.limit, r.pass, r.detail});
  if (p < 1.0)
    for (const auto& r : check_curvature_bounds(traj, p, default_burn_in(traj)))
      out.push_back({r.name, r.measured, r.limit, r.pass, r.detail});
  return out;
}

Checks suite_shrinking_widths(const SuiteOptions& opt) {
  Checks out;
  const auto grid = grid_for(opt, default_resolution(opt.n, 256, 32));
  {
    const double p = opt.p.value_or(0.5);
    FlowConfig cfg = flow_config(opt.n, p, FlowDirection::shrinking_primal);
    FlowState st = make_state(ScalarField::constant(grid, 1.0), cfg);
    cfg.volume_floor = 1e-9 * st.body.volume();
    cfg.validate();
    while (step(st, cfg) != StepStatus::extinct) {
    }
    const double T = ball_extinction_time(1.0, p);
    out.push_back({"ball extinction: T - t_halt", T - st.t, 1e-4, st.t < T && T - st.t <= 1e-4,
                   "T = " + std::to_string(T) + ", halted at " + std::to_string(st.t)});
  }
  {
    const double p = opt.p.value_or(0.9);
    FlowConfig cfg = flow_config(opt.n, p, FlowDirection::shrinking_primal);
    FlowState st = make_state(ellipsoid_support(grid, elongated_axes(opt.n)), cfg);
    cfg.volume_floor = (opt.n == 2 ? 1e-3 : 1e-2) * st.body.volume();
    cfg.validate();
    const Anisotropy unit;
    std::vector<DiagnosticsRecord> traj{record(st.body, 0.0, 0.0, unit, p)};
    double inclusion = check_minkowski_inclusion(st.body).measured;
    const int every = opt.n == 2 ? 10 : 50;
    for (;;) {
      const auto status = step(st, cfg);
      if (st.step_count % every == 0 || status == StepStatus::extinct) {
        traj.push_back(record(st.body, st.t, st.dt_last, unit, p));
        inclusion = std::max(inclusion, check_minkowski_inclusion(st.body).measured / st.body.support_max());
      }
      if (status == StepStatus::extinct) break;
    }
    const double lo = (opt.n - 1.0) / (opt.n + 1.0);
    const auto w = check_width_ratio(traj);
    std::string note = w.detail + ", " + std::to_string(traj.size()) + " records";
    if (!(p > lo && p < 1.0)) note += " (p outside ((n-1)/(n+1), 1): boundedness not claimed)";
    out.push_back({"ellipsoid sup width ratio", w.measured, w.limit, w.pass, note});
    out.push_back(upper("Minkowski inclusion violation / s_max", inclusion, 1e-10, "every recorded step"));
  }
  return out;
}

const std::map<std::string, std::function<Checks(const SuiteOptions&)>>& registry() {
  static const std::map<std::string, std::function<Checks(const SuiteOptions&)>> r{
      {"ball-exact", suite_ball_exact},         {"dual-crosscheck", suite_dual_crosscheck},
      {"kaltenbach", suite_kaltenbach},         {"rescaling", suite_rescaling},
      {"g-properties", suite_g_properties},     {"convergence", suite_convergence},
      {"shrinking-widths", suite_shrinking_widths}};
  return r;
}

}  // namespace

std::vector<std::string> suite_names() {
  std::vector<std::string> names;
  for (const auto& [k, v] : registry()) names.push_back(k);
  return names;
}

std::vector<CheckResult> run_suite(const std::string& name, const SuiteOptions& opt) {
  const auto it = registry().find(name);
  if (it == registry().end()) throw ConfigError("unknown suite '" + name + "'");
  if (opt.n != 2 && opt.n != 3) throw ConfigError("--n must be 2 or 3");
  if (opt.trials < 1) throw ConfigError("--trials must be positive");
  return it->second(opt);
}

}  // namespace cflow
