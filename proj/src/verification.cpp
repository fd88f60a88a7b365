#include "cflow/verification.hpp"

#include <algorithm>
#include <cmath>

#include "cflow/errors.hpp"

namespace cflow {

namespace {

double sup_distance(std::span<const double> a, std::span<const double> b, double scale_by = 1.0) {
  double d = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) d = std::max(d, std::abs(scale_by * a[k] - b[k]));
  return d;
}

std::vector<double> sorted_checkpoints(std::vector<double> ts) {
  std::sort(ts.begin(), ts.end());
  for (double t : ts)
    if (!(t >= 0.0)) throw ConfigError("checkpoints must be non-negative");
  return ts;
}

}  // namespace

PairedRunReport verify_rescaling_property(const FlowConfig& cfg, const ScalarField& s0, double a,
                                          const std::vector<double>& checkpoints) {
  if (!(a > 0.0)) throw ConfigError("rescaling factor must be positive");
  FlowConfig c = cfg;
  c.direction = FlowDirection::expanding_primal;
  const double n = c.n;
  const double space = std::pow(a, 1.0 / n);
  const double time = std::pow(a, (c.p - 1.0) / n);

  std::vector<double> scaled(s0.values().begin(), s0.values().end());
  for (double& v : scaled) v *= space;

  FlowState base = make_state(s0, c);
  FlowState other = make_state(ScalarField(s0.grid_ptr(), std::move(scaled)), c);
  PairedRunReport rep;
  for (double t : sorted_checkpoints(checkpoints)) {
    advance_to(base, c, time * t);
    advance_to(other, c, t);
    const double scale = other.body.support_max();
    const double d = sup_distance(base.variable.values(), other.variable.values(), space) / scale;
    rep.checkpoints.push_back({t, d});
    rep.max_defect = std::max(rep.max_defect, d);
  }
  return rep;
}

double initial_dual_pair_dmax(const FlowConfig& cfg, const ScalarField& s0) {
  FlowConfig primal = cfg;
  primal.direction = FlowDirection::expanding_primal;
  FlowConfig dual = cfg;
  dual.direction = FlowDirection::expanding_dual;
  const ConvexBody body(s0);
  const ConvexBody body_dual = polar_dual(body);
  return std::max(evaluate_tendency(body, s0, primal).d_max,
                  evaluate_tendency(body_dual, body_dual.support(), dual).d_max);
}

PairedRunReport cross_check_dual(const FlowConfig& cfg, const ScalarField& s0, const std::vector<double>& checkpoints,
                                 std::optional<double> fixed_dt) {
  FlowConfig primal_cfg = cfg;
  primal_cfg.direction = FlowDirection::expanding_primal;
  FlowConfig dual_cfg = cfg;
  dual_cfg.direction = FlowDirection::expanding_dual;

  FlowState primal = make_state(s0, primal_cfg);
  FlowState dual = make_state(polar_dual(primal.body).support(), dual_cfg);
  PairedRunReport rep;
  for (double t : sorted_checkpoints(checkpoints)) {
    advance_to(primal, primal_cfg, t, fixed_dt);
    advance_to(dual, dual_cfg, t, fixed_dt);
    const double d = sup_distance(polar_dual(primal.body).support().values(), dual.variable.values());
    rep.checkpoints.push_back({t, d});
    rep.max_defect = std::max(rep.max_defect, d);
  }
  return rep;
}

}  // namespace cflow
