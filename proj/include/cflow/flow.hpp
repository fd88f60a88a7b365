#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cflow/anisotropy.hpp"
#include "cflow/convex_body.hpp"

namespace cflow {

enum class FlowDirection { expanding_primal, expanding_dual, expanding_radial, shrinking_primal };

std::string to_string(FlowDirection d);
/// Throws ConfigError for unknown names.
FlowDirection parse_direction(const std::string& name);

struct FlowConfig {
  int n = 2;
  double p = 0.5;
  FlowDirection direction = FlowDirection::expanding_primal;
  Anisotropy phi;
  double t_end = 1.0;
  double dt_safety = 0.2;
  // Shrinking flow halts once V drops below this (required > 0 there).
  double volume_floor = 0.0;
  int max_halvings = 20;
  // Longitudinal filter of the tendency near the poles (n = 3 only).
  bool polar_filter = true;

  double beta() const { return p / (n - 1); }
  /// p >= 1 expanding runs are accepted but lie outside the analysed range.
  bool outside_analysed_range() const;
  /// Throws ConfigError.
  void validate() const;
};

/// Per-node speeds. Each throws NonConvexError / DomainError when its argument
/// is not a valid (dual) support function.
ScalarField rhs_expanding(const ScalarField& s, const FlowConfig& cfg);
ScalarField rhs_shrinking(const ScalarField& s, const FlowConfig& cfg);
ScalarField rhs_dual(const ScalarField& s_dual, const FlowConfig& cfg);
ScalarField rhs_radial(const ScalarField& r, const FlowConfig& cfg);

/// Time derivative of the evolved variable together with the largest
/// eigenvalue D_max of its linearized diffusion tensor.
struct Tendency {
  std::vector<double> rate;
  double d_max = 0.0;
};
Tendency evaluate_tendency(const ConvexBody& body, const ScalarField& variable, const FlowConfig& cfg);

/// The evolved variable is s (primal flows), s° (dual) or r (radial). `body`
/// is the convex body whose support function the variable determines: K for
/// primal flows, K° for the dual and radial flows.
struct FlowState {
  double t = 0.0;
  ScalarField variable;
  ConvexBody body;
  double dt_last = 0.0;
  long step_count = 0;
};

/// Support function of the body evolved by cfg.direction, built from the
/// variable (identity, or 1/r for the radial flow).
ConvexBody body_for_variable(const ScalarField& variable, FlowDirection direction);
FlowState make_state(const ScalarField& variable, const FlowConfig& cfg, double t0 = 0.0);

/// The primal body K_t of a state (polar dual for the dual and radial flows).
ConvexBody primal_body(const FlowState& state, const FlowConfig& cfg);

/// c_safe * h_min^2 / D_max.
double stable_dt(const SphereGrid& grid, double d_max, const FlowConfig& cfg);

enum class StepStatus { advanced, extinct };

/// One classical RK4 step of size min(stable dt, dt_cap) (or exactly fixed_dt).
/// A stage or result that is non-convex or non-finite halves the step, up to
/// cfg.max_halvings times, then IntegrationFailure. For the shrinking flow the
/// step is still taken but `extinct` is returned once V < cfg.volume_floor.
StepStatus step(FlowState& state, const FlowConfig& cfg, std::optional<double> dt_cap = std::nullopt,
                std::optional<double> fixed_dt = std::nullopt);

/// Steps until state.t == t_target exactly (the last step is clipped). With
/// fixed_dt every step uses that size except the clipped last one. `after_step`
/// runs after every accepted step. Returns extinct if the floor was crossed.
StepStatus advance_to(FlowState& state, const FlowConfig& cfg, double t_target,
                      std::optional<double> fixed_dt = std::nullopt,
                      const std::function<void(const FlowState&)>& after_step = {});

/// Exact ball radii for Phi = 1.
double ball_radius_expanding(double r0, double p, double t);
double ball_radius_shrinking(double r0, double p, double t);
double ball_extinction_time(double r0, double p);

}  // namespace cflow
