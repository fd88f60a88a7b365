#include "cflow/flow.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cflow/errors.hpp"
#include "cflow/sphere_calculus.hpp"

namespace cflow {

namespace {

bool is_primal(FlowDirection d) {
  return d == FlowDirection::expanding_primal || d == FlowDirection::shrinking_primal;
}

std::vector<double> reciprocal(std::span<const double> v) {
  std::vector<double> out(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) out[k] = 1.0 / v[k];
  return out;
}

// rhs_dual on an already assembled dual body; also reports D_max.
Tendency dual_tendency(const ConvexBody& dual, const FlowConfig& cfg) {
  const auto& g = dual.grid();
  const auto& sd = dual.support();
  const double beta = cfg.beta();
  const double n = cfg.n;
  const double q_exp = (n + 1.0) * beta + 1.0;  // (s°^2 + |grad s°|^2) enters with half this power
  const double s_exp = (n + 1.0) * beta - 1.0;
  Tendency out;
  out.rate.resize(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) {
    const Vec3& y = dual.boundary_points()[k];
    const double q2 = sd[k] * sd[k] + dual.gradient_normsq()[k];
    const double rate = -cfg.phi(y / std::sqrt(q2)) * std::pow(q2, 0.5 * q_exp) / std::pow(sd[k], s_exp) *
                        std::pow(dual.radii().det[k], -beta);
    out.rate[k] = rate;
    out.d_max = std::max(out.d_max, beta * std::abs(rate) / dual.radii().lambda_min[k]);
  }
  return out;
}

Tendency primal_tendency(const ConvexBody& body, const FlowConfig& cfg) {
  const auto& g = body.grid();
  const double beta = cfg.beta();
  const bool shrinking = cfg.direction == FlowDirection::shrinking_primal;
  Tendency out;
  out.rate.resize(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double S = body.radii().det[k];
    const double rate = shrinking ? -cfg.phi(g.node(k)) * std::pow(S, -beta) : cfg.phi(g.node(k)) * std::pow(S, beta);
    out.rate[k] = rate;
    out.d_max = std::max(out.d_max, beta * std::abs(rate) / body.radii().lambda_min[k]);
  }
  return out;
}

void require_finite(std::span<const double> v) {
  for (double x : v)
    if (!std::isfinite(x)) throw DomainError("non-finite value in flow state");
}

}  // namespace

std::string to_string(FlowDirection d) {
  switch (d) {
    case FlowDirection::expanding_primal:
      return "expanding_primal";
    case FlowDirection::expanding_dual:
      return "expanding_dual";
    case FlowDirection::expanding_radial:
      return "expanding_radial";
    case FlowDirection::shrinking_primal:
      return "shrinking_primal";
  }
  return "expanding_primal";
}

FlowDirection parse_direction(const std::string& name) {
  for (auto d : {FlowDirection::expanding_primal, FlowDirection::expanding_dual, FlowDirection::expanding_radial,
                 FlowDirection::shrinking_primal})
    if (to_string(d) == name) return d;
  throw ConfigError("unknown flow direction '" + name + "'");
}

bool FlowConfig::outside_analysed_range() const {
  return direction != FlowDirection::shrinking_primal && p >= 1.0;
}

void FlowConfig::validate() const {
  if (n != 2 && n != 3) throw ConfigError("n must be 2 or 3");
  if (!(p > 0.0) || !std::isfinite(p)) throw ConfigError("p must be positive");
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw ConfigError("t_end must be positive");
  if (!(dt_safety > 0.0 && dt_safety <= 1.0)) throw ConfigError("dt_safety must lie in (0, 1]");
  if (max_halvings < 0) throw ConfigError("max_halvings must be non-negative");
  if (direction == FlowDirection::shrinking_primal && !(volume_floor > 0.0))
    throw ConfigError("the shrinking flow needs volume_floor > 0");
  if (!(phi.infimum() > 0.0)) throw ConfigError("anisotropy must be positive");
}

ScalarField rhs_expanding(const ScalarField& s, const FlowConfig& cfg) {
  FlowConfig c = cfg;
  c.direction = FlowDirection::expanding_primal;
  return ScalarField(s.grid_ptr(), primal_tendency(ConvexBody(s), c).rate);
}

ScalarField rhs_shrinking(const ScalarField& s, const FlowConfig& cfg) {
  FlowConfig c = cfg;
  c.direction = FlowDirection::shrinking_primal;
  return ScalarField(s.grid_ptr(), primal_tendency(ConvexBody(s), c).rate);
}

ScalarField rhs_dual(const ScalarField& s_dual, const FlowConfig& cfg) {
  return ScalarField(s_dual.grid_ptr(), dual_tendency(ConvexBody(s_dual), cfg).rate);
}

ScalarField rhs_radial(const ScalarField& r, const FlowConfig& cfg) {
  FlowConfig c = cfg;
  c.direction = FlowDirection::expanding_radial;
  const ConvexBody dual = body_for_variable(r, c.direction);
  return ScalarField(r.grid_ptr(), evaluate_tendency(dual, r, c).rate);
}

Tendency evaluate_tendency(const ConvexBody& body, const ScalarField& variable, const FlowConfig& cfg) {
  Tendency out;
  switch (cfg.direction) {
    case FlowDirection::expanding_primal:
    case FlowDirection::shrinking_primal:
      out = primal_tendency(body, cfg);
      break;
    case FlowDirection::expanding_dual:
      out = dual_tendency(body, cfg);
      break;
    case FlowDirection::expanding_radial: {
      // r = 1 / s°, so dr/dt = -r^2 ds°/dt; the principal part keeps D_max.
      out = dual_tendency(body, cfg);
      for (std::size_t k = 0; k < out.rate.size(); ++k) out.rate[k] *= -variable[k] * variable[k];
      break;
    }
  }
  if (cfg.n == 3 && cfg.polar_filter) polar_filter(body.grid(), out.rate);
  return out;
}

ConvexBody body_for_variable(const ScalarField& variable, FlowDirection direction) {
  if (direction != FlowDirection::expanding_radial) return ConvexBody(variable);
  for (std::size_t k = 0; k < variable.size(); ++k)
    if (!(variable[k] > 0.0)) throw DomainError("radial function must be positive");
  return ConvexBody(ScalarField(variable.grid_ptr(), reciprocal(variable.values())));
}

FlowState make_state(const ScalarField& variable, const FlowConfig& cfg, double t0) {
  return FlowState{t0, variable, body_for_variable(variable, cfg.direction), 0.0, 0};
}

ConvexBody primal_body(const FlowState& state, const FlowConfig& cfg) {
  if (is_primal(cfg.direction)) return state.body;
  return polar_dual(state.body);
}

double stable_dt(const SphereGrid& grid, double d_max, const FlowConfig& cfg) {
  if (!(d_max > 0.0) || !std::isfinite(d_max)) throw DomainError("degenerate diffusion bound");
  const double h = grid.h_min();
  return cfg.dt_safety * h * h / d_max;
}

StepStatus step(FlowState& state, const FlowConfig& cfg, std::optional<double> dt_cap, std::optional<double> fixed_dt) {
  const auto& grid = state.body.grid();
  const auto gp = state.variable.grid_ptr();
  const std::size_t m = grid.size();
  const auto y0 = state.variable.values();

  const Tendency k1 = evaluate_tendency(state.body, state.variable, cfg);
  double dt = fixed_dt ? *fixed_dt : stable_dt(grid, k1.d_max, cfg);
  if (dt_cap) dt = std::min(dt, *dt_cap);
  if (!(dt > 0.0)) throw IntegrationFailure("non-positive time step");

  auto stage_field = [&](const std::vector<double>& k, double factor) {
    std::vector<double> y(m);
    for (std::size_t i = 0; i < m; ++i) y[i] = y0[i] + factor * k[i];
    require_finite(y);
    return ScalarField(gp, std::move(y));
  };

  std::string last_error;
  for (int attempt = 0; attempt <= cfg.max_halvings; ++attempt, dt *= 0.5) {
    try {
      const ScalarField y2 = stage_field(k1.rate, 0.5 * dt);
      const Tendency k2 = evaluate_tendency(body_for_variable(y2, cfg.direction), y2, cfg);
      const ScalarField y3 = stage_field(k2.rate, 0.5 * dt);
      const Tendency k3 = evaluate_tendency(body_for_variable(y3, cfg.direction), y3, cfg);
      const ScalarField y4 = stage_field(k3.rate, dt);
      const Tendency k4 = evaluate_tendency(body_for_variable(y4, cfg.direction), y4, cfg);

      std::vector<double> y(m);
      for (std::size_t i = 0; i < m; ++i)
        y[i] = y0[i] + dt / 6.0 * (k1.rate[i] + 2.0 * k2.rate[i] + 2.0 * k3.rate[i] + k4.rate[i]);
      require_finite(y);
      ScalarField next(gp, std::move(y));
      ConvexBody body = body_for_variable(next, cfg.direction);

      state.t += dt;
      state.variable = std::move(next);
      state.body = std::move(body);
      state.dt_last = dt;
      ++state.step_count;
      if (cfg.direction == FlowDirection::shrinking_primal && state.body.volume() < cfg.volume_floor)
        return StepStatus::extinct;
      return StepStatus::advanced;
    } catch (const NonConvexError& e) {
      last_error = e.what();
    } catch (const DomainError& e) {
      last_error = e.what();
    }
  }
  std::ostringstream os;
  os << "step rejected " << cfg.max_halvings + 1 << " times at t = " << state.t << ": " << last_error;
  throw IntegrationFailure(os.str());
}

StepStatus advance_to(FlowState& state, const FlowConfig& cfg, double t_target, std::optional<double> fixed_dt,
                      const std::function<void(const FlowState&)>& after_step) {
  while (state.t < t_target) {
    const double remaining = t_target - state.t;
    StepStatus status;
    if (fixed_dt && *fixed_dt < remaining * (1.0 - 1e-12))
      status = step(state, cfg, std::nullopt, fixed_dt);
    else if (fixed_dt)
      status = step(state, cfg, std::nullopt, remaining);
    else
      status = step(state, cfg, remaining);
    if (state.t > t_target - 1e-14 * std::max(1.0, std::abs(t_target))) state.t = t_target;
    if (after_step) after_step(state);
    if (status == StepStatus::extinct) return status;
  }
  return StepStatus::advanced;
}

double ball_radius_expanding(double r0, double p, double t) {
  if (p == 1.0) return r0 * std::exp(t);
  return std::pow(std::pow(r0, 1.0 - p) + (1.0 - p) * t, 1.0 / (1.0 - p));
}

double ball_radius_shrinking(double r0, double p, double t) {
  const double base = std::pow(r0, 1.0 + p) - (1.0 + p) * t;
  return base > 0.0 ? std::pow(base, 1.0 / (1.0 + p)) : 0.0;
}

double ball_extinction_time(double r0, double p) { return std::pow(r0, 1.0 + p) / (1.0 + p); }

}  // namespace cflow
