#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "cflow/anisotropy.hpp"
#include "cflow/convex_body.hpp"

namespace cflow {

/// One row of trajectory.csv. Curvature extrema are node-wise extrema of the
/// primal body; K = 1/S, kappa = 1/lambda.
struct DiagnosticsRecord {
  int n = 2;
  double t = 0.0;
  double dt = 0.0;
  double V = 0.0;
  double s_min = 0.0;
  double s_max = 0.0;
  double ratio = 0.0;
  double osc = 0.0;
  double grad_sup = 0.0;
  double S_min = 0.0;
  double S_max = 0.0;
  double K_min = 0.0;
  double K_max = 0.0;
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  double kappa_min = 0.0;
  double kappa_max = 0.0;
  double H_max = 0.0;
  double width_minus = 0.0;
  double width_plus = 0.0;
  double width_ratio = 0.0;
  Vec3 centroid = Vec3::Zero();
  double dev_unit = 0.0;
  double tso_min = 0.0;

  /// (V(B) / V)^(1/n): factor mapping the body to unit volume.
  double unit_scale() const;
};

/// Assembles a record for the primal body at time t (dt: last accepted step).
DiagnosticsRecord record(const ConvexBody& body, double t, double dt, const Anisotropy& phi, double p);

std::vector<std::string> csv_columns(int n);
void write_csv_header(std::ostream& out, int n);
void write_csv_row(std::ostream& out, const DiagnosticsRecord& r);

/// Parses a trajectory CSV. Throws ConfigError naming missing or malformed columns.
std::vector<DiagnosticsRecord> read_csv(std::istream& in);
std::vector<DiagnosticsRecord> read_csv_file(const std::string& path);

struct BoundReport {
  std::string name;
  bool pass = false;
  double measured = 0.0;
  double limit = 0.0;
  std::string detail;
  // Precondition not met (run too short, nothing after burn-in); pass is then true.
  bool skipped = false;
};

inline constexpr double kDefaultSlack = 0.05;
inline constexpr double kCurvatureBand = 4.0;
inline constexpr double kBurnInDeviation = 0.2;

/// Sign/ordering facts every accepted state must satisfy (ratio >= 1, K_min <= K_max, ...).
BoundReport check_record_invariants(const std::vector<DiagnosticsRecord>& traj);

/// sup grad_sup <= C* and sup osc <= C* pi with C* = grad_sup(0) (1 + slack);
/// also reports the growth factor of s_min over the run.
BoundReport check_gradient_bound(const std::vector<DiagnosticsRecord>& traj, double slack = kDefaultSlack);

/// sup osc <= osc(0) (1 + slack), plus 1e-8 * s_max(0) absolute slack.
BoundReport check_oscillation(const std::vector<DiagnosticsRecord>& traj, double slack = kDefaultSlack);

/// ratio(t_end) - 1 <= tol and ratio(t_end) <= ratio(t) + 1e-10 for t >= t_end / 10.
/// Skipped unless s_min has grown tenfold.
BoundReport check_ratio_convergence(const std::vector<DiagnosticsRecord>& traj, double tol = 0.01);

/// First recorded time with dev_unit < kBurnInDeviation, or a negative value.
double default_burn_in(const std::vector<DiagnosticsRecord>& traj);

/// After burn-in: rescaled kappa extrema inside [1/band, band]; t kappa_max and
/// K_max t^((n-1)/(1-p)) below the caps implied by that band and the enclosed
/// ball of radius s_min(0) (times 1 + slack). Three reports, skipped when no
/// record lies after burn-in.
std::vector<BoundReport> check_curvature_bounds(const std::vector<DiagnosticsRecord>& traj, double p,
                                                double burn_in, double band = kCurvatureBand,
                                                double slack = kDefaultSlack);

/// sup width_ratio <= width_ratio(0) * factor.
BoundReport check_width_ratio(const std::vector<DiagnosticsRecord>& traj, double factor = 1.1);

/// dev_unit(t_end) <= tol0 and max |lambda(s~) - 1| <= tol2 at t_end. Skipped
/// unless s_min has grown tenfold.
BoundReport check_unit_ball_convergence(const std::vector<DiagnosticsRecord>& traj, double tol0 = 0.02,
                                        double tol2 = 0.05);

/// Rescaled principal radii deviation max |lambda_i(s~) - 1| of a record.
double rescaled_radii_deviation(const DiagnosticsRecord& r);

/// (omega_- / (n+1)) B  within  K - b  within  (n omega_+ / (n+1)) B, node-wise.
/// measured = largest violation (<= 0 when the inclusions hold).
BoundReport check_minkowski_inclusion(const ConvexBody& body);

}  // namespace cflow
