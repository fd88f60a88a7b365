#include "cflow/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>

#include "cflow/errors.hpp"
#include "cflow/snapshot.hpp"

namespace cflow {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

std::vector<double> row_values(const DiagnosticsRecord& r) {
  std::vector<double> v{r.t,         r.dt,        r.V,           r.s_min,       r.s_max,      r.ratio,
                        r.osc,       r.grad_sup,  r.S_min,       r.S_max,       r.K_min,      r.K_max,
                        r.lambda_min, r.lambda_max, r.kappa_min, r.kappa_max,   r.H_max,      r.width_minus,
                        r.width_plus, r.width_ratio};
  for (int i = 0; i < r.n; ++i) v.push_back(r.centroid[i]);
  v.push_back(r.dev_unit);
  v.push_back(r.tso_min);
  return v;
}

BoundReport empty_report(const std::string& name) {
  BoundReport rep;
  rep.name = name;
  rep.detail = "empty trajectory";
  return rep;
}

}  // namespace

double DiagnosticsRecord::unit_scale() const { return std::pow(unit_ball_volume(n) / V, 1.0 / n); }

DiagnosticsRecord record(const ConvexBody& body, double t, double dt, const Anisotropy& phi, double p) {
  const auto& g = body.grid();
  const auto& radii = body.radii();
  DiagnosticsRecord r;
  r.n = g.ambient_dim();
  r.t = t;
  r.dt = dt;
  r.V = body.volume();
  r.s_min = body.support_min();
  r.s_max = body.support_max();
  r.ratio = r.s_max / r.s_min;
  r.osc = r.s_max - r.s_min;
  const auto& gn = body.gradient_normsq();
  r.grad_sup = std::sqrt(*std::max_element(gn.begin(), gn.end()));
  r.S_min = *std::min_element(radii.det.begin(), radii.det.end());
  r.S_max = *std::max_element(radii.det.begin(), radii.det.end());
  r.K_min = 1.0 / r.S_max;
  r.K_max = 1.0 / r.S_min;
  r.lambda_min = *std::min_element(radii.lambda_min.begin(), radii.lambda_min.end());
  r.lambda_max = *std::max_element(radii.lambda_max.begin(), radii.lambda_max.end());
  r.kappa_min = 1.0 / r.lambda_max;
  r.kappa_max = 1.0 / r.lambda_min;
  r.H_max = 0.0;
  for (std::size_t k = 0; k < radii.size(); ++k) r.H_max = std::max(r.H_max, radii.mean_curvature(k));
  r.width_minus = body.width_min();
  r.width_plus = body.width_max();
  r.width_ratio = r.width_plus / r.width_minus;
  r.centroid = body.centroid();

  const double a = r.unit_scale();
  const double beta = p / (r.n - 1);
  r.tso_min = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double s = body.support()[k];
    r.dev_unit = std::max(r.dev_unit, std::abs(a * s - 1.0));
    const double psi = phi(g.node(k)) * std::pow(radii.det[k], beta) / (2.0 * r.s_max - s);
    r.tso_min = std::min(r.tso_min, psi);
  }
  return r;
}

std::vector<std::string> csv_columns(int n) {
  std::vector<std::string> c{"t",         "dt",         "V",         "s_min",     "s_max",      "ratio",
                             "osc",       "grad_sup",   "S_min",     "S_max",     "K_min",      "K_max",
                             "lambda_min", "lambda_max", "kappa_min", "kappa_max", "H_max",      "width_minus",
                             "width_plus", "width_ratio"};
  for (int i = 1; i <= n; ++i) c.push_back("centroid_" + std::to_string(i));
  c.emplace_back("dev_unit");
  c.emplace_back("tso_min");
  return c;
}

void write_csv_header(std::ostream& out, int n) {
  const auto cols = csv_columns(n);
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << '\n';
}

void write_csv_row(std::ostream& out, const DiagnosticsRecord& r) {
  const auto v = row_values(r);
  for (std::size_t i = 0; i < v.size(); ++i) out << (i ? "," : "") << format_double(v[i]);
  out << '\n';
}

std::vector<DiagnosticsRecord> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("trajectory CSV is empty");
  std::map<std::string, std::size_t> index;
  {
    std::istringstream ss(line);
    std::string name;
    std::size_t i = 0;
    while (std::getline(ss, name, ',')) index[name] = i++;
  }
  const int n = index.count("centroid_3") ? 3 : 2;
  std::vector<std::string> missing;
  for (const auto& c : csv_columns(n))
    if (!index.count(c)) missing.push_back(c);
  if (!missing.empty()) {
    std::string msg = "trajectory CSV is missing column(s):";
    for (const auto& m : missing) msg += " " + m;
    throw ConfigError(msg);
  }
  const auto cols = csv_columns(n);

  std::vector<DiagnosticsRecord> out;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::istringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    std::vector<double> v(cols.size());
    for (std::size_t i = 0; i < cols.size(); ++i) {
      const std::size_t at = index[cols[i]];
      if (at >= cells.size())
        throw ConfigError("trajectory CSV line " + std::to_string(line_no) + ": missing value for " + cols[i]);
      try {
        std::size_t used = 0;
        v[i] = std::stod(cells[at], &used);
        if (used != cells[at].size()) throw std::invalid_argument(cells[at]);
      } catch (const std::exception&) {
        throw ConfigError("trajectory CSV line " + std::to_string(line_no) + ": bad value for " + cols[i]);
      }
    }
    DiagnosticsRecord r;
    r.n = n;
    std::size_t i = 0;
    for (double* f : {&r.t, &r.dt, &r.V, &r.s_min, &r.s_max, &r.ratio, &r.osc, &r.grad_sup, &r.S_min, &r.S_max,
                      &r.K_min, &r.K_max, &r.lambda_min, &r.lambda_max, &r.kappa_min, &r.kappa_max, &r.H_max,
                      &r.width_minus, &r.width_plus, &r.width_ratio})
      *f = v[i++];
    for (int c = 0; c < n; ++c) r.centroid[c] = v[i++];
    r.dev_unit = v[i++];
    r.tso_min = v[i++];
    out.push_back(r);
  }
  return out;
}

std::vector<DiagnosticsRecord> read_csv_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path);
  return read_csv(in);
}

BoundReport check_record_invariants(const std::vector<DiagnosticsRecord>& traj) {
  BoundReport rep{"record invariants", true, 0.0, 0.0, "ratio >= 1, K_min <= K_max, kappa_min <= kappa_max, "
                                                       "omega_- <= omega_+, V > 0, t nondecreasing"};
  if (traj.empty()) return empty_report(rep.name);
  double prev_t = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const auto& r = traj[i];
    const bool ok = r.ratio >= 1.0 && r.K_min <= r.K_max && r.kappa_min <= r.kappa_max &&
                    r.lambda_min <= r.lambda_max && r.width_minus <= r.width_plus && r.V > 0.0 && r.t >= prev_t;
    prev_t = r.t;
    if (!ok) {
      rep.pass = false;
      rep.measured = r.t;
      rep.detail = "violated at row " + std::to_string(i + 1) + " (t = " + fmt(r.t) + ")";
      return rep;
    }
  }
  return rep;
}

BoundReport check_gradient_bound(const std::vector<DiagnosticsRecord>& traj, double slack) {
  BoundReport rep;
  rep.name = "gradient bound";
  if (traj.empty()) return empty_report(rep.name);
  const double scale = traj.front().s_max;
  const double c_star = traj.front().grad_sup * (1.0 + slack) + 1e-8 * scale;
  double grad = 0.0, osc = 0.0, t_at = 0.0;
  for (const auto& r : traj) {
    if (r.grad_sup > grad) {
      grad = r.grad_sup;
      t_at = r.t;
    }
    osc = std::max(osc, r.osc);
  }
  rep.measured = grad;
  rep.limit = c_star;
  rep.pass = grad <= c_star && osc <= c_star * std::numbers::pi;
  rep.detail = "sup grad_sup " + fmt(grad) + " at t = " + fmt(t_at) + ", sup osc " + fmt(osc) + " <= C* pi = " +
               fmt(c_star * std::numbers::pi) + ", s_min growth x" + fmt(traj.back().s_min / traj.front().s_min);
  return rep;
}

BoundReport check_oscillation(const std::vector<DiagnosticsRecord>& traj, double slack) {
  BoundReport rep;
  rep.name = "oscillation bound";
  if (traj.empty()) return empty_report(rep.name);
  double osc = 0.0, t_at = 0.0;
  for (const auto& r : traj)
    if (r.osc > osc) {
      osc = r.osc;
      t_at = r.t;
    }
  rep.measured = osc;
  rep.limit = traj.front().osc * (1.0 + slack) + 1e-8 * traj.front().s_max;
  rep.pass = osc <= rep.limit;
  rep.detail = "sup osc at t = " + fmt(t_at) + ", s_min growth x" + fmt(traj.back().s_min / traj.front().s_min);
  return rep;
}

BoundReport check_ratio_convergence(const std::vector<DiagnosticsRecord>& traj, double tol) {
  BoundReport rep;
  rep.name = "ratio convergence";
  if (traj.empty()) return empty_report(rep.name);
  const auto& last = traj.back();
  rep.measured = last.ratio - 1.0;
  rep.limit = tol;
  const double growth = last.s_min / traj.front().s_min;
  bool monotone = true;
  for (const auto& r : traj)
    if (r.t >= last.t / 10.0 && last.ratio > r.ratio + 1e-10) monotone = false;
  if (growth < 10.0) {
    rep.pass = rep.skipped = true;
    rep.detail = "s_min grew only x" + fmt(growth) + " (needs x10)";
    return rep;
  }
  rep.pass = rep.measured <= tol && monotone;
  rep.detail = "s_min growth x" + fmt(growth) +
               (monotone ? ", final ratio is the last-decade minimum" : ", final ratio exceeds an earlier value");
  return rep;
}

double default_burn_in(const std::vector<DiagnosticsRecord>& traj) {
  for (const auto& r : traj)
    if (r.dev_unit < kBurnInDeviation) return r.t;
  return -1.0;
}

std::vector<BoundReport> check_curvature_bounds(const std::vector<DiagnosticsRecord>& traj, double p, double burn_in,
                                                double band, double slack) {
  std::vector<BoundReport> out;
  if (traj.empty()) {
    for (const char* name : {"rescaled curvature band", "t kappa_max bound", "Gauss curvature decay"})
      out.push_back(empty_report(name));
    return out;
  }
  const int n = traj.front().n;
  const double m = traj.front().s_min;
  const double t_kappa_cap = (1.0 + slack) * band * std::pow(p, p / (1.0 - p)) / std::pow(m, p);
  const double gauss_cap = (1.0 + slack) * std::pow(band, n - 1) * std::pow(1.0 - p, -(n - 1) / (1.0 - p));

  double lo = std::numeric_limits<double>::infinity(), hi = 0.0, tk = 0.0, gk = 0.0;
  std::size_t used = 0;
  for (const auto& r : traj) {
    if (burn_in < 0.0 || r.t < burn_in || r.t <= 0.0) continue;
    ++used;
    const double a = r.unit_scale();
    lo = std::min(lo, r.kappa_min / a);
    hi = std::max(hi, r.kappa_max / a);
    tk = std::max(tk, r.t * r.kappa_max);
    gk = std::max(gk, r.K_max * std::pow(r.t, (n - 1) / (1.0 - p)));
  }
  const bool have = used > 0;
  if (!have) {
    for (const char* name : {"rescaled curvature band", "t kappa_max bound", "Gauss curvature decay"}) {
      BoundReport r;
      r.name = name;
      r.pass = r.skipped = true;
      r.detail = "no records after burn-in";
      out.push_back(r);
    }
    return out;
  }
  const std::string tail = " over " + std::to_string(used) + " records after burn-in t = " + fmt(burn_in);

  BoundReport bandrep{"rescaled curvature band", lo >= 1.0 / band && hi <= band, std::max(hi, 1.0 / lo), band,
                      "rescaled kappa in [" + fmt(lo) + ", " + fmt(hi) + "]" + tail};
  BoundReport trep{"t kappa_max bound", tk <= t_kappa_cap, tk, t_kappa_cap, "sup t kappa_max" + tail};
  BoundReport grep{"Gauss curvature decay", gk <= gauss_cap, gk, gauss_cap, "sup K_max t^((n-1)/(1-p))" + tail};
  out = {bandrep, trep, grep};
  return out;
}

BoundReport check_width_ratio(const std::vector<DiagnosticsRecord>& traj, double factor) {
  BoundReport rep;
  rep.name = "width ratio";
  if (traj.empty()) return empty_report(rep.name);
  for (const auto& r : traj) rep.measured = std::max(rep.measured, r.width_ratio);
  rep.limit = traj.front().width_ratio * factor;
  rep.pass = rep.measured <= rep.limit;
  rep.detail = "sup omega_+/omega_- against initial " + fmt(traj.front().width_ratio) + " x " + fmt(factor);
  return rep;
}

double rescaled_radii_deviation(const DiagnosticsRecord& r) {
  const double a = r.unit_scale();
  return std::max(std::abs(a * r.lambda_min - 1.0), std::abs(a * r.lambda_max - 1.0));
}

BoundReport check_unit_ball_convergence(const std::vector<DiagnosticsRecord>& traj, double tol0, double tol2) {
  BoundReport rep;
  rep.name = "unit ball convergence";
  if (traj.empty()) return empty_report(rep.name);
  const auto& last = traj.back();
  const double growth = last.s_min / traj.front().s_min;
  if (growth < 10.0) {
    rep.pass = rep.skipped = true;
    rep.detail = "s_min grew only x" + fmt(growth) + " (needs x10)";
    return rep;
  }
  const double dev2 = rescaled_radii_deviation(last);
  rep.measured = last.dev_unit;
  rep.limit = tol0;
  rep.pass = last.dev_unit <= tol0 && dev2 <= tol2;
  rep.detail = "dev_unit " + fmt(last.dev_unit) + " (tol " + fmt(tol0) + "), max |lambda~ - 1| " + fmt(dev2) +
               " (tol " + fmt(tol2) + ") at t = " + fmt(last.t);
  return rep;
}

BoundReport check_minkowski_inclusion(const ConvexBody& body) {
  const int n = body.ambient_dim();
  const ConvexBody centered = translated(body, body.centroid());
  const double outer = n * body.width_max() / (n + 1.0);
  const double inner = body.width_min() / (n + 1.0);
  // Both sets contain the ball B(0, rho) iff their support function is >= rho, so
  // the inner inclusion is a support comparison as well.
  const auto& s = centered.support();
  double violation = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < s.size(); ++k) violation = std::max({violation, s[k] - outer, inner - s[k]});
  BoundReport rep;
  rep.name = "Minkowski inclusion";
  rep.measured = violation;
  rep.limit = 1e-10 * body.support_max();
  rep.pass = violation <= rep.limit;
  rep.detail = "max of s_{K-b} - n w+/(n+1) and w-/(n+1) - s_{K-b}";
  return rep;
}

}  // namespace cflow
