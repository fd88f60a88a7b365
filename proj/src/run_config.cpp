#include "cflow/run_config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <numbers>
#include <sstream>

#include "cflow/errors.hpp"

namespace cflow {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> words(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream ss(s);
  std::string w;
  while (ss >> w) out.push_back(w);
  return out;
}

struct Entry {
  std::string value;
  int line = 0;
  bool used = false;
};

class Table {
 public:
  void add(const std::string& key, const std::string& value, int line) {
    if (map_.count(key)) throw error(line, "duplicate key '" + key + "'");
    map_[key] = {value, line, false};
  }
  bool has(const std::string& key) const { return map_.count(key) > 0; }
  const Entry& get(const std::string& key) {
    auto it = map_.find(key);
    if (it == map_.end()) throw ConfigError("missing required key '" + key + "'");
    it->second.used = true;
    return it->second;
  }
  double number(const std::string& key) {
    const auto& e = get(key);
    return to_double(e.value, e.line, key);
  }
  double number_or(const std::string& key, double fallback) { return has(key) ? number(key) : fallback; }
  int integer_or(const std::string& key, int fallback) {
    if (!has(key)) return fallback;
    const auto& e = get(key);
    const double v = to_double(e.value, e.line, key);
    if (v != std::floor(v) || std::abs(v) > 1e9) throw error(e.line, key + " must be an integer");
    return static_cast<int>(v);
  }
  std::string text_or(const std::string& key, const std::string& fallback) {
    return has(key) ? get(key).value : fallback;
  }
  std::vector<double> numbers(const std::string& key) {
    const auto& e = get(key);
    std::vector<double> out;
    for (const auto& w : words(e.value)) out.push_back(to_double(w, e.line, key));
    return out;
  }
  void reject_unused() const {
    for (const auto& [k, e] : map_)
      if (!e.used) throw error(e.line, "unknown key '" + k + "'");
  }
  int line_of(const std::string& key) const {
    auto it = map_.find(key);
    return it == map_.end() ? 0 : it->second.line;
  }

  static ConfigError error(int line, const std::string& msg) {
    return ConfigError("config line " + std::to_string(line) + ": " + msg);
  }
  static double to_double(const std::string& text, int line, const std::string& key) {
    try {
      std::size_t used = 0;
      const double v = std::stod(text, &used);
      if (used != text.size() || !std::isfinite(v)) throw std::invalid_argument(text);
      return v;
    } catch (const std::exception&) {
      throw error(line, "'" + key + "' expects a number, got '" + text + "'");
    }
  }

 private:
  std::map<std::string, Entry> map_;
};

Anisotropy parse_phi(Table& t, int n) {
  if (!t.has("phi")) return Anisotropy::constant(1.0);
  const auto& e = t.get("phi");
  const auto w = words(e.value);
  if (w.empty()) throw Table::error(e.line, "empty phi");
  std::vector<double> args;
  for (std::size_t i = 1; i < w.size(); ++i) args.push_back(Table::to_double(w[i], e.line, "phi"));
  if (w[0] == "constant" && args.size() == 1) return Anisotropy::constant(args[0]);
  if (w[0] == "dipole" && args.size() == static_cast<std::size_t>(n) + 1) {
    Vec3 v = Vec3::Zero();
    for (int i = 0; i < n; ++i) v[i] = args[static_cast<std::size_t>(i) + 1];
    return Anisotropy::dipole(args[0], v);
  }
  if (w[0] == "quadrupole" && args.size() == 2) return Anisotropy::quadrupole(args[0], static_cast<int>(args[1]), n);
  throw Table::error(e.line, "phi must be 'constant c', 'dipole eps v_1..v_n' or 'quadrupole eps axis'");
}

BodySpec parse_body(Table& t, int n) {
  BodySpec b;
  const auto& e = t.get("body");
  const auto w = words(e.value);
  if (w.empty()) throw Table::error(e.line, "empty body");
  std::vector<double> args;
  for (std::size_t i = 1; i < w.size(); ++i) args.push_back(Table::to_double(w[i], e.line, "body"));
  const auto nn = static_cast<std::size_t>(n);
  if (w[0] == "ball" && args.size() == 1) {
    b.family = BodySpec::Family::ball;
    b.radius = args[0];
  } else if (w[0] == "translated_ball" && args.size() == nn + 1) {
    b.family = BodySpec::Family::translated_ball;
    b.radius = args[0];
    for (std::size_t i = 0; i < nn; ++i) b.offset[static_cast<Eigen::Index>(i)] = args[i + 1];
  } else if (w[0] == "ellipsoid" && args.size() == nn) {
    b.family = BodySpec::Family::ellipsoid;
    b.axes = args;
    for (double a : args)
      if (!(a > 0.0)) throw Table::error(e.line, "ellipsoid axes must be positive");
  } else if (w[0] == "harmonic" && args.size() == 1) {
    b.family = BodySpec::Family::harmonic;
    b.radius = args[0];
    // modes = l m amplitude; l m amplitude; ...
    const auto& me = t.get("modes");
    std::istringstream ss(me.value);
    std::string item;
    while (std::getline(ss, item, ';')) {
      const auto f = words(item);
      if (f.empty()) continue;
      if (f.size() != 3) throw Table::error(me.line, "each mode is 'l m amplitude'");
      HarmonicMode mode;
      mode.l = static_cast<int>(Table::to_double(f[0], me.line, "modes"));
      mode.m = static_cast<int>(Table::to_double(f[1], me.line, "modes"));
      mode.amplitude = Table::to_double(f[2], me.line, "modes");
      if (mode.l < 0 || (n == 3 && std::abs(mode.m) > mode.l))
        throw Table::error(me.line, "mode indices out of range");
      b.modes.push_back(mode);
    }
  } else {
    throw Table::error(e.line, "body must be 'ball R', 'translated_ball R v_1..v_n', 'ellipsoid a_1..a_n' or "
                               "'harmonic R' (with modes = ...)");
  }
  if ((b.family == BodySpec::Family::ball || b.family == BodySpec::Family::translated_ball ||
       b.family == BodySpec::Family::harmonic) &&
      !(b.radius > 0.0))
    throw Table::error(e.line, "radius must be positive");
  return b;
}

}  // namespace

std::string BodySpec::describe() const {
  std::ostringstream os;
  os.precision(17);
  switch (family) {
    case Family::ball:
      os << "ball " << radius;
      break;
    case Family::translated_ball:
      os << "translated_ball " << radius << " " << offset.x() << " " << offset.y() << " " << offset.z();
      break;
    case Family::ellipsoid:
      os << "ellipsoid";
      for (double a : axes) os << " " << a;
      break;
    case Family::harmonic:
      os << "harmonic " << radius;
      for (const auto& m : modes) os << "; " << m.l << " " << m.m << " " << m.amplitude;
      break;
  }
  return os.str();
}

RunConfig parse_run_config(std::istream& in) {
  RunConfig cfg;
  Table t;
  std::string line;
  int line_no = 0;
  std::ostringstream text;
  while (std::getline(in, line)) {
    ++line_no;
    text << line << '\n';
    const auto hash = line.find('#');
    const std::string body = trim(hash == std::string::npos ? line : line.substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw Table::error(line_no, "expected 'key = value'");
    const std::string key = trim(body.substr(0, eq));
    const std::string value = trim(body.substr(eq + 1));
    if (key.empty() || value.empty()) throw Table::error(line_no, "expected 'key = value'");
    t.add(key, value, line_no);
  }
  cfg.text = text.str();

  auto& f = cfg.flow;
  f.n = t.integer_or("n", 0);
  if (f.n != 2 && f.n != 3) throw ConfigError("n must be 2 or 3");
  f.p = t.number("p");
  f.direction = parse_direction(t.text_or("direction", "expanding_primal"));
  f.phi = parse_phi(t, f.n);
  f.dt_safety = t.number_or("dt_safety", f.dt_safety);
  f.max_halvings = t.integer_or("max_halvings", f.max_halvings);
  const std::string filter = t.text_or("polar_filter", "true");
  if (filter != "true" && filter != "false") throw Table::error(t.line_of("polar_filter"), "polar_filter is true or false");
  f.polar_filter = filter == "true";

  for (double r : t.numbers("resolution")) {
    if (r != std::floor(r)) throw Table::error(t.line_of("resolution"), "resolution must be integers");
    cfg.resolution.push_back(static_cast<int>(r));
  }

  const std::string stop = t.text_or("stop", "time");
  if (stop == "time") {
    cfg.stop = StopRule::time;
    f.t_end = t.number("t_end");
  } else if (stop == "volume_growth") {
    cfg.stop = StopRule::volume_growth;
    cfg.volume_growth = t.number("volume_growth");
    if (!(cfg.volume_growth > 1.0)) throw Table::error(t.line_of("volume_growth"), "volume_growth must exceed 1");
    f.t_end = t.number_or("t_end", 1e12);
  } else {
    throw Table::error(t.line_of("stop"), "stop must be 'time' or 'volume_growth'");
  }
  if (cfg.stop == StopRule::volume_growth && f.direction == FlowDirection::shrinking_primal)
    throw ConfigError("volume_growth stop rule needs an expanding flow");

  f.volume_floor = t.number_or("volume_floor", 0.0);
  cfg.volume_floor_fraction = t.number_or("volume_floor_fraction", 0.0);
  if (f.direction == FlowDirection::shrinking_primal) {
    if ((f.volume_floor > 0.0) == (cfg.volume_floor_fraction > 0.0))
      throw ConfigError("the shrinking flow needs exactly one of volume_floor, volume_floor_fraction");
    if (cfg.volume_floor_fraction >= 1.0) throw ConfigError("volume_floor_fraction must be below 1");
  }

  cfg.csv_every = t.integer_or("csv_every", 1);
  cfg.csv_interval = t.number_or("csv_interval", 0.0);
  cfg.snapshot_every = t.integer_or("snapshot_every", 0);
  cfg.snapshot_interval = t.number_or("snapshot_interval", 0.0);
  if (cfg.csv_every < 1) throw ConfigError("csv_every must be >= 1");
  if (cfg.csv_interval < 0.0 || cfg.snapshot_interval < 0.0 || cfg.snapshot_every < 0)
    throw ConfigError("output cadences must be non-negative");
  const int seed = t.integer_or("seed", 1);
  if (seed < 0) throw ConfigError("seed must be non-negative");
  cfg.seed = static_cast<std::uint64_t>(seed);

  cfg.body = parse_body(t, f.n);
  t.reject_unused();

  // A shrinking run has a valid floor only after V(0) is known; validate the rest now.
  FlowConfig check = f;
  if (check.direction == FlowDirection::shrinking_primal && !(check.volume_floor > 0.0)) check.volume_floor = 1.0;
  check.validate();
  initial_support(cfg, build_grid(f.n, cfg.resolution));
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config " + path);
  return parse_run_config(in);
}

double harmonic_basis(int n, int l, int m, const Vec3& z) {
  if (n == 2) {
    const double th = std::atan2(z.y(), z.x());
    return m >= 0 ? std::cos(l * th) : std::sin(l * th);
  }
  const double theta = std::acos(std::clamp(z.z(), -1.0, 1.0));
  const double phi = std::atan2(z.y(), z.x());
  const unsigned ul = static_cast<unsigned>(l);
  const unsigned um = static_cast<unsigned>(std::abs(m));
  const double y = std::sph_legendre(ul, um, theta);
  if (m == 0) return y;
  return std::numbers::sqrt2 * y * (m > 0 ? std::cos(m * phi) : std::sin(-m * phi));
}

ScalarField ellipsoid_support(const GridPtr& grid, const std::vector<double>& axes) {
  return ScalarField::from_function(grid, [&](const Vec3& z) {
    double q = 0.0;
    for (std::size_t i = 0; i < axes.size(); ++i) q += axes[i] * axes[i] * z[static_cast<Eigen::Index>(i)] * z[static_cast<Eigen::Index>(i)];
    return std::sqrt(q);
  });
}

ScalarField translated_ball_support(const GridPtr& grid, double radius, const Vec3& offset) {
  return ScalarField::from_function(grid, [&](const Vec3& z) { return radius + offset.dot(z); });
}

Vec3 steiner_point(const ScalarField& s) {
  const auto& g = s.grid();
  const auto w = g.weights();
  Vec3 acc = Vec3::Zero();
  for (std::size_t k = 0; k < g.size(); ++k) acc += (s[k] * w[k]) * g.node(k);
  return acc / unit_ball_volume(g.ambient_dim());
}

ScalarField initial_support(const RunConfig& cfg, const GridPtr& grid, bool* recentered) {
  const int n = cfg.flow.n;
  const auto& b = cfg.body;
  ScalarField s = ScalarField::constant(grid, b.radius);
  switch (b.family) {
    case BodySpec::Family::ball:
      break;
    case BodySpec::Family::translated_ball:
      s = translated_ball_support(grid, b.radius, b.offset);
      break;
    case BodySpec::Family::ellipsoid:
      s = ellipsoid_support(grid, b.axes);
      break;
    case BodySpec::Family::harmonic:
      s = ScalarField::from_function(grid, [&](const Vec3& z) {
        double v = b.radius;
        for (const auto& m : b.modes) v += m.amplitude * harmonic_basis(n, m.l, m.m, z);
        return v;
      });
      break;
  }
  if (recentered) *recentered = false;
  if (s.min() <= 0.0) {
    const Vec3 c = steiner_point(s);
    std::vector<double> shifted(s.size());
    for (std::size_t k = 0; k < s.size(); ++k) shifted[k] = s[k] - c.dot(grid->node(k));
    s = ScalarField(grid, std::move(shifted));
    if (recentered) *recentered = true;
  }
  try {
    ConvexBody check(s);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("initial body is not a strictly convex body around the origin: ") + e.what());
  }
  return s;
}

}  // namespace cflow
