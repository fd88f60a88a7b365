#include "cflow/snapshot.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "cflow/errors.hpp"

namespace cflow {

namespace {

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& text, int line_no) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || !std::isfinite(v))
    throw ConfigError("snapshot line " + std::to_string(line_no) + ": bad number '" + text + "'");
  return v;
}

int parse_int(const std::string& text, int line_no) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw ConfigError("snapshot line " + std::to_string(line_no) + ": bad integer '" + text + "'");
  return v;
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_snapshot(std::ostream& out, const ScalarField& s, double t) {
  const auto& g = s.grid();
  out << g.ambient_dim();
  for (int r : g.resolution()) out << ',' << r;
  out << ',' << format_double(t) << '\n';
  for (std::size_t k = 0; k < g.size(); ++k) {
    out << format_double(g.theta(k));
    if (g.ambient_dim() == 3) out << ',' << format_double(g.phi(k));
    out << ',' << format_double(s[k]) << '\n';
  }
}

void write_snapshot_file(const std::string& path, const ScalarField& s, double t) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write snapshot " + path);
  write_snapshot(out, s, t);
  if (!out) throw ConfigError("failed writing snapshot " + path);
}

Snapshot read_snapshot(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("snapshot: empty input");
  const auto head = split_commas(line);
  if (head.size() < 3) throw ConfigError("snapshot: header needs n, resolution and t");
  const int n = parse_int(head[0], 1);
  const std::size_t expected = n == 2 ? 3 : 4;
  if ((n != 2 && n != 3) || head.size() != expected) throw ConfigError("snapshot: header does not match n");
  std::vector<int> res;
  for (std::size_t i = 1; i + 1 < head.size(); ++i) res.push_back(parse_int(head[i], 1));
  const double t = parse_double(head.back(), 1);
  const GridPtr grid = build_grid(n, res);

  const std::size_t cols = n == 2 ? 2 : 3;
  std::vector<double> values;
  values.reserve(grid->size());
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cells = split_commas(line);
    if (cells.size() != cols) throw ConfigError("snapshot line " + std::to_string(line_no) + ": wrong column count");
    const std::size_t k = values.size();
    if (k >= grid->size()) throw ConfigError("snapshot: more rows than grid nodes");
    const double th = parse_double(cells[0], line_no);
    const double ph = n == 3 ? parse_double(cells[1], line_no) : 0.0;
    if (std::abs(th - grid->theta(k)) > 1e-12 || (n == 3 && std::abs(ph - grid->phi(k)) > 1e-12))
      throw ConfigError("snapshot line " + std::to_string(line_no) + ": coordinates do not match the grid");
    values.push_back(parse_double(cells.back(), line_no));
  }
  if (values.size() != grid->size()) throw ConfigError("snapshot: fewer rows than grid nodes");
  return {t, ScalarField(grid, std::move(values))};
}

Snapshot read_snapshot_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open snapshot " + path);
  return read_snapshot(in);
}

}  // namespace cflow
