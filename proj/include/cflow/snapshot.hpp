#pragma once

#include <iosfwd>
#include <string>

#include "cflow/sphere_grid.hpp"

namespace cflow {

/// Body snapshot, text CSV with LF line endings and 17 significant digits:
///   header  n,N,t            (n = 2)   or   n,N_theta,N_phi,t   (n = 3)
///   rows    theta,s                     or   theta,phi,s
/// in node order.
struct Snapshot {
  double t = 0.0;
  ScalarField support;
};

void write_snapshot(std::ostream& out, const ScalarField& s, double t);
void write_snapshot_file(const std::string& path, const ScalarField& s, double t);

/// Builds the grid named by the header and checks every coordinate against it.
/// Throws ConfigError on malformed input.
Snapshot read_snapshot(std::istream& in);
Snapshot read_snapshot_file(const std::string& path);

/// Shortest decimal form that parses back to the same double (%.17g).
std::string format_double(double v);

}  // namespace cflow
