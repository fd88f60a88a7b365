#pragma once

#include <vector>

#include "cflow/sphere_grid.hpp"

// Owning copy, safe to iterate over when the field is a temporary.
inline std::vector<double> values_of(const cflow::ScalarField& f) { return {f.values().begin(), f.values().end()}; }
