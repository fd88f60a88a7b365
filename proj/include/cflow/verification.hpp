#pragma once

#include <optional>
#include <vector>

#include "cflow/flow.hpp"

namespace cflow {

struct CheckpointDefect {
  double t = 0.0;
  double defect = 0.0;
};

struct PairedRunReport {
  double max_defect = 0.0;
  std::vector<CheckpointDefect> checkpoints;
};

/// Runs the flow from s0 and from a^(1/n) s0 and compares the second run at t
/// with a^(1/n) s(a^((p-1)/n) t) from the first, relative to max |s|.
PairedRunReport verify_rescaling_property(const FlowConfig& cfg, const ScalarField& s0, double a,
                                          const std::vector<double>& checkpoints);

/// Evolves s0 by the primal expanding flow and, independently, its polar dual
/// by the dual flow; at each checkpoint reports sup |s_{K_t°} - s°_t|. With
/// fixed_dt both integrators use that step size.
PairedRunReport cross_check_dual(const FlowConfig& cfg, const ScalarField& s0, const std::vector<double>& checkpoints,
                                 std::optional<double> fixed_dt = std::nullopt);

/// Largest D_max over the primal and dual flows at s0, for choosing a fixed dt
/// that is stable for both integrators.
double initial_dual_pair_dmax(const FlowConfig& cfg, const ScalarField& s0);

}  // namespace cflow
