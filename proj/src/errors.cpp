#include "cflow/errors.hpp"

#include <sstream>

namespace cflow {

namespace {

std::string non_convex_message(std::size_t node, double lambda_min, double threshold) {
  std::ostringstream os;
  os.precision(6);
  os << "body is not strictly convex: lambda_min=" << lambda_min << " at node " << node << " (threshold "
     << threshold << ")";
  return os.str();
}

}  // namespace

NonConvexError::NonConvexError(std::size_t node, double lambda_min, double threshold)
    : std::runtime_error(non_convex_message(node, lambda_min, threshold)),
      node_(node),
      lambda_min_(lambda_min),
      threshold_(threshold) {}

}  // namespace cflow
