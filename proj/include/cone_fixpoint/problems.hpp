#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cone_fixpoint/cone_order.hpp"
#include "cone_fixpoint/contraction.hpp"

namespace cone_fixpoint {

struct ProblemInstance {
  std::string name;
  ContractionSpec spec;
  Vector x0;
  std::optional<Vector> reference;
  std::string provenance;
};

/// AFFINE_1D, CONSTANT, ROTATION_2D, KEPLER, FIXED_START, NEAR_ONE.
std::vector<ProblemInstance> builtin_catalog();

/// Throws kInvalidInput listing the known names when `name` is not in the catalog.
ProblemInstance builtin_problem(const std::string& name);

/// Fixed point computed without Picard iteration: direct elimination for
/// the affine families, c for constants, bisection for Kepler.
Vector reference_fixed_point(const ContractionSpec& spec);
Vector reference_fixed_point(const ProblemInstance& problem);

}  // namespace cone_fixpoint
