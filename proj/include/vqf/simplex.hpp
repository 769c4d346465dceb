#pragma once

// Small dense two-phase simplex with Bland's rule.
//
//   minimize c^t x  subject to  A x = b, x >= 0
//
// Sized for the convex-combination LPs in classify (a handful of rows, a few
// hundred columns). Bland's rule makes it cycle-free, so the only numeric
// failure mode is hitting the pivot cap.

#include <cstddef>
#include <string>

#include "vqf/symcore.hpp"

namespace vqf {

enum class LpStatus { Optimal, Infeasible, Unbounded, PivotLimit };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  Vector x;
  double objective = 0.0;
  int pivots = 0;
};

std::string to_string(LpStatus status);

/// A is rows x cols, b has `rows` entries, c has `cols` entries.
LpResult solve_standard_lp(const DenseMatrix& a, std::span<const double> b,
                           std::span<const double> c, int max_pivots = 20000);

}  // namespace vqf
