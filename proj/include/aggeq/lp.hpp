#pragma once

#include <vector>

#include "aggeq/matrix.hpp"

namespace aggeq {

enum class RowSense { LessEqual, Equal, GreaterEqual };

/// maximize c.x subject to a.x (sense) b, x >= 0.
struct LinearProgram {
  Matrix a;
  Vector b;
  std::vector<RowSense> sense;
  Vector c;
};

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

struct LpSolution {
  LpStatus status = LpStatus::IterationLimit;
  Vector x;
  double objective = 0.0;
  Vector duals;  // one per row; >= 0 for LessEqual rows at an optimum
};

/// Dense two-phase tableau simplex with Bland's rule. Meant for the small
/// master problems of the coupled-slack computation, not for large models.
LpSolution solve_lp(const LinearProgram& lp, double tol = 1e-9, int max_pivots = 100000);

}  // namespace aggeq
