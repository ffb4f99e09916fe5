#pragma once

#include "aggeq/game.hpp"

namespace aggeq {

/// Result of max { s : a_j . X + s ||a_j|| <= b_j for all rows, X in S },
/// where S is the set of feasible aggregates (a weighted Minkowski sum of the
/// action sets). `slack` is the largest Euclidean distance from a feasible
/// aggregate to the boundary of the coupling polyhedron, in the game's load
/// units; it is negative when the coupled region is empty.
struct CoupledSlack {
  bool feasible = false;
  bool unconstrained = false;  // no nontrivial coupling rows
  double slack = 0.0;
  Vector aggregate;  // a maximiser (empty when unconstrained)
  int rounds = 0;
};

/// Solved by column generation: the master is a small LP over convex
/// combinations of aggregate vertices, and pricing is a support-function
/// evaluation per player.
CoupledSlack max_coupled_slack(const GameSpec& game, double tol = 1e-9, int max_rounds = 2000);

}  // namespace aggeq
