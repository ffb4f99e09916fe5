#pragma once

#include <cmath>
#include <vector>

#include "aggeq/game.hpp"
#include "aggeq/projection.hpp"
#include "aggeq/rng.hpp"
#include "oracle.hpp"

namespace testing_support {

using namespace aggeq;

/// n identical one-period players with price c(X) = intercept + slope X on a
/// budget-free box.
inline GameSpec replicated_box_game(std::size_t n, double slope, double omega, double preferred, double lo,
                                    double hi, AggregationConvention conv, double intercept = 0.0) {
  PlayerParams p;
  p.omega = omega;
  p.preferred = {preferred};
  p.lower = {lo};
  p.upper = {hi};
  return make_game(std::vector<PlayerParams>(n, p), {PriceFunction::affine(intercept, slope)}, conv);
}

/// The two-player instance with c(X) = X, omega = 1, y = 1 on [0, 1].
inline GameSpec two_player_game() {
  return replicated_box_game(2, 1.0, 1.0, 1.0, 0.0, 1.0, AggregationConvention::Sum);
}

/// Random nonempty budgeted set: lower in [0, 1), width in [0, 2), energy
/// strictly inside the feasible range.
inline BoxSimplexSet random_set(Rng& rng, std::size_t T) {
  BoxSimplexSet s{std::nullopt, Vector(T), Vector(T)};
  double lo = 0.0, hi = 0.0;
  for (std::size_t t = 0; t < T; ++t) {
    s.lower[t] = rng.uniform(0.0, 1.0);
    s.upper[t] = s.lower[t] + rng.uniform(0.0, 2.0);
    lo += s.lower[t];
    hi += s.upper[t];
  }
  s.energy = rng.uniform(lo, hi);
  return s;
}

inline oracle::Set to_oracle(const BoxSimplexSet& s) { return {s.energy, s.lower, s.upper}; }

/// One-period game in the oracle's own representation.
inline oracle::TinyGame to_oracle(const GameSpec& g) {
  oracle::TinyGame t;
  for (const auto& p : g.players) {
    const double lo = p.energy ? *p.energy : p.lower[0];
    const double hi = p.energy ? *p.energy : p.upper[0];
    t.players.push_back({p.omega, p.preferred[0], lo, hi});
  }
  t.weights = g.weights;
  t.sum = g.convention == AggregationConvention::Sum;
  const auto& pf = g.prices[0];
  for (std::size_t k = 0; k < pf.n_pieces(); ++k)
    t.price.pieces.push_back({k == 0 ? 0.0 : pf.breakpoints[k - 1], pf.intercepts[k], pf.slopes[k]});
  if (g.coupling && g.coupling->rows() == 1) {
    t.coupling_coef = g.coupling->matrix(0, 0);
    t.coupling_rhs = g.coupling->rhs[0];
  }
  return t;
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace testing_support
