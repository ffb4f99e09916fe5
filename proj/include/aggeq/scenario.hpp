#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "aggeq/game.hpp"

namespace aggeq {

/// Raised when a generated instance admits no coupled-feasible profile.
class InfeasibleScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Electric-vehicle charging instance: each player needs an energy amount
/// within a contiguous charging window, and the aggregate load is limited by
/// a capacity per period and a ramp bound between the first and last period.
struct ScenarioConfig {
  std::size_t n_players = 2000;
  std::size_t horizon = 24;
  std::uint64_t seed = 1;
  double energy_min = 1.0, energy_max = 30.0;
  double omega_min = 1.0, omega_max = 10.0;
  std::size_t duration_min = 4;  // window lengths are drawn from {duration_min..horizon}
  double ramp_limit = 50.0;
  double capacity = 1400.0;
  /// Price pieces [threshold, intercept, slope] applied to every period.
  std::vector<std::array<double, 3>> price_pieces = {
      {0.0, 1.0, 0.1}, {500.0, -49.0, 0.2}, {1000.0, -349.0, 0.5}};
  AggregationConvention convention = AggregationConvention::Sum;
  bool coupling = true;
  /// When positive, only this many player types are sampled and the players
  /// are split into equal contiguous blocks of identical copies.
  std::size_t homogeneous_types = 0;

  /// Throws std::invalid_argument.
  void validate() const;
};

/// Deterministic under cfg.seed. Throws InfeasibleScenarioError when the
/// coupled feasible region is empty.
GameSpec generate(const ScenarioConfig& cfg);

/// Scales the player count, capacity and ramp bound by `factor`. With
/// `scale_prices` the price thresholds scale too and slopes shrink by the
/// same factor, so c_new(X) = c(X / factor).
ScenarioConfig shrink(const ScenarioConfig& cfg, double factor, bool scale_prices = false);

/// Earliest-first preferred profile: starts from the lower bounds and fills
/// the remaining energy up to the upper bounds in period order.
Vector plug_and_charge(double energy, const Vector& lower, const Vector& upper);

}  // namespace aggeq
