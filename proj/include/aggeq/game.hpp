#pragma once

#include <array>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "aggeq/matrix.hpp"
#include "aggeq/projection.hpp"

namespace aggeq {

/// Whether the second cost argument is the average (1/N) sum_n x_n or the
/// plain sum. N is the total population mass (sum of weights).
enum class AggregationConvention { Average, Sum };

/// Continuous convex piecewise-affine price of the load. Piece k is
/// intercepts[k] + slopes[k] * load on [breakpoints[k-1], breakpoints[k]].
/// The first piece extends below zero.
struct PriceFunction {
  Vector breakpoints;
  Vector intercepts;
  Vector slopes;

  static PriceFunction affine(double intercept, double slope);
  /// Pieces given as [start threshold, intercept, slope]; the first
  /// threshold is ignored (the first piece covers everything below the
  /// second threshold).
  static PriceFunction from_pieces(const std::vector<std::array<double, 3>>& pieces);
  /// The block-rate tariff used by the EV scenario, with thresholds scaled
  /// by `load_scale` (c(X) = c_ref(X / load_scale)).
  static PriceFunction block_rate(double load_scale = 1.0);

  std::size_t n_pieces() const { return slopes.size(); }
  /// Index of the piece active at `load`; a breakpoint belongs to the piece
  /// on its right.
  std::size_t piece_index(double load) const;
  double value(double load) const;
  double right_slope(double load) const;
  double min_slope() const;
  double max_slope() const;

  /// Checks sizes, increasing breakpoints, continuity (1e-12 relative),
  /// nondecreasing nonnegative slopes. Throws std::invalid_argument.
  void validate() const;
};

/// Value of the price at a nonnegative load. Throws std::domain_error for a
/// negative load.
double eval_price(const PriceFunction& pf, double load);
/// Right derivative of the price: one element of its subdifferential.
double price_subgradient(const PriceFunction& pf, double load);

/// One player of the congestion family: cost
///   sum_t x_t c_t(agg_t) + omega ||x - preferred||^2
/// on the action set {lower <= x <= upper, sum x = energy}.
struct PlayerParams {
  double omega = 0.0;
  Vector preferred;
  std::optional<double> energy;
  Vector lower;
  Vector upper;

  BoxSimplexSet action_set() const { return {energy, lower, upper}; }
  bool operator==(const PlayerParams&) const = default;
};

struct CouplingConstraint {
  Matrix matrix;  // m x T
  Vector rhs;     // m

  std::size_t rows() const { return rhs.size(); }
};

/// User-supplied cost family. Costs must be convex in the own action.
class CostModel {
 public:
  virtual ~CostModel() = default;
  virtual double cost(std::size_t player, std::span<const double> x,
                      std::span<const double> aggregate) const = 0;
  /// A subgradient of the cost in the own action, aggregate held fixed.
  virtual void own_subgradient(std::size_t player, std::span<const double> x,
                               std::span<const double> aggregate, std::span<double> out) const = 0;
  /// A subgradient of the cost in the aggregate argument.
  virtual void aggregate_subgradient(std::size_t player, std::span<const double> x,
                                     std::span<const double> aggregate,
                                     std::span<double> out) const = 0;
};

/// Atomic aggregative game with an optional affine coupling constraint on the
/// aggregate. A grouped (population) game carries one weight per population.
struct GameSpec {
  std::size_t horizon = 0;
  std::vector<PlayerParams> players;
  std::vector<PriceFunction> prices;  // one per period
  std::optional<CouplingConstraint> coupling;
  AggregationConvention convention = AggregationConvention::Sum;
  Vector weights;  // empty means every weight is 1
  std::shared_ptr<const CostModel> custom_cost;

  std::size_t n_players() const { return players.size(); }
  double weight(std::size_t n) const { return weights.empty() ? 1.0 : weights[n]; }
  double total_weight() const;
  bool is_grouped() const;

  /// d aggregate / d x_n for a member of population n.
  double aggregate_scale(std::size_t n) const;
  Vector aggregate(const Matrix& profile) const;
  /// Converts an aggregate in this game's convention to average units.
  Vector to_average(std::span<const double> aggregate) const;

  /// Checks every structural invariant; throws std::invalid_argument, or
  /// InfeasibleSetError for an empty action set.
  void validate() const;
};

GameSpec make_game(std::vector<PlayerParams> players, std::vector<PriceFunction> prices,
                   AggregationConvention convention = AggregationConvention::Sum);

double eval_cost(const GameSpec& game, std::size_t n, std::span<const double> x_n,
                 std::span<const double> aggregate);

/// Cost of player n when it deviates to x_n and the others keep `profile`.
double eval_modified_cost(const GameSpec& game, const Matrix& profile, std::size_t n,
                          std::span<const double> x_n);

/// Per-player kernels used by the solver. `aggregate` must be the aggregate
/// of the current profile.
void svwe_player_subgradient(const GameSpec& game, std::size_t n, std::span<const double> x_n,
                             std::span<const double> aggregate, std::span<double> out);
void vne_player_subgradient(const GameSpec& game, std::size_t n, std::span<const double> x_n,
                            std::span<const double> aggregate, std::span<double> out);

/// Subgradient selection with the aggregate held fixed (Wardrop operator).
Matrix svwe_subgradient(const GameSpec& game, const Matrix& profile);
/// Subgradient selection of the modified costs: the Wardrop operator plus
/// each player's own impact on the aggregate. Ungrouped games only.
Matrix vne_subgradient(const GameSpec& game, const Matrix& profile);

struct MonotonicityReport {
  bool is_monotone = false;
  std::optional<double> alpha;  // strong monotonicity modulus, min_n 2 omega_n
  std::optional<double> beta;   // min price slope in the game's load units
  std::optional<double> beta_average;  // the same modulus w.r.t. the average aggregate
};

MonotonicityReport classify_monotonicity(const GameSpec& game);

}  // namespace aggeq
