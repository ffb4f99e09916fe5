#include "aggeq/game.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace aggeq {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

}  // namespace

PriceFunction PriceFunction::affine(double intercept, double slope) {
  PriceFunction pf;
  pf.intercepts = {intercept};
  pf.slopes = {slope};
  return pf;
}

PriceFunction PriceFunction::from_pieces(const std::vector<std::array<double, 3>>& pieces) {
  require(!pieces.empty(), "price function needs at least one piece");
  PriceFunction pf;
  for (std::size_t k = 0; k < pieces.size(); ++k) {
    if (k > 0) pf.breakpoints.push_back(pieces[k][0]);
    pf.intercepts.push_back(pieces[k][1]);
    pf.slopes.push_back(pieces[k][2]);
  }
  pf.validate();
  return pf;
}

PriceFunction PriceFunction::block_rate(double load_scale) {
  require(load_scale > 0.0, "block_rate: load scale must be positive");
  // c(X) = 1 + 0.1 X, -49 + 0.2 X, -349 + 0.5 X with kinks at 500 and 1000.
  PriceFunction pf;
  pf.breakpoints = {500.0 * load_scale, 1000.0 * load_scale};
  pf.intercepts = {1.0, -49.0, -349.0};
  pf.slopes = {0.1 / load_scale, 0.2 / load_scale, 0.5 / load_scale};
  pf.validate();
  return pf;
}

std::size_t PriceFunction::piece_index(double load) const {
  // first breakpoint strictly greater than load
  const auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), load);
  return static_cast<std::size_t>(it - breakpoints.begin());
}

double PriceFunction::value(double load) const {
  const std::size_t k = piece_index(load);
  return intercepts[k] + slopes[k] * load;
}

double PriceFunction::right_slope(double load) const { return slopes[piece_index(load)]; }

double PriceFunction::min_slope() const { return *std::min_element(slopes.begin(), slopes.end()); }

double PriceFunction::max_slope() const { return *std::max_element(slopes.begin(), slopes.end()); }

void PriceFunction::validate() const {
  require(!slopes.empty(), "price function needs at least one piece");
  require(intercepts.size() == slopes.size(), "price function: intercepts/slopes size mismatch");
  require(breakpoints.size() + 1 == slopes.size(),
          "price function: need exactly one breakpoint between consecutive pieces");
  for (std::size_t k = 0; k < slopes.size(); ++k) {
    require(std::isfinite(slopes[k]) && std::isfinite(intercepts[k]),
            "price function: non-finite coefficient");
    require(slopes[k] >= 0.0, "price function: slopes must be nonnegative");
    if (k > 0) require(slopes[k] >= slopes[k - 1], "price function: slopes must be nondecreasing");
  }
  for (std::size_t k = 0; k < breakpoints.size(); ++k) {
    if (k > 0) require(breakpoints[k] > breakpoints[k - 1], "price function: breakpoints must increase");
    const double b = breakpoints[k];
    const double left = intercepts[k] + slopes[k] * b;
    const double right = intercepts[k + 1] + slopes[k + 1] * b;
    const double scale = std::max({1.0, std::abs(left), std::abs(right)});
    require(std::abs(left - right) <= 1e-12 * scale,
            "price function: discontinuous at breakpoint " + std::to_string(b));
  }
}

double eval_price(const PriceFunction& pf, double load) {
  if (!(load >= 0.0)) throw std::domain_error("eval_price: load must be nonnegative");
  return pf.value(load);
}

double price_subgradient(const PriceFunction& pf, double load) {
  if (!(load >= 0.0)) throw std::domain_error("price_subgradient: load must be nonnegative");
  return pf.right_slope(load);
}

// ---------------------------------------------------------------------------

double GameSpec::total_weight() const {
  if (weights.empty()) return static_cast<double>(players.size());
  double s = 0.0;
  for (double w : weights) s += w;
  return s;
}

bool GameSpec::is_grouped() const {
  return std::any_of(weights.begin(), weights.end(), [](double w) { return w != 1.0; });
}

double GameSpec::aggregate_scale(std::size_t n) const {
  const double w = weight(n);
  return convention == AggregationConvention::Sum ? w : w / total_weight();
}

Vector GameSpec::aggregate(const Matrix& profile) const {
  require(profile.rows() == players.size() && profile.cols() == horizon,
          "aggregate: profile shape mismatch");
  Vector agg(horizon, 0.0);
  for (std::size_t n = 0; n < profile.rows(); ++n) {
    const double w = weight(n);
    const auto x = profile.row(n);
    for (std::size_t t = 0; t < horizon; ++t) agg[t] += w * x[t];
  }
  if (convention == AggregationConvention::Average) {
    const double inv = 1.0 / total_weight();
    for (double& a : agg) a *= inv;
  }
  return agg;
}

Vector GameSpec::to_average(std::span<const double> aggregate) const {
  Vector out(aggregate.begin(), aggregate.end());
  if (convention == AggregationConvention::Sum) {
    const double inv = 1.0 / total_weight();
    for (double& a : out) a *= inv;
  }
  return out;
}

void GameSpec::validate() const {
  require(horizon >= 1, "game: horizon must be >= 1");
  require(!players.empty(), "game: need at least one player");
  require(prices.size() == horizon, "game: need one price function per period");
  for (const auto& pf : prices) pf.validate();
  require(weights.empty() || weights.size() == players.size(), "game: weights size mismatch");
  for (double w : weights) require(w > 0.0 && std::isfinite(w), "game: weights must be positive");
  for (std::size_t n = 0; n < players.size(); ++n) {
    const auto& p = players[n];
    const std::string who = "player " + std::to_string(n) + ": ";
    require(p.preferred.size() == horizon && p.lower.size() == horizon && p.upper.size() == horizon,
            who + "vector length must equal the horizon");
    require(p.omega >= 0.0 && std::isfinite(p.omega), who + "omega must be nonnegative");
    for (std::size_t t = 0; t < horizon; ++t)
      require(p.lower[t] >= 0.0, who + "lower bounds must be nonnegative");
    try {
      p.action_set().validate();
    } catch (const InfeasibleSetError& e) {
      throw InfeasibleSetError(who + e.what());
    }
  }
  if (coupling) {
    require(coupling->matrix.cols() == horizon, "coupling: matrix must have T columns");
    require(coupling->matrix.rows() == coupling->rhs.size(), "coupling: rhs size mismatch");
  }
}

GameSpec make_game(std::vector<PlayerParams> players, std::vector<PriceFunction> prices,
                   AggregationConvention convention) {
  GameSpec g;
  g.horizon = players.empty() ? 0 : players.front().preferred.size();
  g.players = std::move(players);
  g.prices = std::move(prices);
  if (g.prices.size() == 1 && g.horizon > 1) g.prices.assign(g.horizon, g.prices.front());
  g.convention = convention;
  g.validate();
  return g;
}

// ---------------------------------------------------------------------------

double eval_cost(const GameSpec& game, std::size_t n, std::span<const double> x_n,
                 std::span<const double> aggregate) {
  require(n < game.n_players(), "eval_cost: player index out of range");
  require(x_n.size() == game.horizon && aggregate.size() == game.horizon,
          "eval_cost: dimension mismatch");
  if (game.custom_cost) return game.custom_cost->cost(n, x_n, aggregate);
  const auto& p = game.players[n];
  double c = 0.0;
  for (std::size_t t = 0; t < game.horizon; ++t) {
    const double d = x_n[t] - p.preferred[t];
    c += x_n[t] * game.prices[t].value(aggregate[t]) + p.omega * d * d;
  }
  return c;
}

double eval_modified_cost(const GameSpec& game, const Matrix& profile, std::size_t n,
                          std::span<const double> x_n) {
  Vector agg = game.aggregate(profile);
  const double s = game.aggregate_scale(n);
  const auto old = profile.row(n);
  for (std::size_t t = 0; t < game.horizon; ++t) agg[t] += s * (x_n[t] - old[t]);
  return eval_cost(game, n, x_n, agg);
}

void svwe_player_subgradient(const GameSpec& game, std::size_t n, std::span<const double> x_n,
                             std::span<const double> aggregate, std::span<double> out) {
  if (game.custom_cost) {
    game.custom_cost->own_subgradient(n, x_n, aggregate, out);
    return;
  }
  const auto& p = game.players[n];
  const double two_omega = 2.0 * p.omega;
  for (std::size_t t = 0; t < game.horizon; ++t)
    out[t] = game.prices[t].value(aggregate[t]) + two_omega * (x_n[t] - p.preferred[t]);
}

void vne_player_subgradient(const GameSpec& game, std::size_t n, std::span<const double> x_n,
                            std::span<const double> aggregate, std::span<double> out) {
  const double s = game.aggregate_scale(n);
  if (game.custom_cost) {
    game.custom_cost->own_subgradient(n, x_n, aggregate, out);
    Vector g2(game.horizon);
    game.custom_cost->aggregate_subgradient(n, x_n, aggregate, g2);
    for (std::size_t t = 0; t < game.horizon; ++t) out[t] += s * g2[t];
    return;
  }
  const auto& p = game.players[n];
  const double two_omega = 2.0 * p.omega;
  for (std::size_t t = 0; t < game.horizon; ++t) {
    const auto& pf = game.prices[t];
    out[t] = pf.value(aggregate[t]) + s * x_n[t] * pf.right_slope(aggregate[t]) +
             two_omega * (x_n[t] - p.preferred[t]);
  }
}

Matrix svwe_subgradient(const GameSpec& game, const Matrix& profile) {
  const Vector agg = game.aggregate(profile);
  Matrix g(profile.rows(), profile.cols());
  for (std::size_t n = 0; n < profile.rows(); ++n)
    svwe_player_subgradient(game, n, profile.row(n), agg, g.row(n));
  return g;
}

Matrix vne_subgradient(const GameSpec& game, const Matrix& profile) {
  require(!game.is_grouped(), "vne_subgradient: defined for ungrouped games only");
  const Vector agg = game.aggregate(profile);
  Matrix g(profile.rows(), profile.cols());
  for (std::size_t n = 0; n < profile.rows(); ++n)
    vne_player_subgradient(game, n, profile.row(n), agg, g.row(n));
  return g;
}

MonotonicityReport classify_monotonicity(const GameSpec& game) {
  MonotonicityReport r;
  if (game.custom_cost) return r;  // not decidable from data
  bool convex_prices = true;
  double min_slope = std::numeric_limits<double>::infinity();
  for (const auto& pf : game.prices) {
    for (std::size_t k = 0; k < pf.n_pieces(); ++k) {
      if (pf.slopes[k] < 0.0 || (k > 0 && pf.slopes[k] < pf.slopes[k - 1])) convex_prices = false;
    }
    min_slope = std::min(min_slope, pf.min_slope());
  }
  bool concave_utilities = true;
  double min_omega = std::numeric_limits<double>::infinity();
  for (const auto& p : game.players) {
    if (p.omega < 0.0) concave_utilities = false;
    min_omega = std::min(min_omega, p.omega);
  }
  r.is_monotone = convex_prices && concave_utilities;
  if (!r.is_monotone) return r;
  if (min_omega > 0.0) r.alpha = 2.0 * min_omega;
  if (min_slope > 0.0) {
    r.beta = min_slope;
    r.beta_average = game.convention == AggregationConvention::Sum
                         ? min_slope * game.total_weight()
                         : min_slope;
  }
  return r;
}

}  // namespace aggeq
