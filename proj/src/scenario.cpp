#include "aggeq/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "aggeq/coupled_slack.hpp"
#include "aggeq/rng.hpp"

namespace aggeq {

void ScenarioConfig::validate() const {
  auto fail = [](const char* msg) { throw std::invalid_argument(std::string("scenario config: ") + msg); };
  if (n_players < 1) fail("n_players must be at least 1");
  if (horizon < 1) fail("horizon must be at least 1");
  if (!(energy_min > 0.0) || !(energy_min <= energy_max)) fail("need 0 < energy_min <= energy_max");
  if (!(omega_min > 0.0) || !(omega_min <= omega_max)) fail("need 0 < omega_min <= omega_max");
  if (duration_min < 1 || duration_min > horizon) fail("need 1 <= duration_min <= horizon");
  if (!(ramp_limit >= 0.0) || !std::isfinite(ramp_limit)) fail("ramp_limit must be finite and nonnegative");
  if (!(capacity >= 0.0) || !std::isfinite(capacity)) fail("capacity must be finite and nonnegative");
  if (homogeneous_types > n_players) fail("homogeneous_types exceeds n_players");
  if (price_pieces.empty()) fail("price_pieces is empty");
  PriceFunction::from_pieces(price_pieces).validate();
}

Vector plug_and_charge(double energy, const Vector& lower, const Vector& upper) {
  Vector y = lower;
  double rem = energy;
  for (double l : lower) rem -= l;
  std::size_t last = 0;
  for (std::size_t t = 0; t < y.size() && rem > 0.0; ++t) {
    const double room = upper[t] - lower[t];
    const double add = std::min(room, rem);
    if (add <= 0.0) continue;
    y[t] = add == room ? upper[t] : y[t] + add;
    rem -= add;
    last = t;
  }
  // put the rounding residue on the last filled period
  double sum = 0.0;
  for (double v : y) sum += v;
  y[last] = std::clamp(y[last] + (energy - sum), lower[last], upper[last]);
  return y;
}

namespace {

PlayerParams sample_player(Rng& rng, const ScenarioConfig& cfg) {
  const std::size_t T = cfg.horizon;
  PlayerParams p;
  const double E = rng.uniform(cfg.energy_min, cfg.energy_max);
  const auto tau = static_cast<std::size_t>(
      rng.uniform_int(static_cast<std::int64_t>(cfg.duration_min), static_cast<std::int64_t>(T)));
  const auto start = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(T - tau)));
  p.lower.assign(T, 0.0);
  p.upper.assign(T, 0.0);
  const double flat = E / static_cast<double>(tau);
  for (std::size_t t = start; t < start + tau; ++t) {
    p.lower[t] = rng.uniform(0.0, flat);
    p.upper[t] = rng.uniform(flat, E);
  }
  p.omega = rng.uniform(cfg.omega_min, cfg.omega_max);
  p.energy = E;
  p.preferred = plug_and_charge(E, p.lower, p.upper);
  return p;
}

}  // namespace

GameSpec generate(const ScenarioConfig& cfg) {
  cfg.validate();
  const std::size_t T = cfg.horizon, N = cfg.n_players;
  Rng rng(cfg.seed);
  std::vector<PlayerParams> players;
  players.reserve(N);
  if (cfg.homogeneous_types > 0) {
    std::vector<PlayerParams> types;
    for (std::size_t k = 0; k < cfg.homogeneous_types; ++k) types.push_back(sample_player(rng, cfg));
    for (std::size_t n = 0; n < N; ++n) players.push_back(types[n * cfg.homogeneous_types / N]);
  } else {
    for (std::size_t n = 0; n < N; ++n) players.push_back(sample_player(rng, cfg));
  }

  GameSpec game = make_game(std::move(players), {PriceFunction::from_pieces(cfg.price_pieces)},
                            cfg.convention);
  if (cfg.coupling) {
    CouplingConstraint c{Matrix(T + 2, T, 0.0), Vector(T + 2, 0.0)};
    c.matrix(0, T - 1) += 1.0;
    c.matrix(0, 0) -= 1.0;
    c.matrix(1, 0) += 1.0;
    c.matrix(1, T - 1) -= 1.0;
    c.rhs[0] = c.rhs[1] = cfg.ramp_limit;
    for (std::size_t t = 0; t < T; ++t) {
      c.matrix(2 + t, t) = 1.0;
      c.rhs[2 + t] = cfg.capacity;
    }
    game.coupling = std::move(c);
  }
  game.validate();
  if (game.coupling) {
    const CoupledSlack cs = max_coupled_slack(game);
    if (!cs.feasible)
      throw InfeasibleScenarioError("infeasible scenario: no aggregate load satisfies the capacity and ramp limits");
  }
  return game;
}

ScenarioConfig shrink(const ScenarioConfig& cfg, double factor, bool scale_prices) {
  if (!(factor > 0.0) || factor > 1.0) throw std::invalid_argument("shrink: factor must lie in (0, 1]");
  ScenarioConfig out = cfg;
  const double n = std::round(static_cast<double>(cfg.n_players) * factor);
  if (n < 1.0) throw std::invalid_argument("shrink: factor leaves no players");
  out.n_players = static_cast<std::size_t>(n);
  out.capacity = cfg.capacity * factor;
  out.ramp_limit = cfg.ramp_limit * factor;
  if (out.homogeneous_types > out.n_players) out.homogeneous_types = out.n_players;
  if (scale_prices) {
    for (auto& piece : out.price_pieces) {
      piece[0] *= factor;
      piece[2] /= factor;
    }
  }
  return out;
}

}  // namespace aggeq
