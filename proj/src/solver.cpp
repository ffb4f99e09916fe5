#include "aggeq/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <ostream>

#include "aggeq/rng.hpp"

namespace aggeq {

void SolverConfig::validate() const {
  if (!(stop_tol > 0.0)) throw std::invalid_argument("solver: stop_tol must be positive");
  if (max_iters < 1) throw std::invalid_argument("solver: max_iters must be >= 1");
  if (!(step.c > 0.0)) throw std::invalid_argument("solver: step constant must be positive");
  for (double l : dual_init)
    if (l < 0.0) throw std::invalid_argument("solver: dual_init must be nonnegative");
}

double coupling_violation(const GameSpec& game, std::span<const double> aggregate) {
  if (!game.coupling || game.coupling->rows() == 0) return 0.0;
  double worst = -std::numeric_limits<double>::infinity();
  const auto& A = game.coupling->matrix;
  for (std::size_t j = 0; j < A.rows(); ++j)
    worst = std::max(worst, dot(A.row(j), aggregate) - game.coupling->rhs[j]);
  return worst;
}

namespace {

using Clock = std::chrono::steady_clock;

void aggregate_into(const GameSpec& game, const Matrix& x, Execution exec, Vector& agg) {
  const std::size_t N = x.rows(), T = x.cols();
  const double inv = game.convention == AggregationConvention::Average ? 1.0 / game.total_weight() : 1.0;
  // Each period sums players in index order, so the result does not depend on
  // the execution mode.
  for_each_index(exec, static_cast<std::ptrdiff_t>(T), [&](std::ptrdiff_t t) {
    double s = 0.0;
    for (std::size_t n = 0; n < N; ++n) s += game.weight(n) * x(n, static_cast<std::size_t>(t));
    agg[static_cast<std::size_t>(t)] = s * inv;
  });
}

EquilibriumResult run_projected_subgradient(const GameSpec& game, EquilibriumKind kind,
                                            const SolverConfig& cfg) {
  game.validate();
  cfg.validate();
  if (kind == EquilibriumKind::Vne && game.is_grouped())
    throw std::invalid_argument("solve_vne: the game must be ungrouped");

  const auto start = Clock::now();
  const std::size_t N = game.n_players(), T = game.horizon;
  const std::size_t m = game.coupling ? game.coupling->rows() : 0;
  const bool coupled = m > 0;

  std::vector<BoxSimplexSet> sets;
  sets.reserve(N);
  for (const auto& p : game.players) sets.push_back(p.action_set());

  Matrix x(N, T), x_next(N, T);
  if (cfg.initial_profile) {
    if (cfg.initial_profile->rows() != N || cfg.initial_profile->cols() != T)
      throw std::invalid_argument("solver: initial profile shape mismatch");
    ProjectionWorkspace ws;
    for (std::size_t n = 0; n < N; ++n)
      project_box_simplex(sets[n], cfg.initial_profile->row(n), x.row(n), ws);
  } else {
    ProjectionWorkspace ws;
    for (std::size_t n = 0; n < N; ++n)
      project_box_simplex(sets[n], game.players[n].preferred, x.row(n), ws);
  }

  Vector lambda(m, 0.0), lambda_next(m, 0.0);
  if (!cfg.dual_init.empty()) {
    if (cfg.dual_init.size() != m) throw std::invalid_argument("solver: dual_init size mismatch");
    lambda = cfg.dual_init;
  }

  Vector agg(T), agg_next(T), price_shift(T, 0.0);
  Vector player_dist2(N, 0.0);
  aggregate_into(game, x, cfg.execution, agg);

  EquilibriumResult res;
  bool bad_value = false;
  long k = 1;
  for (; k <= cfg.max_iters; ++k) {
    const double tau = cfg.step.at(k);
    if (coupled) {
      // A^T lambda, the multiplier's contribution to every player's step
      const auto& A = game.coupling->matrix;
      std::fill(price_shift.begin(), price_shift.end(), 0.0);
      for (std::size_t j = 0; j < m; ++j)
        for (std::size_t t = 0; t < T; ++t) price_shift[t] += lambda[j] * A(j, t);
    }

    for_each_index(cfg.execution, static_cast<std::ptrdiff_t>(N), [&](std::ptrdiff_t ni) {
      thread_local ProjectionWorkspace ws;
      thread_local Vector g;
      const auto n = static_cast<std::size_t>(ni);
      g.resize(T);
      const auto xn = x.row(n);
      if (kind == EquilibriumKind::Svwe)
        svwe_player_subgradient(game, n, xn, agg, g);
      else
        vne_player_subgradient(game, n, xn, agg, g);
      for (std::size_t t = 0; t < T; ++t) g[t] = xn[t] - tau * (g[t] + price_shift[t]);
      auto out = x_next.row(n);
      project_box_simplex(sets[n], g, out, ws);
      double d2 = 0.0;
      for (std::size_t t = 0; t < T; ++t) {
        const double d = out[t] - xn[t];
        d2 += d * d;
      }
      player_dist2[n] = game.weight(n) * d2;
    });

    aggregate_into(game, x_next, cfg.execution, agg_next);

    double dist2 = 0.0;
    for (double d : player_dist2) dist2 += d;
    if (!std::isfinite(dist2)) {
      bad_value = true;
      break;
    }

    if (coupled) {
      const auto& A = game.coupling->matrix;
      const auto& b = game.coupling->rhs;
      for (std::size_t j = 0; j < m; ++j) {
        const double residual = b[j] - 2.0 * dot(A.row(j), agg_next) + dot(A.row(j), agg);
        lambda_next[j] = std::max(0.0, lambda[j] - tau * residual);
        const double d = lambda_next[j] - lambda[j];
        dist2 += d * d;
      }
      std::swap(lambda, lambda_next);
    }
    std::swap(x, x_next);
    std::swap(agg, agg_next);

    const double dist = std::sqrt(dist2);
    res.last_distance = dist;
    if (cfg.record_trace) {
      res.trace.push_back({k, dist, coupling_violation(game, agg),
                           std::chrono::duration<double>(Clock::now() - start).count()});
    }
    if (dist <= cfg.stop_tol) {
      res.converged = true;
      break;
    }
  }
  if (bad_value) throw std::runtime_error("solver: non-finite cost or subgradient values");

  res.iterations = res.converged ? k : cfg.max_iters;
  res.profile = std::move(x);
  res.aggregate = std::move(agg);
  res.duals = std::move(lambda);
  res.coupling_violation = coupling_violation(game, res.aggregate);
  res.wall_time_s = std::chrono::duration<double>(Clock::now() - start).count();
  if (cfg.residual_probes > 0) res.residual = gvi_residual(game, res, kind, cfg.residual_probes, 0);
  return res;
}

}  // namespace

EquilibriumResult solve_svwe(const GameSpec& game, const SolverConfig& cfg) {
  return run_projected_subgradient(game, EquilibriumKind::Svwe, cfg);
}

EquilibriumResult solve_svwe(const GameSpec& game, const Vector& weights, const SolverConfig& cfg) {
  if (weights.size() != game.n_players())
    throw std::invalid_argument("solve_svwe: one weight per population required");
  GameSpec g = game;
  g.weights = weights;
  return run_projected_subgradient(g, EquilibriumKind::Svwe, cfg);
}

EquilibriumResult solve_vne(const GameSpec& game, const SolverConfig& cfg) {
  return run_projected_subgradient(game, EquilibriumKind::Vne, cfg);
}

EquilibriumResult solve(const GameSpec& game, EquilibriumKind kind, const SolverConfig& cfg) {
  return run_projected_subgradient(game, kind, cfg);
}

double gvi_residual(const GameSpec& game, const EquilibriumResult& result, EquilibriumKind kind,
                    std::size_t n_probe, std::uint64_t seed) {
  if (n_probe == 0) return -std::numeric_limits<double>::infinity();
  const std::size_t N = game.n_players(), T = game.horizon;
  const Matrix& xs = result.profile;
  const Matrix g = kind == EquilibriumKind::Vne ? vne_subgradient(game, xs) : svwe_subgradient(game, xs);
  const Vector agg_star = game.aggregate(xs);

  const bool coupled = game.coupling && game.coupling->rows() > 0;
  Vector a_star, rhs;
  if (coupled) {
    const auto& A = game.coupling->matrix;
    for (std::size_t j = 0; j < A.rows(); ++j) {
      a_star.push_back(dot(A.row(j), agg_star));
      // x* itself may sit marginally outside; never ask for more than it has
      rhs.push_back(std::max(game.coupling->rhs[j], a_star.back()));
    }
  }

  Rng rng(seed);
  ProjectionWorkspace ws;
  Matrix z(N, T);
  Vector box_point(T), neg_g(T);
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < n_probe; ++p) {
    for (std::size_t n = 0; n < N; ++n) {
      const BoxSimplexSet set = game.players[n].action_set();
      if (p == 0) {
        for (std::size_t t = 0; t < T; ++t) neg_g[t] = -g(n, t);
        const Vector v = support_point(set, neg_g);
        std::copy(v.begin(), v.end(), z.row(n).begin());
      } else {
        for (std::size_t t = 0; t < T; ++t)
          box_point[t] = rng.uniform(set.lower[t], set.upper[t]);
        project_box_simplex(set, box_point, z.row(n), ws);
      }
    }
    double step = 1.0;
    if (coupled) {
      const Vector agg_z = game.aggregate(z);
      const auto& A = game.coupling->matrix;
      for (std::size_t j = 0; j < A.rows(); ++j) {
        const double ad = dot(A.row(j), agg_z) - a_star[j];
        if (ad > 0.0) step = std::min(step, (rhs[j] - a_star[j]) / ad);
      }
      step = std::max(step, 0.0);
    }
    double value = 0.0;
    for (std::size_t n = 0; n < N; ++n) {
      double s = 0.0;
      for (std::size_t t = 0; t < T; ++t) s += g(n, t) * (xs(n, t) - z(n, t));
      value += game.weight(n) * step * s;
    }
    best = std::max(best, value);
  }
  return best;
}

void write_trace_csv(std::ostream& os, const std::vector<TraceRow>& trace) {
  os << "k,iterate_distance,coupling_violation,wall_time_s\n";
  const auto old = os.precision(17);
  for (const auto& r : trace)
    os << r.k << ',' << r.iterate_distance << ',' << r.coupling_violation << ',' << r.wall_time_s
       << '\n';
  os.precision(old);
}

}  // namespace aggeq
