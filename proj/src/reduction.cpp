#include "aggeq/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "aggeq/coupled_slack.hpp"
#include "aggeq/projection.hpp"

namespace aggeq {

Vector player_vector(const PlayerParams& p) {
  const std::size_t T = p.preferred.size();
  Vector v;
  v.reserve(3 * T + 2);
  v.push_back(p.omega);
  v.insert(v.end(), p.preferred.begin(), p.preferred.end());
  v.push_back(p.energy.value_or(0.0));
  v.insert(v.end(), p.lower.begin(), p.lower.end());
  v.insert(v.end(), p.upper.begin(), p.upper.end());
  return v;
}

PlayerParams unpack_player_vector(std::span<const double> v, std::size_t horizon) {
  const std::size_t T = horizon;
  if (v.size() != 3 * T + 2) throw std::invalid_argument("player vector: expected length 3T+2");
  PlayerParams p;
  p.omega = v[0];
  p.preferred.assign(v.begin() + 1, v.begin() + 1 + static_cast<std::ptrdiff_t>(T));
  p.energy = v[T + 1];
  p.lower.assign(v.begin() + static_cast<std::ptrdiff_t>(T + 2),
                 v.begin() + static_cast<std::ptrdiff_t>(2 * T + 2));
  p.upper.assign(v.begin() + static_cast<std::ptrdiff_t>(2 * T + 2), v.end());
  return p;
}

Matrix player_matrix(const GameSpec& game) {
  const std::size_t T = game.horizon;
  Matrix m(game.n_players(), 3 * T + 2);
  for (std::size_t n = 0; n < game.n_players(); ++n) {
    const Vector v = player_vector(game.players[n]);
    std::copy(v.begin(), v.end(), m.row(n).begin());
  }
  return m;
}

namespace {

void check_assignment(std::size_t n_players, const ClusterAssignment& a) { a.validate(n_players); }

// Mean of values taken relative to the first one, so identical values give
// that value back exactly.
template <class Get>
double shifted_mean(const std::vector<std::size_t>& members, Get get) {
  const double anchor = get(members.front());
  double s = 0.0;
  for (std::size_t n : members) s += get(n) - anchor;
  return anchor + s / static_cast<double>(members.size());
}

}  // namespace

AuxiliaryGame build_auxiliary(const GameSpec& game, const ClusterAssignment& assignment) {
  check_assignment(game.n_players(), assignment);
  if (game.custom_cost) throw std::invalid_argument("build_auxiliary: custom cost models are not supported");
  if (game.is_grouped()) throw std::invalid_argument("build_auxiliary: game is already grouped");
  const std::size_t T = game.horizon;
  AuxiliaryGame out;
  out.game.horizon = T;
  out.game.prices = game.prices;
  out.game.coupling = game.coupling;
  out.game.convention = game.convention;

  const auto members = assignment.members();
  for (std::size_t i = 0; i < members.size(); ++i) {
    const auto& mem = members[i];
    const auto& P = game.players;
    const bool budgeted = P[mem.front()].energy.has_value();
    for (std::size_t n : mem)
      if (P[n].energy.has_value() != budgeted)
        throw std::invalid_argument("build_auxiliary: cluster mixes budgeted and budget-free players");

    PlayerParams q;
    q.omega = shifted_mean(mem, [&](std::size_t n) { return P[n].omega; });
    q.preferred.resize(T);
    q.lower.resize(T);
    q.upper.resize(T);
    for (std::size_t t = 0; t < T; ++t) {
      q.preferred[t] = shifted_mean(mem, [&](std::size_t n) { return P[n].preferred[t]; });
      q.lower[t] = shifted_mean(mem, [&](std::size_t n) { return P[n].lower[t]; });
      q.upper[t] = std::max(q.lower[t], shifted_mean(mem, [&](std::size_t n) { return P[n].upper[t]; }));
    }
    if (budgeted) {
      double e = shifted_mean(mem, [&](std::size_t n) { return *P[n].energy; });
      double lo = 0.0, hi = 0.0;
      for (std::size_t t = 0; t < T; ++t) {
        lo += q.lower[t];
        hi += q.upper[t];
      }
      const double clamped = std::clamp(e, lo, hi);
      if (std::abs(clamped - e) > 1e-9 * (1.0 + std::abs(e)))
        out.warnings.push_back("population " + std::to_string(i) + ": energy " + std::to_string(e) +
                               " moved into [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
      q.energy = clamped;
    }
    const BoxSimplexSet set = q.action_set();
    if (!set.contains(q.preferred, 1e-12)) q.preferred = project_box_simplex(set, q.preferred);
    out.game.players.push_back(std::move(q));
    out.game.weights.push_back(static_cast<double>(mem.size()));
  }
  return out;
}

double delta_u_closed_form(const GameSpec& game, const GameSpec& aux,
                           const ClusterAssignment& assignment, double r_m) {
  check_assignment(game.n_players(), assignment);
  double worst = 0.0;
  for (std::size_t n = 0; n < game.n_players(); ++n) {
    const auto& pn = game.players[n];
    const auto& pi = aux.players[static_cast<std::size_t>(assignment.labels[n])];
    double d2 = 0.0;
    for (std::size_t t = 0; t < game.horizon; ++t) {
      const double d = pi.omega * pi.preferred[t] - pn.omega * pn.preferred[t];
      d2 += d * d;
    }
    worst = std::max(worst, 2.0 * (std::abs(pi.omega - pn.omega) * r_m + std::sqrt(d2)));
  }
  return worst;
}

namespace {

double max_norm_bound(const GameSpec& game) {
  double R = 0.0;
  for (const auto& p : game.players) R = std::max(R, norm_bound(p.action_set()));
  return R;
}

}  // namespace

Indicators compute_indicators(const GameSpec& game, const GameSpec& aux,
                              const ClusterAssignment& assignment, std::size_t n_dirs,
                              std::uint64_t seed, Execution exec) {
  check_assignment(game.n_players(), assignment);
  if (aux.n_players() != assignment.n_clusters)
    throw std::invalid_argument("compute_indicators: auxiliary game size mismatch");
  const Matrix dirs = sample_directions(game.horizon, n_dirs, seed);
  const std::size_t N = game.n_players();
  Vector per_player(N, 0.0);
  for_each_index(exec, static_cast<std::ptrdiff_t>(N), [&](std::ptrdiff_t ni) {
    const auto n = static_cast<std::size_t>(ni);
    const auto& pi = aux.players[static_cast<std::size_t>(assignment.labels[n])];
    per_player[n] = hausdorff_estimate(game.players[n].action_set(), pi.action_set(), dirs);
  });
  Indicators out;
  for (double d : per_player) out.delta_X = std::max(out.delta_X, d);
  out.delta_u = delta_u_closed_form(game, aux, assignment, max_norm_bound(game) + out.delta_X);
  return out;
}

GameConstants compute_constants(const GameSpec& game, double delta) {
  game.validate();
  if (game.custom_cost) throw std::invalid_argument("compute_constants: congestion family only");
  const std::size_t T = game.horizon, N = game.n_players();
  GameConstants c;
  c.R = max_norm_bound(game);

  // feasible load range per period, and the bounding box of all action sets
  Vector load_lo(T, 0.0), load_hi(T, 0.0);
  Vector box_lo(T, std::numeric_limits<double>::infinity());
  Vector box_hi(T, -std::numeric_limits<double>::infinity());
  Vector e(T, 0.0);
  for (std::size_t n = 0; n < N; ++n) {
    const BoxSimplexSet set = game.players[n].action_set();
    const double s = game.aggregate_scale(n);
    for (std::size_t t = 0; t < T; ++t) {
      e[t] = 1.0;
      const double hi = support_function(set, e);
      e[t] = -1.0;
      const double lo = -support_function(set, e);
      e[t] = 0.0;
      load_lo[t] += s * lo;
      load_hi[t] += s * hi;
      box_lo[t] = std::min(box_lo[t], lo);
      box_hi[t] = std::max(box_hi[t], hi);
    }
  }
  double price2 = 0.0, box_diam2 = 0.0;
  for (std::size_t t = 0; t < T; ++t) {
    const auto& pf = game.prices[t];
    const double p = std::max(std::abs(pf.value(load_lo[t])), std::abs(pf.value(load_hi[t])));
    price2 += p * p;
    box_diam2 += (box_hi[t] - box_lo[t]) * (box_hi[t] - box_lo[t]);
  }
  const double diam = std::min(2.0 * c.R, std::sqrt(box_diam2)) + 2.0 * delta;
  for (const auto& p : game.players)
    c.L1 = std::max(c.L1, std::sqrt(price2) + 2.0 * p.omega * diam);

  double max_slope = 0.0;
  for (const auto& pf : game.prices) max_slope = std::max(max_slope, pf.max_slope());
  const bool sum = game.convention == AggregationConvention::Sum;
  c.L2_estimate = max_slope * c.R * (sum ? game.total_weight() : 1.0);

  c.eta_min = std::numeric_limits<double>::infinity();
  for (const auto& p : game.players) c.eta_min = std::min(c.eta_min, inradius(p.action_set()).radius);

  const CoupledSlack cs = max_coupled_slack(game);
  if (cs.unconstrained) {
    c.coupled_slack = std::numeric_limits<double>::infinity();
    c.rho = c.eta_min;
  } else {
    c.coupled_feasible = cs.feasible;
    c.coupled_slack = cs.slack / (sum ? game.total_weight() : 1.0);
    if (cs.feasible && c.coupled_slack > 0.0 && c.R > 0.0)
      c.rho = c.eta_min * std::min(1.0, c.coupled_slack / (3.0 * c.R));
  }
  return c;
}

double k_bound(double L1, double rho, double R, double delta_X, double delta_u) {
  if (!(rho > 0.0)) throw std::invalid_argument("k_bound: rho must be positive");
  return 2.0 * R * (3.0 * L1 * delta_X / rho + delta_u);
}

Matrix lift_profile(const Matrix& aux_profile, const ClusterAssignment& assignment) {
  if (aux_profile.rows() != assignment.n_clusters)
    throw std::invalid_argument("lift_profile: one row per cluster required");
  Matrix out(assignment.labels.size(), aux_profile.cols());
  for (std::size_t n = 0; n < assignment.labels.size(); ++n) {
    const auto src = aux_profile.row(static_cast<std::size_t>(assignment.labels[n]));
    std::copy(src.begin(), src.end(), out.row(n).begin());
  }
  return out;
}

Matrix average_profile(const Matrix& full_profile, const ClusterAssignment& assignment) {
  check_assignment(full_profile.rows(), assignment);
  const auto members = assignment.members();
  Matrix out(assignment.n_clusters, full_profile.cols());
  for (std::size_t i = 0; i < members.size(); ++i)
    for (std::size_t t = 0; t < full_profile.cols(); ++t)
      out(i, t) = shifted_mean(members[i], [&](std::size_t n) { return full_profile(n, t); });
  return out;
}

ReductionReport reduce(const GameSpec& game, const ReductionOptions& opts) {
  game.validate();
  KMeansOptions ko;
  ko.seed = opts.seed;
  ko.max_rounds = opts.max_rounds;
  ko.standardize = opts.standardize;
  ko.execution = opts.execution;

  ReductionReport r;
  r.assignment = kmeans(player_matrix(game), opts.n_clusters, ko);
  AuxiliaryGame aux = build_auxiliary(game, r.assignment);
  r.auxiliary_game = std::move(aux.game);
  r.warnings = std::move(aux.warnings);
  r.n_dirs = opts.n_dirs;

  const Indicators ind =
      compute_indicators(game, r.auxiliary_game, r.assignment, opts.n_dirs, opts.seed, opts.execution);
  r.delta_X = ind.delta_X;
  r.delta_u = ind.delta_u;

  const GameConstants c = compute_constants(game, r.delta_X);
  r.L1 = c.L1;
  r.L2_estimate = c.L2_estimate;
  r.R = c.R;
  r.rho = c.rho;
  if (!c.coupled_feasible) r.warnings.push_back("coupled feasible region is empty");
  if (r.rho > 0.0) {
    r.K = k_bound(r.L1, r.rho, r.R, r.delta_X, r.delta_u);
  } else {
    r.warnings.push_back("no interior profile found: rho is not positive");
    r.K = r.delta_X == 0.0 ? 2.0 * r.R * r.delta_u : std::numeric_limits<double>::infinity();
  }
  r.rho_condition_ok = r.rho > 0.0 && r.delta_X < r.rho / 2.0;
  return r;
}

void write_labels_csv(std::ostream& os, const ClusterAssignment& assignment) {
  os << "player_id,cluster_id\n";
  for (std::size_t n = 0; n < assignment.labels.size(); ++n) os << n << ',' << assignment.labels[n] << '\n';
}

}  // namespace aggeq
