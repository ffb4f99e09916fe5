#include "aggeq/coupled_slack.hpp"

#include <cmath>
#include <limits>

#include "aggeq/lp.hpp"

namespace aggeq {

namespace {

Vector aggregate_vertex(const GameSpec& game, std::span<const double> direction) {
  Vector v(game.horizon, 0.0);
  for (std::size_t n = 0; n < game.n_players(); ++n) {
    const Vector x = support_point(game.players[n].action_set(), direction);
    const double s = game.aggregate_scale(n);
    for (std::size_t t = 0; t < game.horizon; ++t) v[t] += s * x[t];
  }
  return v;
}

}  // namespace

CoupledSlack max_coupled_slack(const GameSpec& game, double tol, int max_rounds) {
  CoupledSlack out;
  const std::size_t T = game.horizon;

  std::vector<std::size_t> rows;
  Vector row_norm;
  if (game.coupling) {
    const auto& A = game.coupling->matrix;
    for (std::size_t j = 0; j < A.rows(); ++j) {
      const double nrm = norm2(A.row(j));
      if (nrm > 0.0) {
        rows.push_back(j);
        row_norm.push_back(nrm);
      } else if (game.coupling->rhs[j] < 0.0) {
        out.slack = -std::numeric_limits<double>::infinity();
        return out;
      }
    }
  }
  if (rows.empty()) {
    out.feasible = true;
    out.unconstrained = true;
    out.slack = std::numeric_limits<double>::infinity();
    return out;
  }
  const auto& A = game.coupling->matrix;
  const auto& b = game.coupling->rhs;
  const std::size_t m = rows.size();

  std::vector<Vector> columns;
  {
    Vector pref(T, 0.0);
    for (std::size_t n = 0; n < game.n_players(); ++n) {
      const auto& p = game.players[n];
      const Vector y = project_box_simplex(p.action_set(), p.preferred);
      const double s = game.aggregate_scale(n);
      for (std::size_t t = 0; t < T; ++t) pref[t] += s * y[t];
    }
    columns.push_back(pref);
    // one vertex pushing away from each constraint
    for (std::size_t r = 0; r < m; ++r) {
      Vector d(T);
      for (std::size_t t = 0; t < T; ++t) d[t] = -A(rows[r], t);
      columns.push_back(aggregate_vertex(game, d));
    }
  }

  for (out.rounds = 1; out.rounds <= max_rounds; ++out.rounds) {
    const std::size_t k = columns.size();
    // variables: theta_0..theta_{k-1}, s_plus, s_minus
    LinearProgram lp;
    lp.a = Matrix(m + 1, k + 2);
    lp.b.assign(m + 1, 0.0);
    lp.sense.assign(m + 1, RowSense::LessEqual);
    lp.c.assign(k + 2, 0.0);
    lp.c[k] = 1.0;
    lp.c[k + 1] = -1.0;
    for (std::size_t r = 0; r < m; ++r) {
      for (std::size_t c = 0; c < k; ++c) lp.a(r, c) = dot(A.row(rows[r]), columns[c]);
      lp.a(r, k) = row_norm[r];
      lp.a(r, k + 1) = -row_norm[r];
      lp.b[r] = b[rows[r]];
    }
    for (std::size_t c = 0; c < k; ++c) lp.a(m, c) = 1.0;
    lp.b[m] = 1.0;
    lp.sense[m] = RowSense::Equal;

    const LpSolution sol = solve_lp(lp, tol);
    if (sol.status != LpStatus::Optimal)
      throw std::runtime_error("max_coupled_slack: master LP did not solve");

    // pricing: maximise -(A^T mu) . V - pi over aggregate vertices
    Vector dir(T, 0.0);
    for (std::size_t r = 0; r < m; ++r)
      for (std::size_t t = 0; t < T; ++t) dir[t] -= sol.duals[r] * A(rows[r], t);
    const Vector v = aggregate_vertex(game, dir);
    const double pi = sol.duals[m];
    const double reduced = dot(dir, v) - pi;

    out.slack = sol.objective;
    out.aggregate.assign(T, 0.0);
    for (std::size_t c = 0; c < k; ++c)
      for (std::size_t t = 0; t < T; ++t) out.aggregate[t] += sol.x[c] * columns[c][t];

    if (reduced <= 1e-9 * (1.0 + std::abs(pi))) break;
    columns.push_back(v);
  }
  out.feasible = out.slack >= -1e-9 * (1.0 + std::abs(out.slack));
  return out;
}

}  // namespace aggeq
