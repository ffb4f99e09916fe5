#include "aggeq/lp.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace aggeq {

namespace {

class Tableau {
 public:
  Tableau(std::size_t m, std::size_t ncols) : m_(m), n_(ncols), t_(m * (ncols + 1), 0.0) {}

  double& at(std::size_t i, std::size_t j) { return t_[i * (n_ + 1) + j]; }
  double& rhs(std::size_t i) { return t_[i * (n_ + 1) + n_]; }

  void pivot(std::size_t pr, std::size_t pc, Vector& reduced, double& value) {
    const double inv = 1.0 / at(pr, pc);
    for (std::size_t j = 0; j <= n_; ++j) t_[pr * (n_ + 1) + j] *= inv;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == pr) continue;
      const double f = at(i, pc);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j <= n_; ++j) t_[i * (n_ + 1) + j] -= f * t_[pr * (n_ + 1) + j];
    }
    const double f = reduced[pc];
    if (f != 0.0) {
      for (std::size_t j = 0; j < n_; ++j) reduced[j] -= f * at(pr, j);
      value += f * rhs(pr);
    }
  }

 private:
  std::size_t m_, n_;
  std::vector<double> t_;
};

}  // namespace

LpSolution solve_lp(const LinearProgram& lp, double tol, int max_pivots) {
  const std::size_t m = lp.b.size();
  const std::size_t n = lp.c.size();
  if (lp.a.rows() != m || lp.a.cols() != n || lp.sense.size() != m)
    throw std::invalid_argument("solve_lp: inconsistent dimensions");

  // Normalise to b >= 0, then lay out columns:
  // [structural | slack/surplus per inequality row | artificial per >=/= row].
  std::vector<double> sign(m, 1.0);
  std::vector<RowSense> sense = lp.sense;
  for (std::size_t i = 0; i < m; ++i) {
    if (lp.b[i] < 0.0) {
      sign[i] = -1.0;
      if (sense[i] == RowSense::LessEqual) sense[i] = RowSense::GreaterEqual;
      else if (sense[i] == RowSense::GreaterEqual) sense[i] = RowSense::LessEqual;
    }
  }
  std::size_t n_slack = 0, n_art = 0;
  for (auto s : sense) {
    if (s != RowSense::Equal) ++n_slack;
    if (s != RowSense::LessEqual) ++n_art;
  }
  const std::size_t ncols = n + n_slack + n_art;
  const std::size_t art_begin = n + n_slack;
  Tableau tab(m, ncols);
  std::vector<std::size_t> basis(m), identity_col(m);
  std::size_t next_slack = n, next_art = art_begin;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) tab.at(i, j) = sign[i] * lp.a(i, j);
    tab.rhs(i) = sign[i] * lp.b[i];
    if (sense[i] == RowSense::LessEqual) {
      tab.at(i, next_slack) = 1.0;
      basis[i] = identity_col[i] = next_slack++;
    } else {
      if (sense[i] == RowSense::GreaterEqual) tab.at(i, next_slack++) = -1.0;
      tab.at(i, next_art) = 1.0;
      basis[i] = identity_col[i] = next_art++;
    }
  }

  int pivots = 0;
  auto run = [&](Vector& reduced, double& value, bool allow_artificial) -> LpStatus {
    while (true) {
      if (++pivots > max_pivots) return LpStatus::IterationLimit;
      std::size_t enter = ncols;
      for (std::size_t j = 0; j < ncols; ++j) {
        if (!allow_artificial && j >= art_begin) break;
        if (reduced[j] > tol) {
          enter = j;
          break;
        }
      }
      if (enter == ncols) return LpStatus::Optimal;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < m; ++i) {
        const double aij = tab.at(i, enter);
        if (aij > tol) best = std::min(best, tab.rhs(i) / aij);
      }
      // Bland: among the minimising rows, the one with the smallest basic index.
      std::size_t leave = m;
      for (std::size_t i = 0; i < m; ++i) {
        const double aij = tab.at(i, enter);
        if (aij <= tol || tab.rhs(i) / aij > best + tol) continue;
        if (leave == m || basis[i] < basis[leave]) leave = i;
      }
      if (leave == m) return LpStatus::Unbounded;
      tab.pivot(leave, enter, reduced, value);
      basis[leave] = enter;
    }
  };

  LpSolution sol;
  // Phase 1: maximise -sum(artificials).
  if (n_art > 0) {
    Vector reduced(ncols, 0.0);
    double value = 0.0;
    for (std::size_t j = art_begin; j < ncols; ++j) reduced[j] = -1.0;
    for (std::size_t i = 0; i < m; ++i) {
      if (basis[i] < art_begin) continue;
      for (std::size_t j = 0; j < ncols; ++j) reduced[j] += tab.at(i, j);
      value -= tab.rhs(i);
    }
    const LpStatus st = run(reduced, value, true);
    if (st == LpStatus::IterationLimit) {
      sol.status = st;
      return sol;
    }
    double scale = 1.0;
    for (double bi : lp.b) scale = std::max(scale, std::abs(bi));
    if (value < -1e-7 * scale) {
      sol.status = LpStatus::Infeasible;
      return sol;
    }
    // Drive zero-level artificials out of the basis where possible.
    for (std::size_t i = 0; i < m; ++i) {
      if (basis[i] < art_begin) continue;
      for (std::size_t j = 0; j < art_begin; ++j) {
        if (std::abs(tab.at(i, j)) > tol) {
          Vector dummy(ncols, 0.0);
          double dv = 0.0;
          tab.pivot(i, j, dummy, dv);
          basis[i] = j;
          break;
        }
      }
    }
  }

  // Phase 2.
  Vector cost(ncols, 0.0);
  for (std::size_t j = 0; j < n; ++j) cost[j] = lp.c[j];
  Vector reduced = cost;
  double value = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double cb = cost[basis[i]];
    if (cb == 0.0) continue;
    for (std::size_t j = 0; j < ncols; ++j) reduced[j] -= cb * tab.at(i, j);
    value += cb * tab.rhs(i);
  }
  sol.status = run(reduced, value, false);
  if (sol.status != LpStatus::Optimal) return sol;

  sol.x.assign(n, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    if (basis[i] < n) sol.x[basis[i]] = tab.rhs(i);
  sol.objective = value;
  // y^T = c_B^T B^{-1}; column k of B^{-1} sits where the initial identity was.
  sol.duals.assign(m, 0.0);
  for (std::size_t k = 0; k < m; ++k) {
    double y = 0.0;
    for (std::size_t i = 0; i < m; ++i) y += cost[basis[i]] * tab.at(i, identity_col[k]);
    sol.duals[k] = sign[k] * y;
  }
  return sol;
}

}  // namespace aggeq
