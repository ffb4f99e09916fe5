#pragma once

// Brute-force references for the test suite. Nothing here calls into the
// aggeq library; inputs use plain standard containers.

#include <array>
#include <functional>
#include <optional>
#include <vector>

namespace oracle {

using Vec = std::vector<double>;

/// {lower <= x <= upper, sum x == energy} or the plain box without energy.
struct Set {
  std::optional<double> energy;
  Vec lower, upper;
};

/// Euclidean projection by enumerating every lower/upper/free pattern
/// (3^T of them) and keeping the closest feasible KKT candidate. T <= 6.
Vec qp_project(const Set& s, const Vec& v);

/// All vertices of the set (at most one coordinate strictly between bounds).
std::vector<Vec> vertices(const Set& s);

/// max <d, x> over the vertices.
double support_by_vertices(const Set& s, const Vec& d);

/// Grid points of a set with T <= 3 at the given spacing (the last
/// coordinate is solved from the budget when there is one).
std::vector<Vec> grid_points(const Set& s, double step);

/// Points on the relative boundary of a budgeted set with T in {2, 3}.
std::vector<Vec> boundary_points(const Set& s, double step);

/// Hausdorff distance between two finite point clouds.
double hausdorff_points(const std::vector<Vec>& a, const std::vector<Vec>& b);

/// max over grid points of the distance to the sampled relative boundary.
double inradius_grid(const Set& s, double step);

/// Price c(X) from [threshold, intercept, slope] pieces (first threshold ignored).
struct Price {
  std::vector<std::array<double, 3>> pieces;
  double value(double x) const;
  double right_slope(double x) const;
};

/// One-period game with at most two populations and at most one coupling row
/// coupling . X <= rhs on the load X = sum_n scale_n x_n.
struct TinyGame {
  struct Player {
    double omega = 0.0, preferred = 0.0, lower = 0.0, upper = 0.0;
  };
  std::vector<Player> players;
  Vec weights;        // empty means all 1
  bool sum = true;    // load is sum (true) or average (false)
  Price price;
  std::optional<double> coupling_coef;  // a in a X <= b
  double coupling_rhs = 0.0;
};

struct GridResult {
  Vec profile;
  double load = 0.0;
  double residual = 0.0;  // natural residual ||x - P(x - F(x))|| at the grid point
};

/// Grid search (final spacing 1e-4, reached by successive zooms) for the
/// profile with the smallest natural residual of the variational inequality.
/// `nash` selects the Nash operator (own load impact included) instead of the
/// Wardrop one.
GridResult grid_equilibrium(const TinyGame& g, bool nash);

/// argmin of a unimodal function on [lo, hi].
double ternary_min(const std::function<double(double)>& f, double lo, double hi, int iters = 200);

/// Minimum of sum_i sum_{v in S_i} ||v - mean S_i||^2 over all partitions
/// into exactly k nonempty clusters. N <= 10, k <= 3.
double exhaustive_kmeans(const std::vector<Vec>& points, int k);

/// For T = 3 budgeted sets only: the load set of a weighted sum of such sets
/// is {sum X = E, L <= X <= U}; this maximises the smallest normalised slack
/// min_j (b_j - a_j X) / ||a_j|| over it by zooming grids.
double coupled_slack_grid_t3(const std::vector<Set>& sets, const Vec& scales,
                             const std::vector<Vec>& a, const Vec& b);

/// Largest ||x|| over the vertices of the set.
double max_norm_by_vertices(const Set& s);

}  // namespace oracle
