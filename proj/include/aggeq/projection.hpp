#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "aggeq/matrix.hpp"

namespace aggeq {

/// Thrown when an action set (or a coupled feasible region) is empty.
class InfeasibleSetError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// {x : lower <= x <= upper, sum(x) == energy}. Without an energy budget the
/// set is the plain box.
struct BoxSimplexSet {
  std::optional<double> energy;
  Vector lower;
  Vector upper;

  std::size_t dim() const { return lower.size(); }
  bool budgeted() const { return energy.has_value(); }

  /// Throws InfeasibleSetError when the set is empty or malformed.
  void validate() const;
  bool contains(std::span<const double> x, double tol) const;
};

/// Scratch storage for the sort-based projection; reuse it across calls in
/// hot loops.
struct ProjectionWorkspace {
  std::vector<std::pair<double, int>> breakpoints;
};

/// Euclidean projection onto a BoxSimplexSet by water-filling: finds the
/// smallest shift mu with sum(clamp(v - mu, lower, upper)) == energy.
/// O(T log T). `out` may alias `v`.
void project_box_simplex(const BoxSimplexSet& set, std::span<const double> v,
                         std::span<double> out, ProjectionWorkspace& ws);
Vector project_box_simplex(const BoxSimplexSet& set, std::span<const double> v);

Vector project_nonneg(std::span<const double> v);

/// argmax_{x in set} <direction, x>. Ties are broken by lowest index.
Vector support_point(const BoxSimplexSet& set, std::span<const double> direction);
double support_function(const BoxSimplexSet& set, std::span<const double> direction);

/// n unit directions in R^dim drawn from a seeded stream. The first k rows
/// are identical for every n >= k with the same seed.
Matrix sample_directions(std::size_t dim, std::size_t n, std::uint64_t seed);

/// max over the rows d of `directions` of |h_a(d) - h_b(d)|. A lower bound on
/// the Hausdorff distance that is exact in the limit of dense directions.
double hausdorff_estimate(const BoxSimplexSet& a, const BoxSimplexSet& b, const Matrix& directions);
double hausdorff_estimate(const BoxSimplexSet& a, const BoxSimplexSet& b, std::size_t n_dirs,
                          std::uint64_t seed);

struct Inradius {
  double radius = 0.0;
  bool degenerate = false;  // set is a single point once fixed coordinates are dropped
};

/// Largest distance from a point of the set to its relative boundary,
/// measured inside the affine hull. Coordinates with lower == upper are fixed
/// and dropped.
Inradius inradius(const BoxSimplexSet& set);

/// Upper bound on max_{x in set} ||x||.
double norm_bound(const BoxSimplexSet& set);

}  // namespace aggeq
