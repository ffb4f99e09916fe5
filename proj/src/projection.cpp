#include "aggeq/projection.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "aggeq/rng.hpp"

namespace aggeq {

namespace {

double sum(const Vector& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

double budget_tolerance(const BoxSimplexSet& s) {
  double scale = 1.0;
  for (double u : s.upper) scale += std::abs(u);
  return 1e-12 * scale;
}

}  // namespace

void BoxSimplexSet::validate() const {
  if (lower.size() != upper.size()) throw InfeasibleSetError("action set: bound size mismatch");
  for (std::size_t t = 0; t < lower.size(); ++t) {
    if (!(lower[t] <= upper[t]))
      throw InfeasibleSetError("action set: lower bound exceeds upper bound at period " +
                               std::to_string(t));
  }
  if (energy) {
    const double tol = budget_tolerance(*this);
    if (!std::isfinite(*energy) || *energy < sum(lower) - tol || *energy > sum(upper) + tol)
      throw InfeasibleSetError("action set: energy outside [sum(lower), sum(upper)]");
  }
}

bool BoxSimplexSet::contains(std::span<const double> x, double tol) const {
  if (x.size() != dim()) return false;
  double s = 0.0;
  for (std::size_t t = 0; t < dim(); ++t) {
    if (x[t] < lower[t] - tol || x[t] > upper[t] + tol) return false;
    s += x[t];
  }
  return !energy || std::abs(s - *energy) <= tol * std::max<double>(1.0, dim());
}

void project_box_simplex(const BoxSimplexSet& set, std::span<const double> v,
                         std::span<double> out, ProjectionWorkspace& ws) {
  const std::size_t T = set.dim();
  if (v.size() != T || out.size() != T)
    throw std::invalid_argument("project_box_simplex: dimension mismatch");
  const auto& lo = set.lower;
  const auto& hi = set.upper;
  if (!set.energy) {
    for (std::size_t t = 0; t < T; ++t) out[t] = std::clamp(v[t], lo[t], hi[t]);
    return;
  }
  const double E = *set.energy;

  // phi(mu) = sum_t clamp(v_t - mu, l_t, u_t) is nonincreasing. Coordinate t
  // leaves its upper bound at mu = v_t - u_t and reaches its lower bound at
  // mu = v_t - l_t. Scan these breakpoints in increasing order.
  auto& bp = ws.breakpoints;
  bp.clear();
  bp.reserve(2 * T);
  for (std::size_t t = 0; t < T; ++t) {
    bp.emplace_back(v[t] - hi[t], static_cast<int>(t));         // upper -> free
    bp.emplace_back(v[t] - lo[t], -static_cast<int>(t) - 1);    // free -> lower
  }
  std::sort(bp.begin(), bp.end());

  double fixed = sum(hi);  // contribution of clamped coordinates
  double free_v = 0.0;     // sum of v_t over free coordinates
  int n_free = 0;
  double mu = -std::numeric_limits<double>::infinity();
  bool found = false;
  for (const auto& [p, code] : bp) {
    const double phi = fixed + free_v - n_free * p;
    if (phi <= E) {
      // The root lies on the segment ending at p; phi is strictly decreasing
      // there unless no coordinate is free, in which case phi == E already.
      mu = n_free > 0 ? (fixed + free_v - E) / n_free : mu;
      found = true;
      break;
    }
    if (code >= 0) {
      fixed -= hi[code];
      free_v += v[code];
      ++n_free;
    } else {
      const int t = -code - 1;
      free_v -= v[t];
      --n_free;
      fixed += lo[t];
    }
  }
  if (!found) mu = std::numeric_limits<double>::infinity();  // E == sum(lower)
  for (std::size_t t = 0; t < T; ++t) out[t] = std::clamp(v[t] - mu, lo[t], hi[t]);
}

Vector project_box_simplex(const BoxSimplexSet& set, std::span<const double> v) {
  set.validate();
  Vector out(set.dim());
  ProjectionWorkspace ws;
  project_box_simplex(set, v, out, ws);
  return out;
}

Vector project_nonneg(std::span<const double> v) {
  Vector out(v.begin(), v.end());
  for (double& x : out) x = std::max(x, 0.0);
  return out;
}

Vector support_point(const BoxSimplexSet& set, std::span<const double> direction) {
  set.validate();
  const std::size_t T = set.dim();
  if (direction.size() != T) throw std::invalid_argument("support_point: dimension mismatch");
  Vector x(T);
  if (!set.energy) {
    for (std::size_t t = 0; t < T; ++t) x[t] = direction[t] > 0.0 ? set.upper[t] : set.lower[t];
    return x;
  }
  // Linear objective over box and budget: start at the lower corner and pour
  // the remaining energy into coordinates by decreasing direction value.
  std::vector<std::size_t> order(T);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return direction[a] > direction[b]; });
  double remaining = *set.energy - sum(set.lower);
  for (std::size_t t = 0; t < T; ++t) x[t] = set.lower[t];
  for (std::size_t t : order) {
    if (remaining <= 0.0) break;
    const double add = std::min(set.upper[t] - set.lower[t], remaining);
    x[t] += add;
    remaining -= add;
  }
  return x;
}

double support_function(const BoxSimplexSet& set, std::span<const double> direction) {
  const Vector x = support_point(set, direction);
  return dot(direction, x);
}

Matrix sample_directions(std::size_t dim, std::size_t n, std::uint64_t seed) {
  Matrix dirs(n, dim);
  Rng rng(seed);
  for (std::size_t k = 0; k < n; ++k) {
    auto d = dirs.row(k);
    double nrm = 0.0;
    do {
      for (double& x : d) x = rng.normal();
      nrm = norm2(d);
    } while (nrm < 1e-12);
    for (double& x : d) x /= nrm;
  }
  return dirs;
}

double hausdorff_estimate(const BoxSimplexSet& a, const BoxSimplexSet& b, const Matrix& directions) {
  if (a.dim() != b.dim() || directions.cols() != a.dim())
    throw std::invalid_argument("hausdorff_estimate: dimension mismatch");
  if (directions.rows() == 0) throw std::invalid_argument("hausdorff_estimate: need n_dirs > 0");
  double best = 0.0;
  for (std::size_t k = 0; k < directions.rows(); ++k) {
    const auto d = directions.row(k);
    best = std::max(best, std::abs(support_function(a, d) - support_function(b, d)));
  }
  return best;
}

double hausdorff_estimate(const BoxSimplexSet& a, const BoxSimplexSet& b, std::size_t n_dirs,
                          std::uint64_t seed) {
  if (n_dirs == 0) throw std::invalid_argument("hausdorff_estimate: need n_dirs > 0");
  return hausdorff_estimate(a, b, sample_directions(a.dim(), n_dirs, seed));
}

Inradius inradius(const BoxSimplexSet& set) {
  set.validate();
  // Chebyshev radius inside the affine hull. With m free coordinates, every
  // bound constraint has the same normalised gradient length inside the
  // hyperplane sum(x) = E, namely sqrt(1 - 1/m), so the problem reduces to
  // maximising a common slack s: l + s <= x <= u - s with sum(x) = E.
  double min_half_width = std::numeric_limits<double>::infinity();
  double free_lower = 0.0, free_upper = 0.0, fixed = 0.0;
  std::size_t m = 0;
  for (std::size_t t = 0; t < set.dim(); ++t) {
    const double w = set.upper[t] - set.lower[t];
    if (w <= 0.0) {
      fixed += set.lower[t];
      continue;
    }
    ++m;
    free_lower += set.lower[t];
    free_upper += set.upper[t];
    min_half_width = std::min(min_half_width, 0.5 * w);
  }
  if (!set.energy) {
    if (m == 0) return {0.0, true};
    return {min_half_width, false};
  }
  if (m <= 1) return {0.0, true};
  const double E = *set.energy - fixed;
  const double md = static_cast<double>(m);
  const double slack =
      std::max(0.0, std::min({min_half_width, (E - free_lower) / md, (free_upper - E) / md}));
  return {slack / std::sqrt(1.0 - 1.0 / md), false};
}

double norm_bound(const BoxSimplexSet& set) {
  double box = 0.0;
  double max_abs = 0.0;
  bool nonneg = true;
  for (std::size_t t = 0; t < set.dim(); ++t) {
    const double a = std::max(std::abs(set.lower[t]), std::abs(set.upper[t]));
    box += a * a;
    max_abs = std::max(max_abs, a);
    nonneg = nonneg && set.lower[t] >= 0.0;
  }
  double bound = std::sqrt(box);
  // For x >= 0 with sum(x) = E: ||x||^2 <= max_t x_t * E.
  if (set.energy && nonneg) bound = std::min(bound, std::sqrt(max_abs * *set.energy));
  return bound;
}

}  // namespace aggeq
