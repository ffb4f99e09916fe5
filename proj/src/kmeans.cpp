#include "aggeq/kmeans.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "aggeq/rng.hpp"

namespace aggeq {

void ClusterAssignment::validate(std::size_t n_points) const {
  if (labels.size() != n_points) throw std::invalid_argument("assignment: one label per player required");
  if (sizes.size() != n_clusters) throw std::invalid_argument("assignment: sizes length mismatch");
  std::vector<std::size_t> count(n_clusters, 0);
  for (int l : labels) {
    if (l < 0 || static_cast<std::size_t>(l) >= n_clusters)
      throw std::invalid_argument("assignment: label out of range");
    ++count[static_cast<std::size_t>(l)];
  }
  for (std::size_t i = 0; i < n_clusters; ++i) {
    if (count[i] != sizes[i]) throw std::invalid_argument("assignment: sizes disagree with labels");
    if (count[i] == 0) throw std::invalid_argument("assignment: empty cluster");
  }
}

std::vector<std::vector<std::size_t>> ClusterAssignment::members() const {
  std::vector<std::vector<std::size_t>> out(n_clusters);
  for (std::size_t n = 0; n < labels.size(); ++n) out[static_cast<std::size_t>(labels[n])].push_back(n);
  return out;
}

namespace {

double dist2(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

// Cluster means computed as first member + mean of offsets, so a cluster of
// identical points reproduces that point exactly.
Matrix cluster_means(const Matrix& pts, const std::vector<int>& labels, std::size_t k) {
  const std::size_t d = pts.cols();
  Matrix sum(k, d, 0.0);
  std::vector<long> anchor(k, -1);
  std::vector<std::size_t> count(k, 0);
  for (std::size_t n = 0; n < pts.rows(); ++n) {
    const auto c = static_cast<std::size_t>(labels[n]);
    if (anchor[c] < 0) anchor[c] = static_cast<long>(n);
    const auto a = pts.row(static_cast<std::size_t>(anchor[c]));
    const auto p = pts.row(n);
    for (std::size_t j = 0; j < d; ++j) sum(c, j) += p[j] - a[j];
    ++count[c];
  }
  Matrix mean(k, d, 0.0);
  for (std::size_t c = 0; c < k; ++c) {
    if (count[c] == 0) continue;
    const auto a = pts.row(static_cast<std::size_t>(anchor[c]));
    for (std::size_t j = 0; j < d; ++j) mean(c, j) = a[j] + sum(c, j) / static_cast<double>(count[c]);
  }
  return mean;
}

}  // namespace

double kmeans_objective(const Matrix& points, const std::vector<int>& labels, std::size_t k) {
  const Matrix mean = cluster_means(points, labels, k);
  double obj = 0.0;
  for (std::size_t n = 0; n < points.rows(); ++n)
    obj += dist2(points.row(n), mean.row(static_cast<std::size_t>(labels[n])));
  return obj;
}

ClusterAssignment kmeans(const Matrix& points, std::size_t k, const KMeansOptions& opts) {
  const std::size_t N = points.rows(), d = points.cols();
  if (k < 1 || k > N) throw std::invalid_argument("kmeans: need 1 <= k <= N");

  Matrix work = points;
  if (opts.standardize) {
    for (std::size_t j = 0; j < d; ++j) {
      double mean = 0.0, var = 0.0;
      for (std::size_t n = 0; n < N; ++n) mean += points(n, j);
      mean /= static_cast<double>(N);
      for (std::size_t n = 0; n < N; ++n) var += (points(n, j) - mean) * (points(n, j) - mean);
      const double sd = std::sqrt(var / static_cast<double>(N));
      for (std::size_t n = 0; n < N; ++n) work(n, j) = sd > 0.0 ? (points(n, j) - mean) / sd : 0.0;
    }
  }

  // farthest-point seeding
  Rng rng(opts.seed);
  Matrix centres(k, d);
  std::vector<double> nearest(N, std::numeric_limits<double>::infinity());
  std::size_t pick = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(N) - 1));
  for (std::size_t c = 0; c < k; ++c) {
    const auto src = work.row(pick);
    std::copy(src.begin(), src.end(), centres.row(c).begin());
    std::size_t far = 0;
    double far_d = -1.0;
    for (std::size_t n = 0; n < N; ++n) {
      nearest[n] = std::min(nearest[n], dist2(work.row(n), centres.row(c)));
      if (nearest[n] > far_d) {
        far_d = nearest[n];
        far = n;
      }
    }
    pick = far;
  }

  std::vector<int> labels(N, -1), next(N, 0);
  std::vector<double> own_dist(N, 0.0);
  ClusterAssignment out;
  for (int round = 0; round < opts.max_rounds; ++round) {
    for_each_index(opts.execution, static_cast<std::ptrdiff_t>(N), [&](std::ptrdiff_t ni) {
      const auto n = static_cast<std::size_t>(ni);
      int best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < k; ++c) {
        const double dd = dist2(work.row(n), centres.row(c));
        if (dd < best_d) {
          best_d = dd;
          best = static_cast<int>(c);
        }
      }
      next[n] = best;
    });

    // refill empty clusters with the point farthest from its centroid
    std::vector<std::size_t> count(k, 0);
    for (int l : next) ++count[static_cast<std::size_t>(l)];
    for (std::size_t c = 0; c < k; ++c) {
      if (count[c] > 0) continue;
      std::size_t far = N;
      double far_d = -1.0;
      for (std::size_t n = 0; n < N; ++n) {
        const auto lc = static_cast<std::size_t>(next[n]);
        if (count[lc] <= 1) continue;
        const double dd = dist2(work.row(n), centres.row(lc));
        if (dd > far_d) {
          far_d = dd;
          far = n;
        }
      }
      --count[static_cast<std::size_t>(next[far])];
      next[far] = static_cast<int>(c);
      count[c] = 1;
      const auto src = work.row(far);
      std::copy(src.begin(), src.end(), centres.row(c).begin());
    }

    const bool changed = next != labels;
    labels = next;
    centres = cluster_means(work, labels, k);
    out.history.push_back(kmeans_objective(work, labels, k));
    if (!changed) break;
  }

  out.n_clusters = k;
  out.labels = labels;
  out.sizes.assign(k, 0);
  for (int l : labels) ++out.sizes[static_cast<std::size_t>(l)];
  out.centroids = cluster_means(points, labels, k);
  out.objective = kmeans_objective(points, labels, k);
  return out;
}

}  // namespace aggeq
