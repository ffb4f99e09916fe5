#pragma once

#include <cstdint>
#include <vector>

#include "aggeq/matrix.hpp"
#include "aggeq/parallel.hpp"

namespace aggeq {

/// Partition of N players into I nonempty clusters.
struct ClusterAssignment {
  std::size_t n_clusters = 0;
  std::vector<int> labels;         // length N, values in [0, n_clusters)
  std::vector<std::size_t> sizes;  // length n_clusters, all >= 1
  Matrix centroids;                // n_clusters x d, in the input units
  double objective = 0.0;          // sum over clusters of |S| Var(S)
  std::vector<double> history;     // objective after every Lloyd round

  /// Checks labels/sizes consistency. Throws std::invalid_argument.
  void validate(std::size_t n_points) const;
  /// Members of each cluster, in increasing player order.
  std::vector<std::vector<std::size_t>> members() const;
};

struct KMeansOptions {
  std::uint64_t seed = 0;
  int max_rounds = 300;
  bool standardize = false;  // cluster on per-feature standardised vectors
  Execution execution = Execution::Serial;
};

/// Lloyd iteration from a farthest-point seeding. The first centre is drawn
/// from the seed, the others are the points farthest from the centres chosen
/// so far. Empty clusters are refilled with the point farthest from its own
/// centroid. Throws std::invalid_argument unless 1 <= k <= N.
ClusterAssignment kmeans(const Matrix& points, std::size_t k, const KMeansOptions& opts = {});

/// sum_i sum_{v in S_i} ||v - mean(S_i)||^2
double kmeans_objective(const Matrix& points, const std::vector<int>& labels, std::size_t k);

}  // namespace aggeq
