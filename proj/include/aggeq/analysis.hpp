#pragma once

#include <optional>
#include <string>
#include <vector>

#include "aggeq/solver.hpp"

namespace aggeq {

enum class BoundKind {
  Thm1_individual,
  Thm1_mean,
  Thm1_aggregate,
  Thm2_individual,
  Thm2_mean,
  Thm2_aggregate_strong,
  Thm2_aggregate_aggr,
  Prop3_similarity,
  Corollary_aggregate,
};

const char* to_string(BoundKind kind);

/// Monotonicity modulus of the operator: strong (alpha, per player) or
/// aggregatively strong (beta, on the average aggregate).
struct Modulus {
  enum class Kind { Strong, Aggregative } kind = Kind::Strong;
  std::optional<double> value;

  static Modulus strong(std::optional<double> alpha) { return {Kind::Strong, alpha}; }
  static Modulus aggregative(std::optional<double> beta) { return {Kind::Aggregative, beta}; }
};

struct BoundInputs {
  std::optional<double> L1, L2, alpha, beta, N, K, R, T, C;
};

/// All distances are in average-aggregate units (x-bar), per player for the
/// individual kinds. `valid` is false when a required constant is missing,
/// and the value is then +infinity.
struct BoundCertificate {
  BoundKind kind = BoundKind::Thm1_aggregate;
  double value = 0.0;
  BoundInputs inputs;
  bool valid = false;
  std::string note;
};

/// Distance between the VNE and the SVWE of the same game.
/// Strong: individual L2/(alpha sqrt N), mean and aggregate L2/(alpha N).
/// Aggregative: aggregate sqrt(2 R L2 / (beta N)).
std::vector<BoundCertificate> thm1_bounds(double L2, const Modulus& m, double N, double R);

/// Distance between the lifted reduced SVWE and the full SVWE.
/// Strong: individual sqrt(N K / alpha), mean and aggregate sqrt(K / alpha).
/// Aggregative: aggregate sqrt(K / beta).
std::vector<BoundCertificate> thm2_bounds(double K, const Modulus& m, double N);

/// Distance between the reduced SVWE aggregate and the full VNE aggregate.
/// Strong: L2/(alpha N) + sqrt(K/alpha). Aggregative with T and C given:
/// R sqrt(2 T C / (N beta)) + sqrt(K/beta); otherwise the aggregative
/// Thm1 bound plus sqrt(K/beta), flagged in the note.
BoundCertificate corollary_bounds(double L2, const Modulus& m, double N, double K, double R,
                                  std::optional<double> T = std::nullopt,
                                  std::optional<double> C = std::nullopt);

/// sqrt(((L1n + L1m) delta + 2 delta_star R) / alpha_n), for uncoupled games.
double prop3_bound(double alpha_n, double L1n, double L1m, double delta_set, double delta_u_star,
                   double R);

/// ||X_ref - X_approx|| / ||X_ref||. Throws std::invalid_argument when the
/// reference is zero or lengths differ.
double relative_aggregate_error(std::span<const double> ref, std::span<const double> approx);
double relative_aggregate_error(const EquilibriumResult& ref, const EquilibriumResult& approx);

struct RateFit {
  double a = 0.0;   // y ~ x^-a
  double r2 = 0.0;
};

/// Least squares of log y on log x. Throws std::invalid_argument for fewer
/// than 3 points, nonpositive data or constant xs.
RateFit fit_rate(std::span<const double> xs, std::span<const double> ys);

/// Spearman rank correlation with average ranks for ties.
double spearman(std::span<const double> xs, std::span<const double> ys);

}  // namespace aggeq
