#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "aggeq/game.hpp"
#include "aggeq/parallel.hpp"

namespace aggeq {

enum class EquilibriumKind { Vne, Svwe };

/// tau_k = c / k (Harmonic) or tau_k = c (Constant), k starting at 1.
struct StepRule {
  enum class Kind { Harmonic, Constant } kind = Kind::Harmonic;
  double c = 1.0;

  double at(long k) const { return kind == Kind::Harmonic ? c / static_cast<double>(k) : c; }
};

struct SolverConfig {
  StepRule step;
  /// Stop when ||(lambda, x)^{k+1} - (lambda, x)^k|| <= stop_tol. Each
  /// population's move counts once per member.
  double stop_tol = 1e-3;
  long max_iters = 200000;
  Vector dual_init;         // empty means zeros
  bool record_trace = false;
  Execution execution = Execution::Serial;
  std::optional<Matrix> initial_profile;  // default: preferred profiles projected
  std::size_t residual_probes = 64;

  void validate() const;
};

struct TraceRow {
  long k = 0;
  double iterate_distance = 0.0;
  double coupling_violation = 0.0;
  double wall_time_s = 0.0;
};

struct EquilibriumResult {
  Matrix profile;     // one row per player or population
  Vector aggregate;   // in the game's convention
  Vector duals;
  long iterations = 0;
  double wall_time_s = 0.0;
  double residual = 0.0;  // GVI gap estimate, see gvi_residual
  bool converged = false;
  double coupling_violation = 0.0;  // max(A X - b), 0 without coupling rows
  double last_distance = 0.0;
  std::vector<TraceRow> trace;
};

/// Symmetric Wardrop equilibrium: every player (population) best-responds
/// with the aggregate held fixed. Population weights come from game.weights.
EquilibriumResult solve_svwe(const GameSpec& game, const SolverConfig& cfg);
/// Same, with explicit population sizes overriding game.weights.
EquilibriumResult solve_svwe(const GameSpec& game, const Vector& weights, const SolverConfig& cfg);
/// Variational Nash equilibrium of an ungrouped game.
EquilibriumResult solve_vne(const GameSpec& game, const SolverConfig& cfg);
EquilibriumResult solve(const GameSpec& game, EquilibriumKind kind, const SolverConfig& cfg);

/// Largest coupling violation max_j (A X - b)_j; 0 when there is no coupling.
double coupling_violation(const GameSpec& game, std::span<const double> aggregate);

/// max over probe profiles z in the coupled feasible set of
/// sum_n w_n <g_n(x*), x*_n - z_n>. Probe 0 is the per-player linear
/// minimiser of <g, z>; the others project random points onto the action
/// sets. Probes violating the coupling are pulled toward x* until feasible.
/// A value <= 0 (up to tolerance) certifies the variational inequality on the
/// probe set. Returns -infinity when n_probe == 0.
double gvi_residual(const GameSpec& game, const EquilibriumResult& result, EquilibriumKind kind,
                    std::size_t n_probe, std::uint64_t seed);

void write_trace_csv(std::ostream& os, const std::vector<TraceRow>& trace);

}  // namespace aggeq
