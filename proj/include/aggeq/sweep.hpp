#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "aggeq/analysis.hpp"
#include "aggeq/reduction.hpp"
#include "aggeq/solver.hpp"

namespace aggeq {

struct SweepOptions {
  std::vector<std::size_t> clusters = {5, 10, 20, 50, 100};
  std::vector<std::uint64_t> seeds = {0};  // k-means seeds
  SolverConfig solver;
  std::size_t n_dirs = 512;
  int timing_repeats = 1;  // reduced solves are timed best-of-n
};

struct SweepRow {
  std::size_t I = 0;
  std::uint64_t seed = 0;
  double rel_error = 0.0;
  double cpu_time_s = 0.0;
  long iterations = 0;
  bool converged = false;
  double K = 0.0;
  double thm2_bound = 0.0;       // sqrt(K/alpha), average units
  double corollary_bound = 0.0;  // average units
  double delta_X = 0.0;
  double delta_u = 0.0;
  double rho = 0.0;
  bool rho_condition_ok = false;
  double coupling_violation = 0.0;  // of the lifted profile's aggregate
  Vector aggregate;                 // lifted aggregate, not written to the CSV
};

struct SweepResult {
  EquilibriumResult reference;
  std::vector<SweepRow> rows;
  std::optional<RateFit> fit;  // on the median error per I, when at least 3 values of I
};

/// Solves the reference VNE once (or takes `reference`), then for each I and
/// seed reduces the game, solves the reduced SVWE, lifts it and compares
/// aggregates. Throws std::runtime_error if the reference does not converge.
SweepResult run_sweep(const GameSpec& game, const SweepOptions& opts,
                      const EquilibriumResult* reference = nullptr);

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);

}  // namespace aggeq
