#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "aggeq/game.hpp"
#include "aggeq/kmeans.hpp"
#include "aggeq/parallel.hpp"

namespace aggeq {

/// [omega, y_1..y_T, E, l_1..l_T, u_1..u_T]. A budget-free player stores 0 in
/// the energy slot; unpacking always yields a budgeted player.
Vector player_vector(const PlayerParams& p);
PlayerParams unpack_player_vector(std::span<const double> v, std::size_t horizon);
/// One player_vector per row.
Matrix player_matrix(const GameSpec& game);

struct AuxiliaryGame {
  GameSpec game;  // one grouped player per cluster, weights = cluster sizes
  std::vector<std::string> warnings;
};

/// Population i takes the within-cluster mean parameters. Prices, coupling
/// and convention are carried over. Throws std::invalid_argument when the
/// assignment does not fit the game or a cluster mixes budgeted and
/// budget-free players.
AuxiliaryGame build_auxiliary(const GameSpec& game, const ClusterAssignment& assignment);

struct Indicators {
  double delta_X = 0.0;
  double delta_u = 0.0;
};

/// max_i max_{n in cluster i} 2(|w_i - w_n| r_m + ||w_i y_i - w_n y_n||)
double delta_u_closed_form(const GameSpec& game, const GameSpec& aux,
                           const ClusterAssignment& assignment, double r_m);

/// delta_X from sampled support functions, delta_u in closed form with
/// r_m = R + delta_X.
Indicators compute_indicators(const GameSpec& game, const GameSpec& aux,
                              const ClusterAssignment& assignment, std::size_t n_dirs,
                              std::uint64_t seed, Execution exec = Execution::Serial);

struct GameConstants {
  double L1 = 0.0;
  double L2_estimate = 0.0;
  double R = 0.0;
  double rho = 0.0;          // 0 when no interior profile was found
  double eta_min = 0.0;      // smallest action-set inradius
  double coupled_slack = 0.0;  // in average units, +inf without coupling
  bool coupled_feasible = true;
};

/// `delta` is the enlargement radius of the deviation domain used by L1.
GameConstants compute_constants(const GameSpec& game, double delta = 0.0);

/// 2R(3 L1 delta_X / rho + delta_u). Throws std::invalid_argument if rho <= 0.
double k_bound(double L1, double rho, double R, double delta_X, double delta_u);

Matrix lift_profile(const Matrix& aux_profile, const ClusterAssignment& assignment);
Matrix average_profile(const Matrix& full_profile, const ClusterAssignment& assignment);

struct ReductionOptions {
  std::size_t n_clusters = 5;
  std::uint64_t seed = 0;
  int max_rounds = 300;
  std::size_t n_dirs = 512;
  bool standardize = false;
  Execution execution = Execution::Serial;
};

struct ReductionReport {
  ClusterAssignment assignment;
  GameSpec auxiliary_game;
  double delta_X = 0.0;
  double delta_u = 0.0;
  double rho = 0.0;
  double L1 = 0.0;
  double L2_estimate = 0.0;
  double R = 0.0;
  double K = 0.0;  // +inf when rho is not positive and delta_X > 0
  bool rho_condition_ok = false;
  std::size_t n_dirs = 0;
  std::vector<std::string> warnings;
};

ReductionReport reduce(const GameSpec& game, const ReductionOptions& opts);

void write_labels_csv(std::ostream& os, const ClusterAssignment& assignment);

}  // namespace aggeq
