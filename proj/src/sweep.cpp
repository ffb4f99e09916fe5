#include "aggeq/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <stdexcept>

namespace aggeq {

SweepResult run_sweep(const GameSpec& game, const SweepOptions& opts, const EquilibriumResult* reference) {
  SweepResult out;
  out.reference = reference ? *reference : solve_vne(game, opts.solver);
  if (!out.reference.converged)
    throw std::runtime_error("reference VNE did not converge within " + std::to_string(opts.solver.max_iters) +
                             " iterations");

  const MonotonicityReport mono = classify_monotonicity(game);
  const Modulus modulus = Modulus::strong(mono.alpha);
  const double N = static_cast<double>(game.n_players());

  for (std::size_t I : opts.clusters) {
    if (I > game.n_players()) throw std::invalid_argument("sweep: cluster count exceeds the number of players");
    for (std::uint64_t seed : opts.seeds) {
      ReductionOptions ro;
      ro.n_clusters = I;
      ro.seed = seed;
      ro.n_dirs = opts.n_dirs;
      ro.execution = opts.solver.execution;
      const ReductionReport rep = reduce(game, ro);

      EquilibriumResult best;
      for (int rep_i = 0; rep_i < std::max(1, opts.timing_repeats); ++rep_i) {
        EquilibriumResult r = solve_svwe(rep.auxiliary_game, opts.solver);
        if (rep_i == 0 || r.wall_time_s < best.wall_time_s) best = std::move(r);
      }
      const Matrix lifted = lift_profile(best.profile, rep.assignment);
      const Vector agg = game.aggregate(lifted);

      SweepRow row;
      row.I = I;
      row.seed = seed;
      row.rel_error = relative_aggregate_error(out.reference.aggregate, agg);
      row.cpu_time_s = best.wall_time_s;
      row.iterations = best.iterations;
      row.converged = best.converged;
      row.K = rep.K;
      row.delta_X = rep.delta_X;
      row.delta_u = rep.delta_u;
      row.rho = rep.rho;
      row.rho_condition_ok = rep.rho_condition_ok;
      row.coupling_violation = coupling_violation(game, agg);
      row.aggregate = agg;
      if (std::isfinite(rep.K)) {
        const auto t2 = thm2_bounds(rep.K, modulus, N);
        row.thm2_bound = t2.back().value;
        row.corollary_bound = corollary_bounds(rep.L2_estimate, modulus, N, rep.K, rep.R).value;
      } else {
        row.thm2_bound = row.corollary_bound = rep.K;
      }
      out.rows.push_back(row);
    }
  }

  std::map<std::size_t, Vector> by_I;
  for (const auto& r : out.rows)
    if (r.rel_error > 0.0) by_I[r.I].push_back(r.rel_error);
  if (by_I.size() >= 3) {
    Vector xs, ys;
    for (auto& [I, errs] : by_I) {
      std::sort(errs.begin(), errs.end());
      const std::size_t m = errs.size();
      xs.push_back(static_cast<double>(I));
      ys.push_back(m % 2 ? errs[m / 2] : 0.5 * (errs[m / 2 - 1] + errs[m / 2]));
    }
    out.fit = fit_rate(xs, ys);
  }
  return out;
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << "I,seed,rel_error,cpu_time_s,iterations,converged,K,thm2_bound,corollary_bound,"
        "delta_X,delta_u,rho,rho_condition_ok\n";
  const auto old = os.precision(12);
  for (const auto& r : rows)
    os << r.I << ',' << r.seed << ',' << r.rel_error << ',' << r.cpu_time_s << ',' << r.iterations << ','
       << (r.converged ? 1 : 0) << ',' << r.K << ',' << r.thm2_bound << ',' << r.corollary_bound << ','
       << r.delta_X << ',' << r.delta_u << ',' << r.rho << ',' << (r.rho_condition_ok ? 1 : 0) << '\n';
  os.precision(old);
}

}  // namespace aggeq
