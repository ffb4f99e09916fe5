#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "aggeq/coupled_slack.hpp"
#include "aggeq/io.hpp"
#include "aggeq/sweep.hpp"

namespace fs = std::filesystem;
using namespace aggeq;

namespace {

constexpr int kOk = 0;
constexpr int kNotConverged = 2;
constexpr int kInvalidInput = 3;
constexpr int kIoError = 4;

struct SolverFlags {
  double step_c = 1.0;
  std::string step_rule = "harmonic";
  double stop_tol = 1e-3;
  long max_iters = 200000;
  bool parallel = false;

  void attach(CLI::App* cmd) {
    cmd->add_option("--step-c", step_c, "step size constant c in tau_k = c/k")->capture_default_str();
    cmd->add_option("--step-rule", step_rule, "harmonic (tau_k = c/k) or constant (tau_k = c)")
        ->check(CLI::IsMember({"harmonic", "constant"}))
        ->capture_default_str();
    cmd->add_option("--stop-tol", stop_tol, "stop when the iterate moves less than this")->capture_default_str();
    cmd->add_option("--max-iters", max_iters, "iteration cap")->capture_default_str();
    cmd->add_flag("--parallel", parallel, "run the per-player sweep with OpenMP");
  }

  SolverConfig config() const {
    SolverConfig c;
    c.step.c = step_c;
    if (step_rule == "constant") c.step.kind = StepRule::Kind::Constant;
    c.stop_tol = stop_tol;
    c.max_iters = max_iters;
    c.execution = parallel ? Execution::Parallel : Execution::Serial;
    c.validate();
    return c;
  }
};

fs::path sibling(const fs::path& out, const std::string& suffix) {
  return out.parent_path() / (out.stem().string() + suffix);
}

int cmd_generate(const std::string& config_path, double shrink_factor, bool scale_prices,
                 std::optional<std::uint64_t> seed, const std::string& convention, const fs::path& out) {
  ScenarioConfig cfg;
  if (!config_path.empty()) cfg = scenario_config_from_json(read_json_file(config_path));
  if (seed) cfg.seed = *seed;
  if (convention == "average") cfg.convention = AggregationConvention::Average;
  if (convention == "sum") cfg.convention = AggregationConvention::Sum;
  if (shrink_factor != 1.0 || scale_prices) cfg = shrink(cfg, shrink_factor, scale_prices);
  const GameSpec game = generate(cfg);
  write_json_file(out, to_json(game));
  std::cout << "players " << game.n_players() << ", periods " << game.horizon << ", coupling rows "
            << (game.coupling ? game.coupling->rows() : 0);
  if (game.coupling) std::cout << ", coupled slack " << max_coupled_slack(game).slack;
  std::cout << "\nwrote " << out.string() << "\n";
  return kOk;
}

int cmd_solve(const fs::path& scenario, const std::string& mode, const SolverFlags& flags,
              const std::string& trace, const fs::path& out) {
  const GameSpec game = game_from_json(read_json_file(scenario));
  SolverConfig cfg = flags.config();
  cfg.record_trace = !trace.empty();
  const EquilibriumKind kind = mode == "vne" ? EquilibriumKind::Vne : EquilibriumKind::Svwe;
  const EquilibriumResult r = solve(game, kind, cfg);
  write_json_file(out, to_json(r));
  if (!trace.empty()) {
    std::ostringstream os;
    write_trace_csv(os, r.trace);
    write_text_file(trace, os.str());
  }
  std::cout << mode << (r.converged ? " converged" : " did not converge") << " after " << r.iterations
            << " iterations in " << r.wall_time_s << " s; residual " << r.residual << ", coupling violation "
            << r.coupling_violation << "\n";
  return r.converged ? kOk : kNotConverged;
}

int cmd_reduce(const fs::path& scenario, std::size_t clusters, std::uint64_t seed, bool standardize,
               const fs::path& out) {
  const GameSpec game = game_from_json(read_json_file(scenario));
  if (clusters < 1 || clusters > game.n_players())
    throw std::invalid_argument("--clusters must lie in [1, number of players]");
  ReductionOptions ro;
  ro.n_clusters = clusters;
  ro.seed = seed;
  ro.standardize = standardize;
  const ReductionReport rep = reduce(game, ro);
  write_json_file(out, to_json(rep));
  write_json_file(sibling(out, "_aux.json"), to_json(rep.auxiliary_game));
  std::ostringstream labels;
  write_labels_csv(labels, rep.assignment);
  write_text_file(sibling(out, "_labels.csv"), labels.str());
  std::cout << "I=" << clusters << " delta_X=" << rep.delta_X << " delta_u=" << rep.delta_u << " rho=" << rep.rho
            << " K=" << rep.K << " rho_condition_ok=" << (rep.rho_condition_ok ? "true" : "false") << "\n";
  for (const auto& w : rep.warnings) std::cerr << "warning: " << w << "\n";
  return kOk;
}

int cmd_sweep(const fs::path& scenario, const std::vector<std::size_t>& clusters,
              const std::vector<std::uint64_t>& seeds, const SolverFlags& flags, const fs::path& out_dir) {
  const GameSpec game = game_from_json(read_json_file(scenario));
  SweepOptions so;
  so.clusters = clusters;
  so.seeds = seeds;
  so.solver = flags.config();
  const SweepResult res = run_sweep(game, so);
  fs::create_directories(out_dir);
  std::ostringstream table;
  write_sweep_csv(table, res.rows);
  write_text_file(out_dir / "sweep.csv", table.str());

  Json summary;
  summary["reference"] = {{"iterations", res.reference.iterations},
                          {"wall_time_s", res.reference.wall_time_s},
                          {"converged", res.reference.converged},
                          {"coupling_violation", res.reference.coupling_violation}};
  if (res.fit) summary["fit"] = {{"a", res.fit->a}, {"r2", res.fit->r2}};
  else summary["fit"] = nullptr;
  write_json_file(out_dir / "summary.json", summary);

  bool all_converged = true;
  for (const auto& r : res.rows) {
    all_converged = all_converged && r.converged;
    std::cout << "I=" << r.I << " seed=" << r.seed << " rel_error=" << r.rel_error << " time=" << r.cpu_time_s
              << "s iterations=" << r.iterations << "\n";
  }
  if (res.fit) std::cout << "fitted rate a=" << res.fit->a << " (r2=" << res.fit->r2 << ")\n";
  return all_converged ? kOk : kNotConverged;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Equilibria of aggregative games and their clustered approximations"};
  app.require_subcommand(1);

  std::string config_path, convention, mode = "svwe", trace;
  fs::path scenario, out;
  double shrink_factor = 1.0;
  bool scale_prices = false, standardize = false;
  std::optional<std::uint64_t> gen_seed;
  std::uint64_t seed = 0;
  std::size_t clusters = 5;
  std::vector<std::size_t> cluster_list{5, 10, 20, 50, 100};
  std::vector<std::uint64_t> seed_list{0};
  SolverFlags solve_flags, sweep_flags;

  auto* gen = app.add_subcommand("generate", "sample an EV charging scenario");
  gen->add_option("--config", config_path, "scenario config JSON (defaults when omitted)");
  gen->add_option("--shrink", shrink_factor, "scale players, capacity and ramp by this factor")->capture_default_str();
  gen->add_flag("--scale-prices", scale_prices, "scale the price thresholds along with --shrink");
  gen->add_option("--seed", gen_seed, "override the config seed");
  gen->add_option("--convention", convention, "load convention")->check(CLI::IsMember({"sum", "average"}));
  gen->add_option("--out", out, "output scenario JSON")->required();

  auto* sol = app.add_subcommand("solve", "compute a VNE or SVWE");
  sol->add_option("--scenario", scenario, "scenario JSON")->required();
  sol->add_option("--mode", mode, "vne or svwe")->check(CLI::IsMember({"vne", "svwe"}))->capture_default_str();
  solve_flags.attach(sol);
  sol->add_option("--trace", trace, "write the iteration trace CSV here");
  sol->add_option("--out", out, "output result JSON")->required();

  auto* red = app.add_subcommand("reduce", "cluster players and build the reduced game");
  red->add_option("--scenario", scenario, "scenario JSON")->required();
  red->add_option("--clusters", clusters, "number of clusters I")->capture_default_str();
  red->add_option("--seed", seed, "k-means seed")->capture_default_str();
  red->add_flag("--standardize", standardize, "standardise features before clustering");
  red->add_option("--out", out, "output report JSON; _aux.json and _labels.csv are written alongside")->required();

  auto* swp = app.add_subcommand("sweep", "error and time of reduced solves against the full VNE");
  swp->add_option("--scenario", scenario, "scenario JSON")->required();
  swp->add_option("--clusters", cluster_list, "cluster counts")->delimiter(',')->capture_default_str();
  swp->add_option("--seed", seed_list, "k-means seeds")->delimiter(',')->capture_default_str();
  sweep_flags.attach(swp);
  swp->add_option("--out", out, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalidInput;
  }

  try {
    if (*gen) return cmd_generate(config_path, shrink_factor, scale_prices, gen_seed, convention, out);
    if (*sol) return cmd_solve(scenario, mode, solve_flags, trace, out);
    if (*red) return cmd_reduce(scenario, clusters, seed, standardize, out);
    if (*swp) return cmd_sweep(scenario, cluster_list, seed_list, sweep_flags, out);
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kIoError;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kIoError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const InfeasibleScenarioError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNotConverged;
  }
  return kInvalidInput;
}
