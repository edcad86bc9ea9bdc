#include <algorithm>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "vrdec/chebyshev.hpp"
#include "vrdec/config.hpp"
#include "vrdec/experiment.hpp"
#include "vrdec/graph.hpp"
#include "vrdec/mixing.hpp"

namespace {

constexpr int kExitError = 1;
constexpr int kExitDiverged = 2;
constexpr int kExitDemoMissed = 3;
constexpr double kDemoTolerance = 1e-10;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void print_summary(const vrdec::ExperimentResult& result) {
  std::cout << "f* = " << fmt(result.reference.f) << "\n";
  for (const auto& t : result.traces) {
    const auto& last = t.rows.back();
    std::cout << t.variant << ": iters=" << t.iterations << " rounds=" << last.cum_rounds
              << " evals=" << last.cum_evals_per_node << " subopt=" << fmt(last.subopt)
              << " mean_sq_dist=" << fmt(last.mean_sq_dist) << " consensus=" << fmt(last.consensus)
              << " alpha=" << fmt(t.params.alpha) << " b=" << t.params.b
              << (t.padded ? " padded" : "") << (t.diverged ? " DIVERGED" : "") << "\n";
  }
}

int cmd_run(const std::string& config_path, const std::optional<std::string>& out_dir,
            const std::optional<std::uint64_t>& seed, const std::optional<int>& threads) {
  vrdec::ExperimentConfig config = vrdec::load_config(config_path);
  if (seed) config.seed = *seed;
  if (threads) config.threads = *threads;
  std::optional<std::filesystem::path> dir;
  if (out_dir) dir = std::filesystem::path(*out_dir);
  const auto csv_path = vrdec::default_output_path(config, dir);
  try {
    const auto result = vrdec::run_experiment(config);
    vrdec::write_csv(result.traces, csv_path);
    print_summary(result);
    std::cout << "wrote " << csv_path.string() << "\n";
    return 0;
  } catch (const vrdec::DivergenceError& e) {
    vrdec::write_csv(e.result.traces, csv_path);
    print_summary(e.result);
    std::cerr << "error: " << e.what() << "\n";
    std::cerr << "partial trace written to " << csv_path.string() << "\n";
    return kExitDiverged;
  }
}

int cmd_spectrum(const std::string& spec, double floor) {
  const vrdec::Graph graph = vrdec::build_graph(vrdec::parse_graph_spec(spec));
  const vrdec::DenseMatrix metropolis = vrdec::metropolis_weights(graph);
  const vrdec::GossipMatrix w = vrdec::spectral_shift(metropolis, floor);
  // Plain DIGing runs on the matrix floored at sqrt(2)/2.
  const vrdec::GossipMatrix wd =
      vrdec::spectral_shift(metropolis, std::max(floor, vrdec::kDigingFloor));
  const auto extra = vrdec::chebyshev_plan((1.0 - w.lambda_min()) / 2.0, (1.0 - w.sigma2) / 2.0);
  const auto diging = vrdec::chebyshev_plan(1.0 - w.lambda_min(), 1.0 - w.sigma2);
  std::cout << "nodes = " << graph.size() << "\n"
            << "edges = " << graph.edges().size() << "\n"
            << "omega = " << fmt(w.omega_floor) << "\n"
            << "sigma2 = " << fmt(w.sigma2) << "\n"
            << "kappa_c = " << fmt(w.kappa_c) << "\n"
            << "kappa_extra = " << fmt(2.0 * w.kappa_c) << "\n"
            << "kappa_diging = " << fmt(wd.kappa_c * wd.kappa_c) << "\n"
            << "chebyshev_t_extra = " << extra.t << "\n"
            << "chebyshev_t_diging = " << diging.t << "\n";
  return 0;
}

int cmd_solve_ref(const std::string& config_path) {
  const vrdec::ExperimentConfig config = vrdec::load_config(config_path);
  const vrdec::Graph graph = vrdec::build_graph(vrdec::parse_graph_spec(config.graph));
  const vrdec::Problem problem = vrdec::build_problem(config.problem, graph.size());
  const auto ref = vrdec::reference_solution(problem, config.reference_tol);
  std::printf("f* = %.17g\n", ref.f);
  std::printf("grad_norm = %.3e\n", ref.grad_norm);
  std::printf("iterations = %d\n", ref.iterations);
  std::printf("L_f = %.6g\nLbar_f = %.6g\nmu = %.6g\nkappa_s = %.6g\nkappa_b = %.6g\n", problem.L_f,
              problem.Lbar_f, problem.mu, problem.kappa_s, problem.kappa_b);
  return 0;
}

int cmd_demo() {
  vrdec::ExperimentConfig config;
  config.name = "demo";
  config.graph = "ring:5";
  config.problem.family = vrdec::LossFamily::Ridge;
  config.problem.n = 20;
  config.problem.p = 5;
  config.problem.mu = 0.05;
  config.variants.push_back({vrdec::parse_method("VR-EXTRA"), 1.0, {}, {}, {}});
  config.stop.max_iters = 200000;
  config.stop.target_mean_sq_dist = kDemoTolerance;
  const auto result = vrdec::run_experiment(config);
  print_summary(result);
  const auto& last = result.traces.front().rows.back();
  if (!(last.mean_sq_dist <= kDemoTolerance)) {
    std::cerr << "demo missed the tolerance " << kDemoTolerance << "\n";
    return kExitDemoMissed;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decentralized variance-reduced optimization simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  auto* run = app.add_subcommand("run", "Run an experiment config and write its CSV trace");
  run->add_option("--config", config_path, "JSON experiment config")->required();
  run->add_option("--out", out_dir, "Output directory (file is <name>.csv)");
  run->add_option("--seed", seed, "Override the master seed");
  run->add_option("--threads", threads, "Node-parallel workers")->check(CLI::PositiveNumber);

  std::string graph_spec;
  double floor = 0.0;
  auto* spectrum = app.add_subcommand("spectrum", "Print the spectral constants of a graph");
  spectrum->add_option("--graph", graph_spec, "ring:M, path:M, complete:M, grid:RxC, er:M:P:SEED, edges:PATH")
      ->required();
  spectrum->add_option("--floor", floor, "Spectral floor of the shifted matrix")->check(CLI::Range(0.0, 0.999999));

  std::string ref_config;
  auto* solve_ref = app.add_subcommand("solve-ref", "Solve the centralized reference problem");
  solve_ref->add_option("--config", ref_config, "JSON experiment config")->required();

  auto* demo = app.add_subcommand("demo", "Run the built-in ridge demo");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(config_path, out_dir, seed, threads);
    if (*spectrum) return cmd_spectrum(graph_spec, floor);
    if (*solve_ref) return cmd_solve_ref(ref_config);
    if (*demo) return cmd_demo();
  } catch (const vrdec::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
