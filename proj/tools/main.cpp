#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

#include "opinionlearn/experiment.hpp"
#include "opinionlearn/io.hpp"
#include "opinionlearn/metrics.hpp"

using namespace opinionlearn;

namespace {

int cmd_run(const std::string& config, std::uint64_t seed, bool have_seed, const std::string& out,
            const std::string& algos, int jobs) {
  ExperimentConfig cfg = config.empty() ? ExperimentConfig{} : load_config(config);
  if (have_seed) cfg.seed = seed;
  if (!algos.empty()) cfg.roster = parse_roster(algos);
  if (jobs > 0) cfg.jobs = jobs;
  cfg.out_dir = out;
  const ExperimentResult result = run_experiment(cfg);
  write_outputs(cfg, result);
  int failed = 0;
  for (const RunRecord& r : result.runs) failed += r.status.rfind("error", 0) == 0;
  std::cout << result.runs.size() << " runs written to " << out;
  if (failed) std::cout << " (" << failed << " failed)";
  std::cout << "\n";
  return 0;
}

int cmd_simulate(const std::string& config, std::uint64_t seed, bool have_seed, const std::string& out,
                 const std::string& graph_out, int graph, int horizon) {
  ExperimentConfig cfg = config.empty() ? ExperimentConfig{} : load_config(config);
  if (have_seed) cfg.seed = seed;
  const MixedModel model = experiment_model(cfg, graph - 1);
  const Trajectory traj = simulate(model, horizon > 0 ? horizon : cfg.max_horizon());
  std::ofstream os(out, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + out);
  write_trajectory_csv(os, traj);
  if (!graph_out.empty()) {
    std::ofstream gs(graph_out);
    if (!gs) throw std::runtime_error("cannot write " + graph_out);
    write_edge_list(gs, model.graph);
  }
  return 0;
}

int cmd_metrics(const std::string& truth_path, const std::string& estimate_path) {
  std::ifstream ts(truth_path);
  if (!ts) throw std::runtime_error("cannot open " + truth_path);
  std::ifstream es(estimate_path);
  if (!es) throw std::runtime_error("cannot open " + estimate_path);
  const SignedGraph truth = read_edge_list(ts);
  const SignMatrix est = read_adjacency_csv(es);
  const EdgeRates r = tpr_fpr(truth, est);
  write_csv_row(std::cout, {"tpr", "fpr", "positives", "negatives"});
  write_csv_row(std::cout, {format_double(r.tpr), format_double(r.fpr), std::to_string(r.positives),
                            std::to_string(r.negatives)});
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Joint learning of signed networks and opinion update rules"};
  app.require_subcommand(1);

  std::string config, out, algos, graph_out, truth, estimate;
  std::uint64_t seed = 0;
  int jobs = 0;
  int graph = 1;
  int horizon = 0;

  CLI::App* run = app.add_subcommand("run", "Run the experiment protocol and write CSV tables");
  run->add_option("--config", config, "Key-value config file")->check(CLI::ExistingFile);
  CLI::Option* run_seed = run->add_option("--seed", seed, "Master seed (overrides the config)");
  run->add_option("--out", out, "Output directory")->required();
  run->add_option("--algos", algos, "Comma-separated roster: IE,eG,RS,OLS,SS,GPR,IEp,eGp");
  run->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);

  CLI::App* sim = app.add_subcommand("simulate", "Sample one model and write its trajectory");
  sim->add_option("--config", config, "Key-value config file")->check(CLI::ExistingFile);
  CLI::Option* sim_seed = sim->add_option("--seed", seed, "Master seed (overrides the config)");
  sim->add_option("--out", out, "Trajectory CSV")->required();
  sim->add_option("--graph-out", graph_out, "Also write the sampled graph as an edge list");
  sim->add_option("--graph", graph, "Graph number within the experiment (1-based)")
      ->check(CLI::PositiveNumber);
  sim->add_option("--horizon", horizon, "Steps to simulate (default: largest horizon)")
      ->check(CLI::PositiveNumber);

  CLI::App* met = app.add_subcommand("metrics", "TPR/FPR of an estimated adjacency");
  met->add_option("--truth", truth, "True graph edge list")->required()->check(CLI::ExistingFile);
  met->add_option("--estimate", estimate, "Estimated adjacency CSV")->required()->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(config, seed, run_seed->count() > 0, out, algos, jobs);
    if (*sim) return cmd_simulate(config, seed, sim_seed->count() > 0, out, graph_out, graph, horizon);
    if (*met) return cmd_metrics(truth, estimate);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
