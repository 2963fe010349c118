#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "opinionlearn/bandit.hpp"
#include "opinionlearn/dynamics.hpp"
#include "opinionlearn/graph.hpp"
#include "opinionlearn/learners.hpp"

namespace opinionlearn {

enum class Algorithm { IE, EG, RS, OLS, SS, GPR, IEp, EGp };

inline constexpr std::array<Algorithm, 8> kAllAlgorithms{
    Algorithm::IE, Algorithm::EG, Algorithm::RS, Algorithm::OLS,
    Algorithm::SS, Algorithm::GPR, Algorithm::IEp, Algorithm::EGp};

/// IE, eG, RS, OLS, SS, GPR, IEp, eGp
std::string_view algorithm_name(Algorithm a);
Algorithm parse_algorithm(std::string_view name);
/// Comma-separated names; duplicates rejected.
std::vector<Algorithm> parse_roster(std::string_view list);

/// True for the algorithms that report a network estimate.
bool has_topology(Algorithm a);
/// True for the algorithms that report per-agent rules.
bool has_rules(Algorithm a);

struct ExperimentConfig {
  ModelGenConfig model;
  std::vector<int> horizons{10, 15, 20};
  int graphs = 10;
  int eval_pairs = 50;
  BanditConfig bandit;  // t_split <= 0 selects floor(4T/5) per horizon
  LearnerConfig learner;
  std::vector<Algorithm> roster{kAllAlgorithms.begin(), kAllAlgorithms.end()};
  std::uint64_t seed = 1;
  int jobs = 1;
  std::string out_dir;  // empty: keep results in memory only
  bool write_artifacts = true;  // graphs, trajectories and estimates next to the CSVs

  int agents() const { return model.agents(); }
  int max_horizon() const;
  int t_split_for(int T) const;
  /// Throws std::invalid_argument.
  void validate() const;
};

/// Recognised keys are the ones write_config emits. Unknown keys throw.
ExperimentConfig config_from_key_values(const std::map<std::string, std::string>& kv);
ExperimentConfig load_config(const std::string& path);
void write_config(std::ostream& os, const ExperimentConfig& cfg);

struct RunRecord {
  int graph = 0;  // 1-based
  int horizon = 0;
  Algorithm algorithm = Algorithm::IE;
  std::string status = "ok";
  double tpr = 0.0;  // NaN when not applicable or failed
  double fpr = 0.0;
  double rmse = 0.0;
  std::array<double, 4> accuracy{};  // NaN when not applicable
  SignMatrix adjacency;              // empty for GPR and failures
};

struct ExperimentResult {
  std::vector<MixedModel> models;  // one per graph
  std::vector<RunRecord> runs;     // graph-major, then horizon, then roster order
};

/// Model for graph g (0-based) under `cfg`, identical across calls.
MixedModel experiment_model(const ExperimentConfig& cfg, int g);

ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Long format: run,algorithm,T,metric,value,status.
void write_runs_csv(std::ostream& os, const ExperimentResult& result);
/// algorithm,T,metric,count,mean,median,min,q1,q3,max over finite values.
void write_summary_csv(std::ostream& os, const ExperimentResult& result,
                       const std::vector<Algorithm>& roster, const std::vector<int>& horizons);

/// Writes runs.csv, summary.csv, config.txt and (optionally) artifacts to cfg.out_dir.
void write_outputs(const ExperimentConfig& cfg, const ExperimentResult& result);

/// Quantile with linear interpolation between order statistics.
double quantile(std::vector<double> values, double p);

}  // namespace opinionlearn
