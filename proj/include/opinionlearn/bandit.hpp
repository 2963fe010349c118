#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

#include "opinionlearn/dynamics.hpp"
#include "opinionlearn/graph.hpp"
#include "opinionlearn/learners.hpp"
#include "opinionlearn/random.hpp"

namespace opinionlearn {

inline constexpr int kArms = 4;

/// Q value standing in for -log(+inf): finite, below anything -log(err) can
/// produce, so argmax skips it whenever a real payoff exists.
inline constexpr double kInfeasibleQ = -1e300;

struct BanditConfig {
  double eps_m = 0.2;
  double eps_g = 0.2;
  double step_alpha = 0.1;
  int n_iter = 20;
  int t_split = 0;          // training pairs use t = 0 .. t_split - 1
  int b_g = 16;
  double explore_p = -1.0;  // < 0 selects (1.1 log n) / n

  /// Throws std::invalid_argument; `horizon` is the trajectory's T.
  void validate(int horizon) const;
};

/// Training and validation pairs cut from one trajectory.
struct SplitData {
  MatrixXd X_train;  // x(0) .. x(t_split - 1)
  MatrixXd Y_train;  // x(1) .. x(t_split)
  MatrixXd X_val;    // x(t_split) .. x(T - 1)
  MatrixXd Y_val;    // x(t_split + 1) .. x(T)
  VectorXd x0;

  int agents() const { return static_cast<int>(x0.size()); }
  ValidationPairs validation(int i) const { return {X_val, Y_val.col(i)}; }
};

SplitData split_trajectory(const Trajectory& traj, int t_split);

enum class LearnerVariant { L1, LeastSquares };

/// Runs the single-rule learner for `rule` on agent i's training data and
/// fills in its validation error.
LearnResult run_learner(RuleType rule, LearnerVariant variant, const SplitData& data, int i,
                        const NeighborHints& hints, const LearnerConfig& lcfg,
                        RepellSimplex simplex = RepellSimplex::Off);

struct BanditState {
  MatrixXd q;                                     // n x 4 payoffs
  std::array<SignMatrix, kArms> adj_by_rule;      // per-arm adjacency estimates
  std::vector<std::array<VectorXd, kArms>> theta_by_rule;  // [agent][arm]
  std::vector<MatrixXd> err_history;              // p(l), +inf where arm not run
  MatrixXd best_err;                              // min over err_history
  std::vector<int> rule_pick;                     // arm index 0..3 per agent
  int iteration = 0;

  int agents() const { return static_cast<int>(q.rows()); }
};

struct JointEstimate {
  SignMatrix adjacency;
  std::vector<RuleType> rules;
  std::vector<VectorXd> thetas;

  /// One-step prediction of every agent; FJ agents anchor to `x_init`.
  VectorXd predict(const VectorXd& x, const VectorXd& x_init) const;
};

/// Initial estimates with hints ({i}, {}) for every agent and rule.
/// `plus_variant` adds 1^T y = 1 to the signed learner (the IE+ start).
BanditState initialize(const SplitData& data, const LearnerConfig& lcfg, bool plus_variant);
BanditState initialize(const Trajectory& traj, const BanditConfig& cfg, const LearnerConfig& lcfg,
                       bool plus_variant);

/// argmax of a Q row, lowest arm on ties.
int argmax_arm(const Eigen::Ref<const Eigen::RowVectorXd>& q_row);
/// Arm with the smallest historical best error, lowest arm on ties.
int best_error_arm(const BanditState& state, int i);

/// Greedy pick w.p. 1 - eps_m, uniform arm otherwise.
int select_rule(const Eigen::Ref<const Eigen::RowVectorXd>& q_row, double eps_m, Rng& rng);

/// Per-agent picks for iteration `l`, each agent on its own substream of `seed`.
std::vector<int> select_rules(const BanditState& state, const BanditConfig& cfg,
                              std::uint64_t seed, int l);

/// Working presence matrix: rows of |adj_by_rule[pick]| w.p. 1 - eps_g, a
/// random symmetric 0/1 matrix with unit diagonal otherwise.
SignMatrix propose_adjacency(const BanditState& state, const std::vector<int>& picks,
                             const BanditConfig& cfg, Rng& rng);

/// Symmetric 0/1 matrix with unit diagonal and iid links.
SignMatrix random_presence_matrix(int n, double p, Rng& rng);

struct FlipOutcome {
  LearnResult best;  // val_err = +inf when every flip is infeasible
  int flipped = -1;  // j*, -1 when nothing feasible was found
  int evaluated = 0;
};

/// Toggles each j != i in row i of A_tilde, relearns with the arm's learner,
/// and keeps the flip with the smallest validation error (lowest j on ties).
FlipOutcome edge_flip_refine(int i, int arm, const SignMatrix& A_tilde, const SplitData& data,
                             const LearnerConfig& lcfg, LearnerVariant variant);

/// (1 - alpha) q_prev - alpha log(p); +inf error maps to kInfeasibleQ. A
/// sentinel q_prev restarts from -log(p).
double update_q(double q_prev, double p, double step_alpha);

struct RepairOutcome {
  std::vector<int> inconsistent;  // V_i^(incst)
  int candidates = 0;
  bool improved = false;
  LearnResult result;  // best candidate (valid when candidates > 0)
};

/// Symmetry repair for agent i after every agent finished the edge-flip phase
/// of iteration `l`. Reads only `snapshot`; the caller applies the outcome.
RepairOutcome inconsistency_repair(const BanditState& snapshot, const std::vector<int>& picks,
                                   int i, int l, const SplitData& data, const BanditConfig& cfg,
                                   const LearnerConfig& lcfg, Rng& rng);

enum class FinalSelection { QArgmax, BestError };

JointEstimate extract_estimate(const BanditState& state, FinalSelection selection);

/// Called with the state after initialization and after every iteration.
using BanditObserver = std::function<void(const BanditState&)>;

JointEstimate epsilon_greedy(const Trajectory& traj, const BanditConfig& cfg,
                             const LearnerConfig& lcfg, std::uint64_t seed,
                             const BanditObserver& observer = {});

/// epsilon_greedy with eps_m = eps_g = 1.
JointEstimate random_search(const Trajectory& traj, BanditConfig cfg, const LearnerConfig& lcfg,
                            std::uint64_t seed, const BanditObserver& observer = {});

JointEstimate epsilon_greedy_plus(const Trajectory& traj, const BanditConfig& cfg,
                                  const LearnerConfig& lcfg, std::uint64_t seed,
                                  const BanditObserver& observer = {});

/// One JSON object per line: Q-table, picks, errors and per-rule adjacencies.
void write_checkpoint(std::ostream& os, const BanditState& state);

}  // namespace opinionlearn
