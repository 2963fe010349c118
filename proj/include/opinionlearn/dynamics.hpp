#pragma once

#include <Eigen/Dense>

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "opinionlearn/graph.hpp"
#include "opinionlearn/random.hpp"

namespace opinionlearn {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Candidate update rules. The integer labels are the bandit's arm numbers.
enum class RuleType : int { DeGroot = 1, FJ = 2, Repell = 3, HK = 4 };

inline constexpr std::array<RuleType, 4> kAllRules = {RuleType::DeGroot, RuleType::FJ,
                                                      RuleType::Repell, RuleType::HK};

/// 0-based arm index of a rule (DeGroot -> 0, ..., HK -> 3).
inline int arm_index(RuleType r) { return static_cast<int>(r) - 1; }
inline RuleType rule_from_arm(int arm) { return static_cast<RuleType>(arm + 1); }

std::string_view rule_name(RuleType r);
RuleType parse_rule(std::string_view name);

/// One agent's update rule and parameters.
///   DeGroot: theta = w (n)
///   FJ:      theta = [w; lambda] (n + 1)
///   Repell:  theta = signed w (n), diagonal 1 - alpha*|N+ \ {i}| + beta*|N-|
///   HK:      theta = [c] (1)
struct AgentRule {
  RuleType rule = RuleType::DeGroot;
  VectorXd theta;
};

struct MixedModel {
  SignedGraph graph;
  std::vector<AgentRule> rules;
  VectorXd x0;

  int size() const { return graph.size(); }
};

/// States x(0..T), one row per time step.
class Trajectory {
 public:
  Trajectory() = default;
  explicit Trajectory(MatrixXd states);

  int horizon() const { return static_cast<int>(states_.rows()) - 1; }
  int agents() const { return static_cast<int>(states_.cols()); }
  const MatrixXd& states() const { return states_; }
  VectorXd state(int t) const { return states_.row(t).transpose(); }

  /// [x(0) ... x(T-1)]^T
  MatrixXd X() const { return states_.topRows(horizon()); }
  /// [x_i(1) ... x_i(T)]^T
  VectorXd b(int i) const { return states_.col(i).tail(horizon()); }

  /// First T+1 rows as a new trajectory.
  Trajectory prefix(int T) const;

 private:
  MatrixXd states_;
};

double step_degroot(const VectorXd& theta, const VectorXd& x);
double step_fj(const VectorXd& theta, const VectorXd& x, double x_i0);
double step_repell(const VectorXd& theta, const VectorXd& x);

/// Mean of x_j over {j : neighbor_row[j] != 0, |x_j - x_i| <= c}. The
/// self-loop keeps the set nonempty.
double step_hk(double c, const Eigen::Ref<const Eigen::VectorXi>& neighbor_row,
               const VectorXd& x, int i);

/// One synchronous update of every agent. FJ agents anchor to `x_init`.
VectorXd step_all(const MixedModel& model, const VectorXd& x, const VectorXd& x_init);

/// Throws std::invalid_argument when the model cannot be simulated:
/// dimension or parameter-shape mismatches, a disconnected graph, negative
/// edges on non-repelling agents, lambda outside [0,1] or negative c.
void check_simulable(const MixedModel& model);

Trajectory simulate(const MixedModel& model, int T);

struct AssumptionViolation {
  int clause = 0;  // 1..4 for (i)..(iv)
  int agent = -1;  // -1 for graph-level violations
  std::string message;
};

struct ValidationReport {
  std::vector<AssumptionViolation> violations;
  bool ok() const { return violations.empty(); }
  bool violates(int clause) const;
};

ValidationReport validate_assumptions(const MixedModel& model, double eps_lambda);

struct ModelGenConfig {
  std::array<int, 4> agents_per_rule{5, 5, 5, 5};  // DeGroot, FJ, Repell, HK
  double p_link = -1.0;       // < 0 selects (1.1 log n) / n
  double weight_scale = 0.2;  // alpha_i = beta_i = weight_scale / d_i
  double lambda = 0.5;
  double confidence = 0.25;
  double x0_low = -1.0;
  double x0_high = 1.0;
  int max_retries = 1000;

  int agents() const {
    return agents_per_rule[0] + agents_per_rule[1] + agents_per_rule[2] + agents_per_rule[3];
  }
};

/// Agents are laid out in rule blocks: the first agents_per_rule[0] follow
/// DeGroot, then FJ, Repell and HK.
MixedModel sample_model(const ModelGenConfig& gen, Rng& rng);

/// Repelling weights for agent i from (alpha, beta) on graph g.
VectorXd repell_weights(const SignedGraph& g, int i, double alpha, double beta);

/// Uniform weights over the positive neighbors of i (self included).
VectorXd uniform_positive_weights(const SignedGraph& g, int i);

}  // namespace opinionlearn
