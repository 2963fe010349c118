#pragma once

#include <Eigen/Dense>

#include <array>
#include <functional>
#include <vector>

#include "opinionlearn/dynamics.hpp"
#include "opinionlearn/graph.hpp"
#include "opinionlearn/random.hpp"

namespace opinionlearn {

struct EdgeRates {
  double tpr = 0.0;
  double fpr = 0.0;
  int positives = 0;  // true nonzero off-diagonal entries
  int negatives = 0;
};

/// Presence-based rates over directed off-diagonal entries. A rate whose
/// population is empty is reported as 0.
EdgeRates tpr_fpr(const SignedGraph& truth, const SignMatrix& estimate);

/// x(t+1) given x(t) and x(0).
using OneStepPredictor = std::function<VectorXd(const VectorXd& x, const VectorXd& x_init)>;

/// sqrt(sum_g ||x_hat^(g)(1) - x^(g)(1)||^2 / G) over the rows of `eval_x0`.
double prediction_rmse(const OneStepPredictor& predictor, const MixedModel& truth,
                       const MatrixXd& eval_x0);

/// Same, with G fresh initial states drawn iid Uniform(-1, 1).
double prediction_rmse(const OneStepPredictor& predictor, const MixedModel& truth, int n_pairs,
                       Rng& rng);

/// G x n matrix of iid Uniform(-1, 1) states.
MatrixXd draw_eval_states(int n_pairs, int n, Rng& rng);

/// Per rule (DeGroot, FJ, Repell, HK): fraction of agents with that true rule
/// whose estimate matches; NaN when the rule has no agents.
std::array<double, 4> rule_accuracy(const std::vector<RuleType>& truth,
                                    const std::vector<RuleType>& estimate);

}  // namespace opinionlearn
