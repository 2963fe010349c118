#include "opinionlearn/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace opinionlearn {

EdgeRates tpr_fpr(const SignedGraph& truth, const SignMatrix& estimate) {
  const int n = truth.size();
  if (estimate.rows() != n || estimate.cols() != n)
    throw std::invalid_argument("estimate dimension does not match the graph");
  EdgeRates r;
  int tp = 0;
  int fp = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const bool hit = estimate(i, j) != 0;
      if (truth.at(i, j) != 0) {
        ++r.positives;
        tp += hit;
      } else {
        ++r.negatives;
        fp += hit;
      }
    }
  r.tpr = r.positives ? static_cast<double>(tp) / r.positives : 0.0;
  r.fpr = r.negatives ? static_cast<double>(fp) / r.negatives : 0.0;
  return r;
}

double prediction_rmse(const OneStepPredictor& predictor, const MixedModel& truth,
                       const MatrixXd& eval_x0) {
  if (eval_x0.rows() == 0) throw std::invalid_argument("need at least one evaluation state");
  if (eval_x0.cols() != truth.size()) throw std::invalid_argument("evaluation state dimension mismatch");
  double sum = 0.0;
  for (Eigen::Index g = 0; g < eval_x0.rows(); ++g) {
    const VectorXd x0 = eval_x0.row(g).transpose();
    const VectorXd x1 = step_all(truth, x0, x0);
    sum += (predictor(x0, x0) - x1).squaredNorm();
  }
  return std::sqrt(sum / static_cast<double>(eval_x0.rows()));
}

MatrixXd draw_eval_states(int n_pairs, int n, Rng& rng) {
  MatrixXd out(n_pairs, n);
  for (int g = 0; g < n_pairs; ++g)
    for (int i = 0; i < n; ++i) out(g, i) = uniform(rng, -1.0, 1.0);
  return out;
}

double prediction_rmse(const OneStepPredictor& predictor, const MixedModel& truth, int n_pairs,
                       Rng& rng) {
  return prediction_rmse(predictor, truth, draw_eval_states(n_pairs, truth.size(), rng));
}

std::array<double, 4> rule_accuracy(const std::vector<RuleType>& truth,
                                    const std::vector<RuleType>& estimate) {
  if (truth.size() != estimate.size()) throw std::invalid_argument("rule vectors differ in length");
  std::array<int, 4> total{};
  std::array<int, 4> hit{};
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const int k = arm_index(truth[i]);
    ++total[k];
    hit[k] += truth[i] == estimate[i];
  }
  std::array<double, 4> out{};
  for (int k = 0; k < 4; ++k)
    out[k] = total[k] ? static_cast<double>(hit[k]) / total[k]
                      : std::numeric_limits<double>::quiet_NaN();
  return out;
}

}  // namespace opinionlearn
