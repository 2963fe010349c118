#pragma once

#include <Eigen/Dense>

#include <vector>

#include "opinionlearn/convex.hpp"
#include "opinionlearn/dynamics.hpp"

namespace opinionlearn {

/// Forced neighbors / forced non-neighbors of one agent (0-based, sorted).
struct NeighborHints {
  std::vector<int> neigh;
  std::vector<int> non;

  /// ({i}, {}): the initial hints of the bandit.
  static NeighborHints self_only(int i) { return {{i}, {}}; }
  /// non := V \ neigh.
  static NeighborHints with_complement(std::vector<int> neigh, int n);

  /// Throws std::invalid_argument if the sets overlap, contain indices outside
  /// [0, n), or if `i` is not a forced neighbor.
  void validate(int n, int i) const;
};

struct LearnerConfig {
  double eps_w = 1e-3;
  double eps_lambda = 0.1;
  double eps_c = 1e-6;
  double err_floor = 1e-12;
  /// |y_j| <= tau_supp counts as zero when reading off adjacency rows.
  double tau_supp = 1e-6;

  void validate() const;
};

/// One agent's estimate from a single-rule learner.
struct LearnResult {
  Eigen::VectorXi row;  // {-1, 0, +1}
  VectorXd theta;
  SolveStatus status;
  double val_err = kInf;

  bool feasible() const { return status.optimal(); }
};

/// Whether the signed learner also imposes 1^T y = 1.
enum class RepellSimplex { Off, On };

LearnResult learn_degroot(const MatrixXd& X, const VectorXd& b, const NeighborHints& hints,
                          const LearnerConfig& cfg);
LearnResult learn_fj(const MatrixXd& X, const VectorXd& b, double x_i0, const NeighborHints& hints,
                     const LearnerConfig& cfg);
LearnResult learn_repell(const MatrixXd& X, const VectorXd& b, const NeighborHints& hints,
                         const LearnerConfig& cfg, RepellSimplex simplex = RepellSimplex::Off);
/// Confidence-bound heuristic. `i` is the agent being learned.
LearnResult learn_hk(const MatrixXd& X, const VectorXd& b, int i, const NeighborHints& hints,
                     const LearnerConfig& cfg);

LearnResult learn_degroot_ls(const MatrixXd& X, const VectorXd& b, const NeighborHints& hints,
                             const LearnerConfig& cfg);
LearnResult learn_fj_ls(const MatrixXd& X, const VectorXd& b, double x_i0,
                        const NeighborHints& hints, const LearnerConfig& cfg);
LearnResult learn_repell_ls(const MatrixXd& X, const VectorXd& b, const NeighborHints& hints,
                            const LearnerConfig& cfg);

/// Support indicator / sign of y after zeroing |y_j| <= tau.
Eigen::VectorXi support_row(const VectorXd& y, double tau);
Eigen::VectorXi sign_row(const VectorXd& y, double tau);

/// One-step prediction of agent i with estimated parameters. HK uses `row`
/// as the neighbor set and theta(0) as the confidence bound.
double predict(RuleType rule, const VectorXd& theta, const Eigen::VectorXi& row,
               const VectorXd& x, int i, double x_i0);

/// Held-out one-step pairs: row t of `states` is x(t), `next(t)` is x_i(t+1).
struct ValidationPairs {
  MatrixXd states;
  VectorXd next;
};

/// RMSE of one-step predictions over `pairs`, floored at cfg.err_floor;
/// infeasible results score +inf.
double validation_error(const LearnResult& result, RuleType rule, const ValidationPairs& pairs,
                        int i, double x_i0, const LearnerConfig& cfg);

}  // namespace opinionlearn
