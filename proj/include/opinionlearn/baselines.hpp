#pragma once

#include <Eigen/Dense>

#include <vector>

#include "opinionlearn/convex.hpp"
#include "opinionlearn/dynamics.hpp"
#include "opinionlearn/graph.hpp"

namespace opinionlearn {

/// Rows [x(t)^T, x_i(0)] for t = 0..T-1 with target x_i(t+1).
struct AugmentedDesign {
  MatrixXd design;
  VectorXd target;
};

AugmentedDesign augmented_design(const Trajectory& traj, int i);

/// Coefficients are searched in [-box, box]^(n+1).
inline constexpr double kBaselineBox = 2.0;

struct LinearFit {
  VectorXd coef;  // n + 1 entries, last one multiplies x_i(0)
  SolveStatus status;
};

/// Box-constrained least squares.
LinearFit ols_fit(const AugmentedDesign& d);
/// Least l1-norm solution of design * y = target inside the box.
LinearFit ss_fit(const AugmentedDesign& d);

/// Linear per-agent predictor x_i(t+1) = coef_i . [x(t); x_i(0)].
struct LinearBaseline {
  MatrixXd coef;         // n x (n+1)
  SignMatrix adjacency;  // |coef_ij| > tau on the first n columns
  std::vector<SolveCode> status;  // per agent, as returned by the primary fit
  int fallbacks = 0;     // agents whose SS fit was replaced by OLS

  VectorXd predict(const VectorXd& x, const VectorXd& x_init) const;
};

LinearBaseline fit_ols(const Trajectory& traj, double tau_supp = 1e-6);
/// Agents whose boxed equality system is infeasible fall back to OLS.
LinearBaseline fit_ss(const Trajectory& traj, double tau_supp = 1e-6);

struct GprParams {
  double length_scale = 1.0;
  double noise = 1e-6;
};

/// Zero-mean GP on centered targets with a squared-exponential kernel.
class GprModel {
 public:
  GprModel(MatrixXd inputs, const VectorXd& targets, GprParams params);

  double predict(const VectorXd& query) const;
  const GprParams& params() const { return params_; }

 private:
  double kernel(const VectorXd& u, const VectorXd& v) const;

  MatrixXd inputs_;  // one input per row
  VectorXd alpha_;
  double mean_ = 0.0;
  GprParams params_;
};

/// Median pairwise Euclidean distance between rows; 1 when it is zero or
/// there are fewer than two rows.
double median_heuristic(const MatrixXd& inputs);

/// Fits with the median-heuristic length scale and returns predictions for
/// every row of `queries`.
VectorXd gpr_fit_predict(const MatrixXd& inputs, const VectorXd& targets, const MatrixXd& queries,
                         double noise = 1e-6);

/// One GP per agent on the augmented design.
struct GprBaseline {
  std::vector<GprModel> models;

  VectorXd predict(const VectorXd& x, const VectorXd& x_init) const;
};

GprBaseline fit_gpr(const Trajectory& traj, double noise = 1e-6);

}  // namespace opinionlearn
