#pragma once

#include <Eigen/Dense>

#include <iosfwd>
#include <limits>
#include <string_view>
#include <vector>

namespace opinionlearn {

using Eigen::MatrixXd;
using Eigen::VectorXd;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Linear constraints over y in R^dim:
///   A_eq y = b_eq,  lb <= y <= ub (entries may be +-inf),  y_j = 0 for j in fixed_zero.
struct LinearConstraintSet {
  MatrixXd A_eq;
  VectorXd b_eq;
  VectorXd lb;
  VectorXd ub;
  std::vector<int> fixed_zero;

  /// No equalities, all bounds infinite.
  static LinearConstraintSet free(int dim);

  int dim() const { return static_cast<int>(lb.size()); }
  void add_equality(const VectorXd& row, double rhs);
  /// Appends every row of (A, b).
  void add_equalities(const MatrixXd& A, const VectorXd& b);

  /// Throws std::invalid_argument on shape errors or lb > ub.
  void validate() const;
};

enum class SolveCode { Optimal, Infeasible, NumericalFailure };

std::string_view to_string(SolveCode c);

struct SolveStatus {
  SolveCode code = SolveCode::NumericalFailure;
  double kkt_residual = kInf;

  bool optimal() const { return code == SolveCode::Optimal; }
};

struct SolveResult {
  VectorXd y;
  SolveStatus status;
};

/// Tolerances of the optimality contract.
struct SolverTolerances {
  static constexpr double feasibility = 1e-8;
  static constexpr double kkt = 1e-7;
};

/// Largest violation of any equality, bound or fixed-zero constraint at y.
double max_violation(const VectorXd& y, const LinearConstraintSet& cons);

/// min c^T y subject to cons (bounded simplex, deterministic pivoting).
/// Reports NumericalFailure when the problem is unbounded below.
SolveResult solve_lp(const VectorXd& c, const LinearConstraintSet& cons);

/// min ||y||_1 subject to cons.
SolveResult min_l1(int dim, const LinearConstraintSet& cons);

/// min ||X y - b||^2 subject to cons.
SolveResult constrained_lsq(const MatrixXd& X, const VectorXd& b, const LinearConstraintSet& cons);

/// Plain-text dump of (X, b, cons) for offline inspection.
void write_problem(std::ostream& os, const MatrixXd& X, const VectorXd& b,
                   const LinearConstraintSet& cons);

}  // namespace opinionlearn
