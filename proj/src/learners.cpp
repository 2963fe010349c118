#include "opinionlearn/learners.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace opinionlearn {

NeighborHints NeighborHints::with_complement(std::vector<int> neigh, int n) {
  std::sort(neigh.begin(), neigh.end());
  neigh.erase(std::unique(neigh.begin(), neigh.end()), neigh.end());
  NeighborHints h;
  h.neigh = std::move(neigh);
  for (int j = 0; j < n; ++j)
    if (!std::binary_search(h.neigh.begin(), h.neigh.end(), j)) h.non.push_back(j);
  return h;
}

void NeighborHints::validate(int n, int i) const {
  std::vector<char> seen(n, 0);
  for (int j : neigh) {
    if (j < 0 || j >= n) throw std::invalid_argument("neighbor hint out of range");
    seen[j] = 1;
  }
  for (int j : non) {
    if (j < 0 || j >= n) throw std::invalid_argument("non-neighbor hint out of range");
    if (seen[j]) throw std::invalid_argument("agent is both a forced neighbor and non-neighbor");
  }
  if (i < 0 || i >= n || !seen[i]) throw std::invalid_argument("agent must be its own neighbor");
}

void LearnerConfig::validate() const {
  if (!(eps_w > 0 && eps_c > 0 && err_floor > 0 && tau_supp >= 0))
    throw std::invalid_argument("learner tolerances must be positive");
  if (!(eps_lambda > 0 && eps_lambda < 0.5))
    throw std::invalid_argument("eps_lambda must lie in (0, 1/2)");
}

Eigen::VectorXi support_row(const VectorXd& y, double tau) {
  Eigen::VectorXi row(y.size());
  for (Eigen::Index j = 0; j < y.size(); ++j) row(j) = y(j) > tau ? 1 : 0;
  return row;
}

Eigen::VectorXi sign_row(const VectorXd& y, double tau) {
  Eigen::VectorXi row(y.size());
  for (Eigen::Index j = 0; j < y.size(); ++j) row(j) = y(j) > tau ? 1 : (y(j) < -tau ? -1 : 0);
  return row;
}

namespace {

// Bounds for the first n coordinates: forced neighbors >= neigh_lb, forced
// non-neighbors fixed at zero, everything else >= default_lb.
LinearConstraintSet hinted_constraints(int dim, int n, const NeighborHints& hints, double neigh_lb,
                                       double default_lb) {
  LinearConstraintSet cons = LinearConstraintSet::free(dim);
  for (int j = 0; j < n; ++j) cons.lb(j) = default_lb;
  for (int j : hints.neigh) cons.lb(j) = std::max(neigh_lb, default_lb);
  cons.fixed_zero = hints.non;
  return cons;
}

Eigen::VectorXi hint_row(int n, const NeighborHints& hints) {
  Eigen::VectorXi row = Eigen::VectorXi::Zero(n);
  for (int j : hints.neigh) row(j) = 1;
  return row;
}

void check_inputs(const MatrixXd& X, const VectorXd& b, const NeighborHints& hints) {
  if (X.rows() != b.size()) throw std::invalid_argument("data matrix and target differ in length");
  const int n = static_cast<int>(X.cols());
  for (int j : hints.neigh)
    if (j < 0 || j >= n) throw std::invalid_argument("neighbor hint out of range");
  for (int j : hints.non)
    if (j < 0 || j >= n) throw std::invalid_argument("non-neighbor hint out of range");
}

MatrixXd augmented(const MatrixXd& X, double x_i0) {
  MatrixXd A(X.rows(), X.cols() + 1);
  A.leftCols(X.cols()) = X;
  A.col(X.cols()).setConstant(x_i0);
  return A;
}

LearnResult infeasible_result(int n, const NeighborHints& hints, Eigen::Index theta_size,
                              SolveStatus status) {
  LearnResult r;
  r.row = hint_row(n, hints);
  r.theta = VectorXd::Zero(theta_size);
  r.status = status;
  return r;
}

// y = [lambda*w; 1 - lambda]  ->  theta = [w; lambda]
LearnResult fj_from_solution(const SolveResult& sol, int n, const NeighborHints& hints,
                             const LearnerConfig& cfg) {
  if (!sol.status.optimal()) return infeasible_result(n, hints, n + 1, sol.status);
  const double lambda = 1.0 - sol.y(n);
  if (!(lambda > 0.0)) {
    SolveStatus st = sol.status;
    st.code = SolveCode::Infeasible;
    return infeasible_result(n, hints, n + 1, st);
  }
  LearnResult r;
  r.status = sol.status;
  r.row = support_row(sol.y.head(n), cfg.tau_supp);
  r.theta.resize(n + 1);
  r.theta.head(n) = sol.y.head(n) / lambda;
  r.theta(n) = lambda;
  return r;
}

}  // namespace

LearnResult learn_degroot(const MatrixXd& X, const VectorXd& b, const NeighborHints& hints,
                          const LearnerConfig& cfg) {
  check_inputs(X, b, hints);
  const int n = static_cast<int>(X.cols());
  LinearConstraintSet cons = hinted_constraints(n, n, hints, cfg.eps_w, 0.0);
  cons.add_equalities(X, b);
  cons.add_equality(VectorXd::Ones(n), 1.0);
  const SolveResult sol = min_l1(n, cons);
  if (!sol.status.optimal()) return infeasible_result(n, hints, n, sol.status);
  LearnResult r;
  r.status = sol.status;
  r.theta = sol.y;
  r.row = support_row(sol.y, cfg.tau_supp);
  return r;
}

LearnResult learn_fj(const MatrixXd& X, const VectorXd& b, double x_i0, const NeighborHints& hints,
                     const LearnerConfig& cfg) {
  check_inputs(X, b, hints);
  const int n = static_cast<int>(X.cols());
  LinearConstraintSet cons =
      hinted_constraints(n + 1, n, hints, cfg.eps_w * cfg.eps_lambda, 0.0);
  cons.lb(n) = cfg.eps_lambda;
  cons.ub(n) = 1.0 - cfg.eps_lambda;
  cons.add_equalities(augmented(X, x_i0), b);
  cons.add_equality(VectorXd::Ones(n + 1), 1.0);
  return fj_from_solution(min_l1(n + 1, cons), n, hints, cfg);
}

LearnResult learn_repell(const MatrixXd& X, const VectorXd& b, const NeighborHints& hints,
                         const LearnerConfig& cfg, RepellSimplex simplex) {
  check_inputs(X, b, hints);
  const int n = static_cast<int>(X.cols());
  LinearConstraintSet cons = hinted_constraints(n, n, hints, cfg.eps_w, -kInf);
  cons.add_equalities(X, b);
  if (simplex == RepellSimplex::On) cons.add_equality(VectorXd::Ones(n), 1.0);
  const SolveResult sol = min_l1(n, cons);
  if (!sol.status.optimal()) return infeasible_result(n, hints, n, sol.status);
  LearnResult r;
  r.status = sol.status;
  r.theta = sol.y;
  r.row = sign_row(sol.y, cfg.tau_supp);
  return r;
}

LearnResult learn_hk(const MatrixXd& X, const VectorXd& b, int i, const NeighborHints& hints,
                     const LearnerConfig& cfg) {
  check_inputs(X, b, hints);
  const int n = static_cast<int>(X.cols());
  if (i < 0 || i >= n) throw std::invalid_argument("agent index out of range");
  if (std::find(hints.neigh.begin(), hints.neigh.end(), i) == hints.neigh.end())
    throw std::invalid_argument("HK learner needs the agent in its own neighbor set");

  std::vector<int> others;
  for (int j : hints.neigh)
    if (j != i) others.push_back(j);
  std::sort(others.begin(), others.end());
  const std::size_t n_i = others.size() + 1;

  double c_star = kInf;
  std::vector<int> order(n_i);
  for (Eigen::Index t = 0; t < X.rows(); ++t) {
    const double xi = X(t, i);
    order[0] = i;
    std::copy(others.begin(), others.end(), order.begin() + 1);
    std::stable_sort(order.begin() + 1, order.end(), [&](int p, int q) {
      return std::abs(X(t, p) - xi) < std::abs(X(t, q) - xi);
    });

    // Largest m attaining the minimal prefix-mean error; near-equal errors
    // count as ties so exact matches are not split by rounding.
    double sum = 0.0;
    double best = kInf;
    std::size_t m_best = 1;
    for (std::size_t m = 1; m <= n_i; ++m) {
      sum += X(t, order[m - 1]);
      const double err = std::abs(sum / static_cast<double>(m) - b(t));
      const double tie = 1e-12 * (1.0 + std::abs(b(t)));
      if (err < best - tie) {
        best = err;
        m_best = m;
      } else if (err <= best + tie) {
        best = std::min(best, err);
        m_best = m;
      }
    }
    if (m_best < n_i) {
      const double c_t = std::abs(X(t, order[m_best]) - xi) - cfg.eps_c;
      c_star = std::min(c_star, c_t);
    }
  }
  if (!std::isfinite(c_star)) c_star = 2.0 * (X.size() ? X.cwiseAbs().maxCoeff() : 0.0);
  c_star = std::max(0.0, c_star);

  LearnResult r;
  r.row = hint_row(n, hints);
  r.theta = VectorXd::Constant(1, c_star);
  r.status = {SolveCode::Optimal, 0.0};
  return r;
}

LearnResult learn_degroot_ls(const MatrixXd& X, const VectorXd& b, const NeighborHints& hints,
                             const LearnerConfig& cfg) {
  check_inputs(X, b, hints);
  const int n = static_cast<int>(X.cols());
  LinearConstraintSet cons = hinted_constraints(n, n, hints, cfg.eps_w, -kInf);
  cons.add_equality(VectorXd::Ones(n), 1.0);
  const SolveResult sol = constrained_lsq(X, b, cons);
  if (!sol.status.optimal()) return infeasible_result(n, hints, n, sol.status);
  LearnResult r;
  r.status = sol.status;
  r.theta = sol.y;
  r.row = support_row(sol.y, cfg.tau_supp);
  return r;
}

LearnResult learn_fj_ls(const MatrixXd& X, const VectorXd& b, double x_i0,
                        const NeighborHints& hints, const LearnerConfig& cfg) {
  check_inputs(X, b, hints);
  const int n = static_cast<int>(X.cols());
  LinearConstraintSet cons =
      hinted_constraints(n + 1, n, hints, cfg.eps_w * cfg.eps_lambda, -kInf);
  cons.lb(n) = cfg.eps_lambda;
  cons.ub(n) = 1.0 - cfg.eps_lambda;
  cons.add_equality(VectorXd::Ones(n + 1), 1.0);
  return fj_from_solution(constrained_lsq(augmented(X, x_i0), b, cons), n, hints, cfg);
}

LearnResult learn_repell_ls(const MatrixXd& X, const VectorXd& b, const NeighborHints& hints,
                            const LearnerConfig& cfg) {
  check_inputs(X, b, hints);
  const int n = static_cast<int>(X.cols());
  LinearConstraintSet cons = LinearConstraintSet::free(n);
  cons.fixed_zero = hints.non;
  cons.add_equality(VectorXd::Ones(n), 1.0);
  const SolveResult sol = constrained_lsq(X, b, cons);
  if (!sol.status.optimal()) return infeasible_result(n, hints, n, sol.status);
  LearnResult r;
  r.status = sol.status;
  r.theta = sol.y;
  r.row = sign_row(sol.y, cfg.tau_supp);
  return r;
}

double predict(RuleType rule, const VectorXd& theta, const Eigen::VectorXi& row,
               const VectorXd& x, int i, double x_i0) {
  switch (rule) {
    case RuleType::DeGroot: return step_degroot(theta, x);
    case RuleType::FJ: return step_fj(theta, x, x_i0);
    case RuleType::Repell: return step_repell(theta, x);
    case RuleType::HK:
      if (theta.size() != 1) throw std::invalid_argument("HK parameter must be a scalar");
      return step_hk(theta(0), row, x, i);
  }
  throw std::invalid_argument("unknown rule");
}

double validation_error(const LearnResult& result, RuleType rule, const ValidationPairs& pairs,
                        int i, double x_i0, const LearnerConfig& cfg) {
  if (!result.feasible()) return kInf;
  const Eigen::Index T = pairs.states.rows();
  if (T == 0 || pairs.next.size() != T) throw std::invalid_argument("validation pairs are empty");
  double sq = 0.0;
  for (Eigen::Index t = 0; t < T; ++t) {
    const VectorXd x = pairs.states.row(t).transpose();
    const double e = predict(rule, result.theta, result.row, x, i, x_i0) - pairs.next(t);
    sq += e * e;
  }
  const double rmse = std::sqrt(sq / static_cast<double>(T));
  return std::isfinite(rmse) ? std::max(rmse, cfg.err_floor) : kInf;
}

}  // namespace opinionlearn
