#include "opinionlearn/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace opinionlearn {

AugmentedDesign augmented_design(const Trajectory& traj, int i) {
  const int n = traj.agents();
  if (i < 0 || i >= n) throw std::out_of_range("agent index out of range");
  AugmentedDesign d;
  d.design.resize(traj.horizon(), n + 1);
  d.design.leftCols(n) = traj.X();
  d.design.col(n).setConstant(traj.states()(0, i));
  d.target = traj.b(i);
  return d;
}

namespace {

LinearConstraintSet box(int dim) {
  LinearConstraintSet cons = LinearConstraintSet::free(dim);
  cons.lb.setConstant(-kBaselineBox);
  cons.ub.setConstant(kBaselineBox);
  return cons;
}

void require_nonempty(const AugmentedDesign& d) {
  if (d.design.rows() == 0 || d.design.rows() != d.target.size())
    throw std::invalid_argument("baseline design is empty or mismatched");
}

}  // namespace

LinearFit ols_fit(const AugmentedDesign& d) {
  require_nonempty(d);
  const SolveResult sol = constrained_lsq(d.design, d.target, box(static_cast<int>(d.design.cols())));
  return {sol.y, sol.status};
}

LinearFit ss_fit(const AugmentedDesign& d) {
  require_nonempty(d);
  const int dim = static_cast<int>(d.design.cols());
  LinearConstraintSet cons = box(dim);
  cons.add_equalities(d.design, d.target);
  const SolveResult sol = min_l1(dim, cons);
  return {sol.y, sol.status};
}

VectorXd LinearBaseline::predict(const VectorXd& x, const VectorXd& x_init) const {
  const Eigen::Index n = x.size();
  VectorXd out(n);
  for (Eigen::Index i = 0; i < n; ++i)
    out(i) = coef.row(i).head(n).dot(x.transpose()) + coef(i, n) * x_init(i);
  return out;
}

namespace {

template <typename Fit>
LinearBaseline fit_linear(const Trajectory& traj, double tau_supp, Fit fit, bool ols_fallback) {
  const int n = traj.agents();
  LinearBaseline out;
  out.coef = MatrixXd::Zero(n, n + 1);
  out.adjacency = SignMatrix::Zero(n, n);
  out.status.resize(n);
  for (int i = 0; i < n; ++i) {
    const AugmentedDesign d = augmented_design(traj, i);
    LinearFit f = fit(d);
    out.status[i] = f.status.code;
    if (!f.status.optimal() && ols_fallback) {
      f = ols_fit(d);
      ++out.fallbacks;
    }
    if (!f.status.optimal()) continue;
    out.coef.row(i) = f.coef.transpose();
    for (int j = 0; j < n; ++j) {
      const double v = f.coef(j);
      out.adjacency(i, j) = v > tau_supp ? 1 : (v < -tau_supp ? -1 : 0);
    }
  }
  return out;
}

}  // namespace

LinearBaseline fit_ols(const Trajectory& traj, double tau_supp) {
  return fit_linear(traj, tau_supp, ols_fit, false);
}

LinearBaseline fit_ss(const Trajectory& traj, double tau_supp) {
  return fit_linear(traj, tau_supp, ss_fit, true);
}

GprModel::GprModel(MatrixXd inputs, const VectorXd& targets, GprParams params)
    : inputs_(std::move(inputs)), params_(params) {
  const Eigen::Index T = inputs_.rows();
  if (T == 0 || targets.size() != T) throw std::invalid_argument("GPR needs matching inputs and targets");
  if (!(params_.noise > 0) || !(params_.length_scale > 0))
    throw std::invalid_argument("GPR noise and length scale must be positive");
  mean_ = targets.mean();
  MatrixXd K(T, T);
  for (Eigen::Index a = 0; a < T; ++a)
    for (Eigen::Index b = a; b < T; ++b)
      K(a, b) = K(b, a) = kernel(inputs_.row(a).transpose(), inputs_.row(b).transpose());
  K.diagonal().array() += params_.noise;
  alpha_ = K.llt().solve((targets.array() - mean_).matrix());
}

double GprModel::kernel(const VectorXd& u, const VectorXd& v) const {
  const double l = params_.length_scale;
  return std::exp(-(u - v).squaredNorm() / (2.0 * l * l));
}

double GprModel::predict(const VectorXd& query) const {
  double s = mean_;
  for (Eigen::Index t = 0; t < inputs_.rows(); ++t)
    s += kernel(query, inputs_.row(t).transpose()) * alpha_(t);
  return s;
}

double median_heuristic(const MatrixXd& inputs) {
  std::vector<double> dist;
  for (Eigen::Index a = 0; a < inputs.rows(); ++a)
    for (Eigen::Index b = a + 1; b < inputs.rows(); ++b)
      dist.push_back((inputs.row(a) - inputs.row(b)).norm());
  if (dist.empty()) return 1.0;
  std::sort(dist.begin(), dist.end());
  const std::size_t k = dist.size();
  const double med = k % 2 ? dist[k / 2] : 0.5 * (dist[k / 2 - 1] + dist[k / 2]);
  return med > 0 ? med : 1.0;
}

VectorXd gpr_fit_predict(const MatrixXd& inputs, const VectorXd& targets, const MatrixXd& queries,
                         double noise) {
  const GprModel model(inputs, targets, {median_heuristic(inputs), noise});
  VectorXd out(queries.rows());
  for (Eigen::Index q = 0; q < queries.rows(); ++q) out(q) = model.predict(queries.row(q).transpose());
  return out;
}

VectorXd GprBaseline::predict(const VectorXd& x, const VectorXd& x_init) const {
  const Eigen::Index n = x.size();
  VectorXd out(n);
  VectorXd query(n + 1);
  query.head(n) = x;
  for (Eigen::Index i = 0; i < n; ++i) {
    query(n) = x_init(i);
    out(i) = models[static_cast<std::size_t>(i)].predict(query);
  }
  return out;
}

GprBaseline fit_gpr(const Trajectory& traj, double noise) {
  GprBaseline out;
  for (int i = 0; i < traj.agents(); ++i) {
    const AugmentedDesign d = augmented_design(traj, i);
    out.models.emplace_back(d.design, d.target, GprParams{median_heuristic(d.design), noise});
  }
  return out;
}

}  // namespace opinionlearn
