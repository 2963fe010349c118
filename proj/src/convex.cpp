#include "opinionlearn/convex.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <stdexcept>

namespace opinionlearn {

LinearConstraintSet LinearConstraintSet::free(int dim) {
  LinearConstraintSet c;
  c.A_eq.resize(0, dim);
  c.b_eq.resize(0);
  c.lb = VectorXd::Constant(dim, -kInf);
  c.ub = VectorXd::Constant(dim, kInf);
  return c;
}

void LinearConstraintSet::add_equality(const VectorXd& row, double rhs) {
  if (row.size() != dim()) throw std::invalid_argument("equality row has the wrong length");
  A_eq.conservativeResize(A_eq.rows() + 1, dim());
  A_eq.row(A_eq.rows() - 1) = row.transpose();
  b_eq.conservativeResize(b_eq.size() + 1);
  b_eq(b_eq.size() - 1) = rhs;
}

void LinearConstraintSet::add_equalities(const MatrixXd& A, const VectorXd& b) {
  if (A.cols() != dim() || A.rows() != b.size())
    throw std::invalid_argument("equality block has the wrong shape");
  const Eigen::Index r0 = A_eq.rows();
  A_eq.conservativeResize(r0 + A.rows(), dim());
  A_eq.bottomRows(A.rows()) = A;
  b_eq.conservativeResize(r0 + b.size());
  b_eq.tail(b.size()) = b;
}

void LinearConstraintSet::validate() const {
  const int d = dim();
  if (ub.size() != d) throw std::invalid_argument("bound vectors differ in length");
  if (A_eq.cols() != d && A_eq.rows() > 0)
    throw std::invalid_argument("equality matrix column count differs from the dimension");
  if (A_eq.rows() != b_eq.size()) throw std::invalid_argument("equality rhs has the wrong length");
  for (int j = 0; j < d; ++j)
    if (!(lb(j) <= ub(j))) throw std::invalid_argument("lower bound exceeds upper bound");
  for (int j : fixed_zero)
    if (j < 0 || j >= d) throw std::invalid_argument("fixed-zero index out of range");
}

std::string_view to_string(SolveCode c) {
  switch (c) {
    case SolveCode::Optimal: return "optimal";
    case SolveCode::Infeasible: return "infeasible";
    case SolveCode::NumericalFailure: return "numerical_failure";
  }
  return "?";
}

double max_violation(const VectorXd& y, const LinearConstraintSet& cons) {
  double v = 0.0;
  if (cons.A_eq.rows() > 0) v = (cons.A_eq * y - cons.b_eq).cwiseAbs().maxCoeff();
  for (Eigen::Index j = 0; j < y.size(); ++j) {
    v = std::max(v, cons.lb(j) - y(j));
    v = std::max(v, y(j) - cons.ub(j));
  }
  for (int j : cons.fixed_zero) v = std::max(v, std::abs(y(j)));
  return v;
}

namespace {

// ---------------------------------------------------------------------------
// Standard form: min c^T z  s.t.  A z = b,  0 <= z <= upper.
// ---------------------------------------------------------------------------

struct StandardLp {
  MatrixXd A;
  VectorXd b;
  VectorXd c;
  VectorXd upper;
};

struct StandardSolution {
  SolveCode code = SolveCode::NumericalFailure;
  VectorXd z;
  double kkt = kInf;
};

enum class PhaseOutcome { Optimal, Unbounded, Stalled };

// Revised simplex with bounded variables. The basis is refactorized every
// iteration; problems here have at most a few dozen rows. Pricing is Dantzig
// with lowest-index tie-breaking and falls back to Bland's rule after a run of
// degenerate pivots, so the pivot sequence is a deterministic function of the
// input.
class BoundedSimplex {
 public:
  explicit BoundedSimplex(const StandardLp& lp) : n_struct_(static_cast<int>(lp.A.cols())) {
    m_ = static_cast<int>(lp.A.rows());
    const int total = n_struct_ + m_;
    A_.setZero(m_, total);
    A_.leftCols(n_struct_) = lp.A;
    b_ = lp.b;
    for (int r = 0; r < m_; ++r) {
      if (b_(r) < 0) {
        A_.row(r).head(n_struct_) *= -1.0;
        b_(r) = -b_(r);
      }
      A_(r, n_struct_ + r) = 1.0;
    }
    upper_.resize(total);
    upper_.head(n_struct_) = lp.upper;
    upper_.tail(m_).setConstant(kInf);
    cost_struct_ = lp.c;
    x_ = VectorXd::Zero(total);
    x_.tail(m_) = b_;
    at_upper_.assign(total, 0);
    basis_.resize(m_);
    for (int r = 0; r < m_; ++r) basis_[r] = n_struct_ + r;
    max_iter_ = 50 * total + 1000;
  }

  StandardSolution solve() {
    StandardSolution out;
    const double scale_b = std::max(1.0, b_.size() ? b_.cwiseAbs().maxCoeff() : 0.0);

    VectorXd phase1 = VectorXd::Zero(n_struct_ + m_);
    phase1.tail(m_).setOnes();
    if (m_ > 0) {
      const PhaseOutcome p1 = run_phase(phase1);
      if (p1 != PhaseOutcome::Optimal) return out;
      if (x_.tail(m_).sum() > 1e-9 * scale_b) {
        out.code = SolveCode::Infeasible;
        return out;
      }
    }
    for (int r = 0; r < m_; ++r) upper_(n_struct_ + r) = 0.0;

    VectorXd phase2 = VectorXd::Zero(n_struct_ + m_);
    phase2.head(n_struct_) = cost_struct_;
    const PhaseOutcome p2 = run_phase(phase2);
    if (p2 != PhaseOutcome::Optimal) return out;

    out.code = SolveCode::Optimal;
    out.z = x_.head(n_struct_);
    out.kkt = last_dual_infeasibility_;
    if (m_ > 0) out.kkt = std::max(out.kkt, (A_ * x_ - b_).cwiseAbs().maxCoeff());
    return out;
  }

 private:
  bool basic(int j) const { return std::find(basis_.begin(), basis_.end(), j) != basis_.end(); }

  PhaseOutcome run_phase(const VectorXd& cost) {
    const int total = n_struct_ + m_;
    const double dtol = 1e-9 * std::max(1.0, cost.cwiseAbs().maxCoeff());
    constexpr double kPivotTol = 1e-11;
    constexpr double kRatioTie = 1e-12;
    bool bland = false;
    int degenerate_run = 0;
    std::vector<char> is_basic(total, 0);

    for (int iter = 0; iter < max_iter_; ++iter) {
      std::fill(is_basic.begin(), is_basic.end(), 0);
      for (int j : basis_) is_basic[j] = 1;

      VectorXd rhs = b_;
      for (int j = 0; j < total; ++j)
        if (!is_basic[j] && at_upper_[j]) rhs -= A_.col(j) * upper_(j);
      for (int j = 0; j < total; ++j)
        if (!is_basic[j]) x_(j) = at_upper_[j] ? upper_(j) : 0.0;

      Eigen::PartialPivLU<MatrixXd> lu;
      VectorXd pi = VectorXd::Zero(m_);
      if (m_ > 0) {
        MatrixXd B(m_, m_);
        VectorXd cb(m_);
        for (int r = 0; r < m_; ++r) {
          B.col(r) = A_.col(basis_[r]);
          cb(r) = cost(basis_[r]);
        }
        lu.compute(B);
        if (!(lu.rcond() > 1e-14)) return PhaseOutcome::Stalled;
        const VectorXd xb = lu.solve(rhs);
        for (int r = 0; r < m_; ++r) x_(basis_[r]) = xb(r);
        pi = lu.transpose().solve(cb);
      }

      int entering = -1;
      double best_score = 0.0;
      double dual_infeas = 0.0;
      for (int j = 0; j < total; ++j) {
        if (is_basic[j] || upper_(j) <= 0.0) continue;
        const double d = cost(j) - (m_ > 0 ? pi.dot(A_.col(j)) : 0.0);
        const double score = at_upper_[j] ? d : -d;
        dual_infeas = std::max(dual_infeas, score);
        if (score <= dtol) continue;
        if (entering < 0 || (!bland && score > best_score)) {
          entering = j;
          best_score = score;
        }
      }
      last_dual_infeasibility_ = std::max(0.0, dual_infeas);
      if (entering < 0) return PhaseOutcome::Optimal;

      const double dir = at_upper_[entering] ? -1.0 : 1.0;
      VectorXd w = m_ > 0 ? VectorXd(lu.solve(A_.col(entering))) : VectorXd();
      double t_rows = kInf;
      int leave = -1;
      double leave_delta = 0.0;
      for (int r = 0; r < m_; ++r) {
        if (std::abs(w(r)) <= kPivotTol) continue;
        const int j = basis_[r];
        const double delta = -dir * w(r);
        double t;
        if (delta < 0) {
          t = std::max(0.0, x_(j)) / -delta;
        } else {
          if (!std::isfinite(upper_(j))) continue;
          t = std::max(0.0, upper_(j) - x_(j)) / delta;
        }
        bool take = false;
        if (leave < 0 || t < t_rows - kRatioTie) {
          take = true;
        } else if (t <= t_rows + kRatioTie) {
          take = bland ? j < basis_[leave]
                       : std::abs(w(r)) > std::abs(w(leave)) ||
                             (std::abs(w(r)) == std::abs(w(leave)) && j < basis_[leave]);
        }
        if (take) {
          t_rows = t;
          leave = r;
          leave_delta = delta;
        }
      }

      const double t_flip = upper_(entering);
      if (!std::isfinite(t_flip) && leave < 0) return PhaseOutcome::Unbounded;

      double step;
      if (t_flip <= t_rows) {
        step = t_flip;
        at_upper_[entering] = !at_upper_[entering];
      } else {
        step = t_rows;
        const int out = basis_[leave];
        at_upper_[out] = leave_delta > 0 ? 1 : 0;
        basis_[leave] = entering;
        at_upper_[entering] = 0;
      }

      if (step <= 1e-12) {
        if (++degenerate_run > 2 * m_ + 10) bland = true;
      } else {
        degenerate_run = 0;
      }
    }
    return PhaseOutcome::Stalled;
  }

  int n_struct_;
  int m_;
  MatrixXd A_;
  VectorXd b_;
  VectorXd upper_;
  VectorXd cost_struct_;
  VectorXd x_;
  std::vector<char> at_upper_;
  std::vector<int> basis_;
  int max_iter_;
  double last_dual_infeasibility_ = 0.0;
};

StandardSolution solve_without_rows(const StandardLp& lp) {
  StandardSolution out;
  const Eigen::Index N = lp.c.size();
  out.z = VectorXd::Zero(N);
  for (Eigen::Index j = 0; j < N; ++j) {
    if (lp.c(j) < 0) {
      if (!std::isfinite(lp.upper(j))) return out;  // unbounded
      out.z(j) = lp.upper(j);
    }
  }
  out.code = SolveCode::Optimal;
  out.kkt = 0.0;
  return out;
}

StandardSolution solve_standard(const StandardLp& lp) {
  if (lp.A.rows() == 0) return solve_without_rows(lp);
  return BoundedSimplex(lp).solve();
}

// Maps y_j = offset + sign * z[col] (- z[neg] when split).
struct VarMap {
  bool fixed = false;
  double offset = 0.0;
  double sign = 1.0;
  int col = -1;
  int neg = -1;
};

enum class Objective { Linear, L1 };

struct Reduction {
  std::vector<VarMap> vars;
  StandardLp lp;
};

std::vector<char> fixed_mask(const LinearConstraintSet& cons) {
  std::vector<char> fixed(cons.dim(), 0);
  for (int j : cons.fixed_zero) fixed[j] = 1;
  return fixed;
}

Reduction reduce(const VectorXd& c, const LinearConstraintSet& cons, Objective obj) {
  const int d = cons.dim();
  const std::vector<char> zero = fixed_mask(cons);
  Reduction red;
  red.vars.resize(d);
  std::vector<double> upper;
  std::vector<double> cost;
  auto new_col = [&](double up, double cst) {
    upper.push_back(up);
    cost.push_back(cst);
    return static_cast<int>(upper.size()) - 1;
  };

  for (int j = 0; j < d; ++j) {
    VarMap& v = red.vars[j];
    const double l = cons.lb(j);
    const double u = cons.ub(j);
    if (zero[j] || l == u) {
      v.fixed = true;
      v.offset = zero[j] ? 0.0 : l;
      continue;
    }
    if (obj == Objective::L1) {
      if (l >= 0.0) {
        v.offset = l;
        v.col = new_col(u - l, 1.0);
      } else if (u <= 0.0) {
        v.offset = u;
        v.sign = -1.0;
        v.col = new_col(u - l, 1.0);
      } else {
        v.col = new_col(u, 1.0);
        v.neg = new_col(-l, 1.0);
      }
    } else {
      if (std::isfinite(l)) {
        v.offset = l;
        v.col = new_col(u - l, c(j));
      } else if (std::isfinite(u)) {
        v.offset = u;
        v.sign = -1.0;
        v.col = new_col(kInf, -c(j));
      } else {
        v.col = new_col(kInf, c(j));
        v.neg = new_col(kInf, -c(j));
      }
    }
  }

  const Eigen::Index m = cons.A_eq.rows();
  const Eigen::Index N = static_cast<Eigen::Index>(upper.size());
  red.lp.A = MatrixXd::Zero(m, N);
  red.lp.b = cons.b_eq;
  red.lp.c = Eigen::Map<VectorXd>(cost.data(), N);
  red.lp.upper = Eigen::Map<VectorXd>(upper.data(), N);
  for (int j = 0; j < d; ++j) {
    const VarMap& v = red.vars[j];
    for (Eigen::Index r = 0; r < m; ++r) {
      const double a = cons.A_eq(r, j);
      if (a == 0.0) continue;
      red.lp.b(r) -= a * v.offset;
      if (v.col >= 0) red.lp.A(r, v.col) += a * v.sign;
      if (v.neg >= 0) red.lp.A(r, v.neg) -= a;
    }
  }
  return red;
}

VectorXd expand(const Reduction& red, const VectorXd& z) {
  VectorXd y(red.vars.size());
  for (std::size_t j = 0; j < red.vars.size(); ++j) {
    const VarMap& v = red.vars[j];
    double val = v.offset;
    if (v.col >= 0) val += v.sign * z(v.col);
    if (v.neg >= 0) val -= z(v.neg);
    y(static_cast<Eigen::Index>(j)) = val;
  }
  return y;
}

SolveResult solve_reduced(const VectorXd& c, const LinearConstraintSet& cons, Objective obj) {
  cons.validate();
  SolveResult res;
  const Reduction red = reduce(c, cons, obj);
  const StandardSolution sol = solve_standard(red.lp);
  res.status.code = sol.code;
  if (sol.code != SolveCode::Optimal) {
    res.y = VectorXd::Zero(cons.dim());
    return res;
  }
  res.y = expand(red, sol.z);
  for (int j = 0; j < cons.dim(); ++j)
    if (red.vars[j].fixed) res.y(j) = red.vars[j].offset;
  const double viol = max_violation(res.y, cons);
  res.status.kkt_residual = std::max(sol.kkt, viol);
  if (viol > SolverTolerances::feasibility) res.status.code = SolveCode::NumericalFailure;
  return res;
}

// ---------------------------------------------------------------------------
// Constrained least squares: primal active-set method on the free variables.
// ---------------------------------------------------------------------------

struct ActiveBound {
  int var;      // index into the free-variable list
  bool upper;   // true: y = ub, false: y = lb
};

// Solves [E^T  S] [nu; mu] = -g for the equality and active-bound multipliers.
// S has column -e_j for lower bounds and +e_j for upper bounds, so optimality
// requires mu >= 0.
struct Multipliers {
  VectorXd mu;
  double residual = 0.0;
};

Multipliers solve_multipliers(const MatrixXd& E, const VectorXd& g,
                              const std::vector<ActiveBound>& active) {
  const Eigen::Index nf = g.size();
  const Eigen::Index me = E.rows();
  const Eigen::Index k = me + static_cast<Eigen::Index>(active.size());
  Multipliers out;
  if (k == 0) {
    out.residual = nf ? g.cwiseAbs().maxCoeff() : 0.0;
    return out;
  }
  MatrixXd K = MatrixXd::Zero(nf, k);
  if (me > 0) K.leftCols(me) = E.transpose();
  for (std::size_t a = 0; a < active.size(); ++a)
    K(active[a].var, me + static_cast<Eigen::Index>(a)) = active[a].upper ? 1.0 : -1.0;
  const VectorXd sol = K.colPivHouseholderQr().solve(-g);
  out.mu = sol.tail(static_cast<Eigen::Index>(active.size()));
  out.residual = nf ? (K * sol + g).cwiseAbs().maxCoeff() : 0.0;
  return out;
}

}  // namespace

SolveResult solve_lp(const VectorXd& c, const LinearConstraintSet& cons) {
  if (c.size() != cons.dim()) throw std::invalid_argument("cost vector has the wrong length");
  return solve_reduced(c, cons, Objective::Linear);
}

SolveResult min_l1(int dim, const LinearConstraintSet& cons) {
  if (cons.dim() != dim) throw std::invalid_argument("constraint set dimension mismatch");
  return solve_reduced(VectorXd::Zero(dim), cons, Objective::L1);
}

SolveResult constrained_lsq(const MatrixXd& X, const VectorXd& b, const LinearConstraintSet& cons) {
  if (X.rows() != b.size()) throw std::invalid_argument("design rows differ from target length");
  if (X.cols() != cons.dim()) throw std::invalid_argument("design columns differ from dimension");
  cons.validate();

  // Feasible starting point (vertex of the constraint polytope).
  SolveResult start = solve_reduced(VectorXd::Zero(cons.dim()), cons, Objective::Linear);
  if (!start.status.optimal()) return start;

  const int d = cons.dim();
  const std::vector<char> zero = fixed_mask(cons);
  std::vector<int> free_vars;
  for (int j = 0; j < d; ++j)
    if (!zero[j] && cons.lb(j) != cons.ub(j)) free_vars.push_back(j);
  const Eigen::Index nf = static_cast<Eigen::Index>(free_vars.size());
  if (nf == 0) {
    // single feasible point
    start.status.kkt_residual = max_violation(start.y, cons);
    return start;
  }

  VectorXd y = start.y;
  VectorXd lo(nf), hi(nf), yf(nf);
  MatrixXd Xf(X.rows(), nf);
  for (Eigen::Index k = 0; k < nf; ++k) {
    const int j = free_vars[k];
    lo(k) = cons.lb(j);
    hi(k) = cons.ub(j);
    yf(k) = y(j);
    Xf.col(k) = X.col(j);
  }
  VectorXd target = b;
  for (int j = 0; j < d; ++j)
    if (std::find(free_vars.begin(), free_vars.end(), j) == free_vars.end()) target -= X.col(j) * y(j);

  // Independent equality rows restricted to the free variables.
  MatrixXd E(0, nf);
  if (cons.A_eq.rows() > 0 && nf > 0) {
    MatrixXd Ef(cons.A_eq.rows(), nf);
    for (Eigen::Index k = 0; k < nf; ++k) Ef.col(k) = cons.A_eq.col(free_vars[k]);
    Eigen::ColPivHouseholderQR<MatrixXd> qr(Ef.transpose());
    qr.setThreshold(1e-12);
    const Eigen::Index rank = qr.rank();
    E.resize(rank, nf);
    for (Eigen::Index r = 0; r < rank; ++r) E.row(r) = Ef.row(qr.colsPermutation().indices()(r));
  }

  // A vanishing ridge keeps every subproblem strictly convex; its effect on the
  // optimum is far below the KKT tolerance.
  const double ridge = 1e-12 * std::max(1.0, Xf.squaredNorm() / std::max<Eigen::Index>(1, nf));
  const double sqrt_ridge = std::sqrt(ridge);

  std::vector<ActiveBound> active;
  std::vector<char> in_active(nf, 0);
  const int max_iter = 20 * static_cast<int>(nf) + 200;
  bool converged = false;

  // After an unblocked step the iterate already minimizes over the working
  // face; recomputing the step there only measures round-off.
  bool at_min = false;
  for (int iter = 0; iter < max_iter && !converged; ++iter) {
    if (at_min) {
      const VectorXd g = Xf.transpose() * (Xf * yf - target) + ridge * yf;
      const Multipliers mult = solve_multipliers(E, g, active);
      int drop = -1;
      double most_negative = -1e-10 * std::max(1.0, g.cwiseAbs().maxCoeff());
      for (std::size_t a = 0; a < active.size(); ++a) {
        if (mult.mu(static_cast<Eigen::Index>(a)) < most_negative) {
          most_negative = mult.mu(static_cast<Eigen::Index>(a));
          drop = static_cast<int>(a);
        }
      }
      if (drop < 0) {
        converged = true;
        break;
      }
      in_active[active[drop].var] = 0;
      active.erase(active.begin() + drop);
      at_min = false;
      continue;
    }

    std::vector<Eigen::Index> F;
    for (Eigen::Index k = 0; k < nf; ++k)
      if (!in_active[k]) F.push_back(k);
    const Eigen::Index nF = static_cast<Eigen::Index>(F.size());

    VectorXd p = VectorXd::Zero(nf);
    if (nF > 0) {
      MatrixXd EF(E.rows(), nF), XF(Xf.rows(), nF);
      VectorXd yF(nF);
      for (Eigen::Index a = 0; a < nF; ++a) {
        EF.col(a) = E.col(F[a]);
        XF.col(a) = Xf.col(F[a]);
        yF(a) = yf(F[a]);
      }
      MatrixXd Z;
      if (EF.rows() == 0) {
        Z = MatrixXd::Identity(nF, nF);
      } else {
        Eigen::JacobiSVD<MatrixXd> svd(EF, Eigen::ComputeFullV);
        svd.setThreshold(1e-12);
        const Eigen::Index rank = svd.rank();
        Z = svd.matrixV().rightCols(nF - rank);
      }
      if (Z.cols() > 0) {
        const VectorXd resid = Xf * yf - target;
        MatrixXd M(XF.rows() + nF, Z.cols());
        M.topRows(XF.rows()) = XF * Z;
        M.bottomRows(nF) = sqrt_ridge * Z;
        VectorXd rhs(XF.rows() + nF);
        rhs.head(XF.rows()) = -resid;
        rhs.tail(nF) = -sqrt_ridge * yF;
        const VectorXd u = M.householderQr().solve(rhs);
        const VectorXd pF = Z * u;
        for (Eigen::Index a = 0; a < nF; ++a) p(F[a]) = pF(a);
      }
    }

    const double pscale = 1e-13 * (1.0 + yf.cwiseAbs().maxCoeff());
    if (p.cwiseAbs().maxCoeff() <= pscale) {
      at_min = true;
      continue;
    }

    double alpha = 1.0;
    int block = -1;
    bool block_upper = false;
    for (Eigen::Index k = 0; k < nf; ++k) {
      if (in_active[k] || std::abs(p(k)) <= pscale) continue;
      double t;
      bool up;
      if (p(k) < 0) {
        if (!std::isfinite(lo(k))) continue;
        t = std::max(0.0, yf(k) - lo(k)) / -p(k);
        up = false;
      } else {
        if (!std::isfinite(hi(k))) continue;
        t = std::max(0.0, hi(k) - yf(k)) / p(k);
        up = true;
      }
      if (t < alpha) {
        alpha = t;
        block = static_cast<int>(k);
        block_upper = up;
      }
    }
    yf += alpha * p;
    for (Eigen::Index k = 0; k < nf; ++k) yf(k) = std::clamp(yf(k), lo(k), hi(k));
    if (block >= 0) {
      yf(block) = block_upper ? hi(block) : lo(block);
      in_active[block] = 1;
      active.push_back({block, block_upper});
    } else {
      at_min = true;
    }
  }

  SolveResult res;
  res.y = y;
  for (Eigen::Index k = 0; k < nf; ++k) res.y(free_vars[k]) = yf(k);
  if (!converged) {
    res.status.code = SolveCode::NumericalFailure;
    return res;
  }

  // Report the KKT residual of the unregularized problem.
  const VectorXd g = Xf.transpose() * (Xf * yf - target);
  const Multipliers mult = solve_multipliers(E, g, active);
  double kkt = mult.residual;
  if (mult.mu.size() > 0) kkt = std::max(kkt, std::max(0.0, -mult.mu.minCoeff()));
  const double viol = max_violation(res.y, cons);
  res.status.kkt_residual = std::max(kkt, viol);
  res.status.code = (viol <= SolverTolerances::feasibility && kkt <= SolverTolerances::kkt)
                        ? SolveCode::Optimal
                        : SolveCode::NumericalFailure;
  return res;
}

void write_problem(std::ostream& os, const MatrixXd& X, const VectorXd& b,
                   const LinearConstraintSet& cons) {
  const Eigen::IOFormat fmt(Eigen::FullPrecision, Eigen::DontAlignCols, " ", "\n");
  os << std::setprecision(17);
  os << "dim " << cons.dim() << "\n";
  os << "design " << X.rows() << " " << X.cols() << "\n";
  if (X.size() > 0) os << X.format(fmt) << "\n";
  os << "target " << b.size() << "\n";
  if (b.size() > 0) os << b.transpose().format(fmt) << "\n";
  os << "equalities " << cons.A_eq.rows() << "\n";
  for (Eigen::Index r = 0; r < cons.A_eq.rows(); ++r)
    os << cons.A_eq.row(r).format(fmt) << " = " << cons.b_eq(r) << "\n";
  os << "bounds\n";
  for (int j = 0; j < cons.dim(); ++j) os << j << " " << cons.lb(j) << " " << cons.ub(j) << "\n";
  os << "fixed_zero";
  for (int j : cons.fixed_zero) os << " " << j;
  os << "\n";
}

}  // namespace opinionlearn
