#include "opinionlearn/bandit.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace opinionlearn {

namespace {

constexpr std::uint64_t kSelectStream = 1;
constexpr std::uint64_t kProposeStream = 2;
constexpr std::uint64_t kRepairStream = 3;

}  // namespace

void BanditConfig::validate(int horizon) const {
  if (!(eps_m >= 0 && eps_m <= 1 && eps_g >= 0 && eps_g <= 1))
    throw std::invalid_argument("exploration probabilities must lie in [0, 1]");
  if (!(step_alpha > 0 && step_alpha <= 1)) throw std::invalid_argument("step size must lie in (0, 1]");
  if (n_iter < 0) throw std::invalid_argument("iteration count must be nonnegative");
  if (t_split < 1 || t_split >= horizon)
    throw std::invalid_argument("training cut must satisfy 1 <= t_split < T");
  if (b_g < 1) throw std::invalid_argument("repair budget must be positive");
  if (explore_p > 1) throw std::invalid_argument("exploration link probability exceeds 1");
}

SplitData split_trajectory(const Trajectory& traj, int t_split) {
  const int T = traj.horizon();
  if (t_split < 1 || t_split >= T)
    throw std::invalid_argument("degenerate split: need 1 <= t_split < T");
  const MatrixXd& s = traj.states();
  SplitData d;
  d.X_train = s.topRows(t_split);
  d.Y_train = s.middleRows(1, t_split);
  d.X_val = s.middleRows(t_split, T - t_split);
  d.Y_val = s.bottomRows(T - t_split);
  d.x0 = traj.state(0);
  return d;
}

LearnResult run_learner(RuleType rule, LearnerVariant variant, const SplitData& data, int i,
                        const NeighborHints& hints, const LearnerConfig& lcfg,
                        RepellSimplex simplex) {
  const MatrixXd& X = data.X_train;
  const VectorXd b = data.Y_train.col(i);
  const double x_i0 = data.x0(i);
  LearnResult r;
  if (variant == LearnerVariant::L1) {
    switch (rule) {
      case RuleType::DeGroot: r = learn_degroot(X, b, hints, lcfg); break;
      case RuleType::FJ: r = learn_fj(X, b, x_i0, hints, lcfg); break;
      case RuleType::Repell: r = learn_repell(X, b, hints, lcfg, simplex); break;
      case RuleType::HK: r = learn_hk(X, b, i, hints, lcfg); break;
    }
  } else {
    switch (rule) {
      case RuleType::DeGroot: r = learn_degroot_ls(X, b, hints, lcfg); break;
      case RuleType::FJ: r = learn_fj_ls(X, b, x_i0, hints, lcfg); break;
      case RuleType::Repell: r = learn_repell_ls(X, b, hints, lcfg); break;
      case RuleType::HK: r = learn_hk(X, b, i, hints, lcfg); break;
    }
  }
  r.val_err = validation_error(r, rule, data.validation(i), i, x_i0, lcfg);
  return r;
}

VectorXd JointEstimate::predict(const VectorXd& x, const VectorXd& x_init) const {
  const Eigen::Index n = x.size();
  VectorXd out(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::VectorXi row = adjacency.row(i).transpose();
    out(i) = opinionlearn::predict(rules[i], thetas[i], row, x, static_cast<int>(i), x_init(i));
  }
  return out;
}

double update_q(double q_prev, double p, double step_alpha) {
  if (!(p < kInf)) return kInfeasibleQ;
  if (q_prev <= kInfeasibleQ) return -std::log(p);
  return (1.0 - step_alpha) * q_prev - step_alpha * std::log(p);
}

int argmax_arm(const Eigen::Ref<const Eigen::RowVectorXd>& q_row) {
  int best = 0;
  for (int m = 1; m < q_row.size(); ++m)
    if (q_row(m) > q_row(best)) best = m;
  return best;
}

int best_error_arm(const BanditState& state, int i) {
  int best = 0;
  for (int m = 1; m < kArms; ++m)
    if (state.best_err(i, m) < state.best_err(i, best)) best = m;
  return best;
}

BanditState initialize(const SplitData& data, const LearnerConfig& lcfg, bool plus_variant) {
  lcfg.validate();
  const int n = data.agents();
  BanditState s;
  s.q = MatrixXd::Zero(n, kArms);
  for (auto& a : s.adj_by_rule) a = SignMatrix::Zero(n, n);
  s.theta_by_rule.resize(n);
  s.err_history.assign(1, MatrixXd::Constant(n, kArms, kInf));
  s.rule_pick.assign(n, 0);
  const RepellSimplex simplex = plus_variant ? RepellSimplex::On : RepellSimplex::Off;
  for (int i = 0; i < n; ++i) {
    const NeighborHints hints = NeighborHints::self_only(i);
    for (int m = 0; m < kArms; ++m) {
      const LearnResult r = run_learner(rule_from_arm(m), LearnerVariant::L1, data, i, hints, lcfg,
                                        simplex);
      s.adj_by_rule[m].row(i) = r.row.transpose();
      s.theta_by_rule[i][m] = r.theta;
      s.err_history[0](i, m) = r.val_err;
      s.q(i, m) = r.feasible() ? -std::log(r.val_err) : kInfeasibleQ;
    }
    s.rule_pick[i] = argmax_arm(s.q.row(i));
  }
  s.best_err = s.err_history[0];
  return s;
}

BanditState initialize(const Trajectory& traj, const BanditConfig& cfg, const LearnerConfig& lcfg,
                       bool plus_variant) {
  cfg.validate(traj.horizon());
  return initialize(split_trajectory(traj, cfg.t_split), lcfg, plus_variant);
}

int select_rule(const Eigen::Ref<const Eigen::RowVectorXd>& q_row, double eps_m, Rng& rng) {
  if (coin(rng, eps_m)) return static_cast<int>(uniform_index(rng, kArms));
  return argmax_arm(q_row);
}

std::vector<int> select_rules(const BanditState& state, const BanditConfig& cfg,
                              std::uint64_t seed, int l) {
  const int n = state.agents();
  std::vector<int> picks(n);
  for (int i = 0; i < n; ++i) {
    Rng rng = derive_rng({seed, kSelectStream, static_cast<std::uint64_t>(l),
                          static_cast<std::uint64_t>(i)});
    picks[i] = select_rule(state.q.row(i), cfg.eps_m, rng);
  }
  return picks;
}

SignMatrix random_presence_matrix(int n, double p, Rng& rng) {
  SignMatrix A = SignMatrix::Identity(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (coin(rng, p)) A(i, j) = A(j, i) = 1;
  return A;
}

SignMatrix propose_adjacency(const BanditState& state, const std::vector<int>& picks,
                             const BanditConfig& cfg, Rng& rng) {
  const int n = state.agents();
  if (coin(rng, cfg.eps_g)) {
    const double p = cfg.explore_p < 0 ? default_link_probability(n) : cfg.explore_p;
    return random_presence_matrix(n, p, rng);
  }
  SignMatrix A(n, n);
  for (int i = 0; i < n; ++i) A.row(i) = state.adj_by_rule[picks[i]].row(i).cwiseAbs();
  return A;
}

namespace {

std::vector<int> present(const Eigen::Ref<const Eigen::VectorXi>& row) {
  std::vector<int> out;
  for (int q = 0; q < row.size(); ++q)
    if (row(q) != 0) out.push_back(q);
  return out;
}

NeighborHints flip_hints(const std::vector<int>& base, int i, int j, bool j_present,
                         LearnerVariant variant, int n) {
  std::vector<int> neigh;
  for (int q : base)
    if (q != j) neigh.push_back(q);
  if (!j_present) neigh.push_back(j);
  neigh.push_back(i);
  std::sort(neigh.begin(), neigh.end());
  neigh.erase(std::unique(neigh.begin(), neigh.end()), neigh.end());
  if (variant == LearnerVariant::LeastSquares) return NeighborHints::with_complement(neigh, n);
  NeighborHints h;
  h.neigh = std::move(neigh);
  if (j_present) h.non = {j};
  return h;
}

}  // namespace

FlipOutcome edge_flip_refine(int i, int arm, const SignMatrix& A_tilde, const SplitData& data,
                             const LearnerConfig& lcfg, LearnerVariant variant) {
  const int n = data.agents();
  if (i < 0 || i >= n) throw std::out_of_range("agent index out of range");
  if (arm < 0 || arm >= kArms) throw std::out_of_range("arm index out of range");
  const std::vector<int> base = present(A_tilde.row(i).transpose());
  const RuleType rule = rule_from_arm(arm);

  FlipOutcome out;
  for (int j = 0; j < n; ++j) {
    if (j == i) continue;
    const NeighborHints hints = flip_hints(base, i, j, A_tilde(i, j) != 0, variant, n);
    LearnResult r = run_learner(rule, variant, data, i, hints, lcfg);
    ++out.evaluated;
    if (out.flipped < 0 ? r.val_err < kInf : r.val_err < out.best.val_err) {
      out.best = std::move(r);
      out.flipped = j;
    }
  }
  if (out.flipped < 0) {
    out.best = LearnResult{};
    out.best.val_err = kInf;
  }
  return out;
}

RepairOutcome inconsistency_repair(const BanditState& snapshot, const std::vector<int>& picks,
                                   int i, int l, const SplitData& data, const BanditConfig& cfg,
                                   const LearnerConfig& lcfg, Rng& rng) {
  const int n = snapshot.agents();
  const int arm = picks[i];
  const Eigen::VectorXi current = snapshot.adj_by_rule[arm].row(i).transpose();

  RepairOutcome out;
  for (int j = 0; j < n; ++j) {
    if (j == i) continue;
    const int mj = best_error_arm(snapshot, j);
    if (snapshot.adj_by_rule[mj](j, i) != current(j)) out.inconsistent.push_back(j);
  }
  if (out.inconsistent.empty()) return out;

  std::vector<int> base{i};
  for (int u = 0; u < n; ++u) {
    if (u == i || current(u) == 0) continue;
    if (!std::binary_search(out.inconsistent.begin(), out.inconsistent.end(), u)) base.push_back(u);
  }

  const std::size_t k = out.inconsistent.size();
  const bool enumerate = k < 63 && (std::uint64_t{1} << k) <= static_cast<std::uint64_t>(cfg.b_g);
  const std::uint64_t count = enumerate ? (std::uint64_t{1} << k) : static_cast<std::uint64_t>(cfg.b_g);

  const double p_now = snapshot.err_history.at(l)(i, arm);
  for (std::uint64_t q = 0; q < count; ++q) {
    std::vector<int> neigh = base;
    for (std::size_t s = 0; s < k; ++s) {
      const bool take = enumerate ? ((q >> s) & 1u) != 0 : coin(rng, 0.5);
      if (take) neigh.push_back(out.inconsistent[s]);
    }
    const NeighborHints hints = NeighborHints::with_complement(std::move(neigh), n);
    LearnResult r = run_learner(rule_from_arm(arm), LearnerVariant::LeastSquares, data, i, hints, lcfg);
    ++out.candidates;
    if (out.candidates == 1 || r.val_err < out.result.val_err) out.result = std::move(r);
  }
  out.improved = out.result.val_err < p_now;
  return out;
}

JointEstimate extract_estimate(const BanditState& state, FinalSelection selection) {
  const int n = state.agents();
  JointEstimate est;
  est.adjacency = SignMatrix::Zero(n, n);
  est.rules.resize(n);
  est.thetas.resize(n);
  for (int i = 0; i < n; ++i) {
    const int m = selection == FinalSelection::QArgmax ? argmax_arm(state.q.row(i))
                                                       : best_error_arm(state, i);
    est.rules[i] = rule_from_arm(m);
    est.adjacency.row(i) = state.adj_by_rule[m].row(i);
    est.thetas[i] = state.theta_by_rule[i][m];
  }
  return est;
}

namespace {

void record(BanditState& s, int i, int arm, int l, const LearnResult& r) {
  s.err_history[l](i, arm) = r.val_err;
  s.best_err(i, arm) = std::min(s.best_err(i, arm), r.val_err);
  if (r.feasible()) {
    s.adj_by_rule[arm].row(i) = r.row.transpose();
    s.theta_by_rule[i][arm] = r.theta;
  }
}

BanditState run_bandit(const Trajectory& traj, const BanditConfig& cfg, const LearnerConfig& lcfg,
                       std::uint64_t seed, bool plus, const BanditObserver& observer) {
  cfg.validate(traj.horizon());
  const SplitData data = split_trajectory(traj, cfg.t_split);
  const int n = data.agents();
  const LearnerVariant variant = plus ? LearnerVariant::LeastSquares : LearnerVariant::L1;

  BanditState state = initialize(data, lcfg, plus);
  if (observer) observer(state);

  for (int l = 1; l <= cfg.n_iter; ++l) {
    const std::vector<int> picks = select_rules(state, cfg, seed, l);
    Rng propose_rng = derive_rng({seed, kProposeStream, static_cast<std::uint64_t>(l)});
    const SignMatrix A_tilde = propose_adjacency(state, picks, cfg, propose_rng);

    BanditState next = state;
    next.err_history.push_back(MatrixXd::Constant(n, kArms, kInf));
    next.iteration = l;
    next.rule_pick = picks;

    // Phase 1: edge flips, each agent against the previous iteration's state.
    for (int i = 0; i < n; ++i) {
      const FlipOutcome flip = edge_flip_refine(i, picks[i], A_tilde, data, lcfg, variant);
      record(next, i, picks[i], l, flip.best);
      if (!plus) next.q(i, picks[i]) = update_q(state.q(i, picks[i]), flip.best.val_err, cfg.step_alpha);
    }

    if (plus) {
      // Phase 2: every repair reads the same post-phase-1 snapshot.
      const BanditState snapshot = next;
      for (int i = 0; i < n; ++i) {
        Rng rng = derive_rng({seed, kRepairStream, static_cast<std::uint64_t>(l),
                              static_cast<std::uint64_t>(i)});
        const RepairOutcome rep = inconsistency_repair(snapshot, picks, i, l, data, cfg, lcfg, rng);
        if (rep.improved) record(next, i, picks[i], l, rep.result);
        next.q(i, picks[i]) =
            update_q(state.q(i, picks[i]), next.err_history[l](i, picks[i]), cfg.step_alpha);
      }
    }

    state = std::move(next);
    if (observer) observer(state);
  }
  return state;
}

}  // namespace

JointEstimate epsilon_greedy(const Trajectory& traj, const BanditConfig& cfg,
                             const LearnerConfig& lcfg, std::uint64_t seed,
                             const BanditObserver& observer) {
  return extract_estimate(run_bandit(traj, cfg, lcfg, seed, false, observer),
                          FinalSelection::QArgmax);
}

JointEstimate random_search(const Trajectory& traj, BanditConfig cfg, const LearnerConfig& lcfg,
                            std::uint64_t seed, const BanditObserver& observer) {
  cfg.eps_m = 1.0;
  cfg.eps_g = 1.0;
  return epsilon_greedy(traj, cfg, lcfg, seed, observer);
}

JointEstimate epsilon_greedy_plus(const Trajectory& traj, const BanditConfig& cfg,
                                  const LearnerConfig& lcfg, std::uint64_t seed,
                                  const BanditObserver& observer) {
  return extract_estimate(run_bandit(traj, cfg, lcfg, seed, true, observer),
                          FinalSelection::BestError);
}

namespace {

nlohmann::json matrix_json(const MatrixXd& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      const double v = m(r, c);
      if (std::isfinite(v) && v > kInfeasibleQ) row.push_back(v);
      else row.push_back(nullptr);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

nlohmann::json matrix_json(const SignMatrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

void write_checkpoint(std::ostream& os, const BanditState& state) {
  nlohmann::json j;
  j["iteration"] = state.iteration;
  j["q"] = matrix_json(state.q);
  j["rule_pick"] = state.rule_pick;
  j["err"] = matrix_json(state.err_history.back());
  j["best_err"] = matrix_json(state.best_err);
  nlohmann::json adj;
  for (int m = 0; m < kArms; ++m)
    adj[std::string(rule_name(rule_from_arm(m)))] = matrix_json(state.adj_by_rule[m]);
  j["adjacency"] = std::move(adj);
  os << j.dump() << "\n";
}

}  // namespace opinionlearn
