#include "opinionlearn/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace opinionlearn {

std::string_view rule_name(RuleType r) {
  switch (r) {
    case RuleType::DeGroot: return "DeGroot";
    case RuleType::FJ: return "FJ";
    case RuleType::Repell: return "Repell";
    case RuleType::HK: return "HK";
  }
  return "?";
}

RuleType parse_rule(std::string_view name) {
  for (RuleType r : kAllRules)
    if (rule_name(r) == name) return r;
  throw std::invalid_argument("unknown rule '" + std::string(name) + "'");
}

Trajectory::Trajectory(MatrixXd states) : states_(std::move(states)) {
  if (states_.rows() < 2) throw std::invalid_argument("trajectory needs at least two states");
}

Trajectory Trajectory::prefix(int T) const {
  if (T < 1 || T > horizon()) throw std::out_of_range("prefix horizon out of range");
  return Trajectory(states_.topRows(T + 1));
}

namespace {

void require_len(Eigen::Index a, Eigen::Index b) {
  if (a != b) throw std::invalid_argument("dimension mismatch");
}

}  // namespace

double step_degroot(const VectorXd& theta, const VectorXd& x) {
  require_len(theta.size(), x.size());
  return theta.dot(x);
}

double step_fj(const VectorXd& theta, const VectorXd& x, double x_i0) {
  require_len(theta.size(), x.size() + 1);
  const double lambda = theta(x.size());
  return lambda * theta.head(x.size()).dot(x) + (1.0 - lambda) * x_i0;
}

double step_repell(const VectorXd& theta, const VectorXd& x) {
  require_len(theta.size(), x.size());
  return theta.dot(x);
}

double step_hk(double c, const Eigen::Ref<const Eigen::VectorXi>& neighbor_row,
               const VectorXd& x, int i) {
  require_len(neighbor_row.size(), x.size());
  double sum = 0.0;
  int count = 0;
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    if (neighbor_row(j) == 0 && j != i) continue;
    if (std::abs(x(j) - x(i)) <= c) {
      sum += x(j);
      ++count;
    }
  }
  // c >= 0 keeps i itself in the trusted set
  return count > 0 ? sum / count : x(i);
}

VectorXd step_all(const MixedModel& model, const VectorXd& x, const VectorXd& x_init) {
  const int n = model.size();
  VectorXd next(n);
  for (int i = 0; i < n; ++i) {
    const AgentRule& r = model.rules[i];
    switch (r.rule) {
      case RuleType::DeGroot: next(i) = step_degroot(r.theta, x); break;
      case RuleType::FJ: next(i) = step_fj(r.theta, x, x_init(i)); break;
      case RuleType::Repell: next(i) = step_repell(r.theta, x); break;
      case RuleType::HK:
        next(i) = step_hk(r.theta(0), model.graph.adjacency().row(i).transpose(), x, i);
        break;
    }
  }
  return next;
}

namespace {

Eigen::Index expected_theta_size(RuleType r, int n) {
  switch (r) {
    case RuleType::FJ: return n + 1;
    case RuleType::HK: return 1;
    default: return n;
  }
}

}  // namespace

void check_simulable(const MixedModel& model) {
  const int n = model.size();
  if (n < 1) throw std::invalid_argument("model has no agents");
  if (static_cast<int>(model.rules.size()) != n || model.x0.size() != n)
    throw std::invalid_argument("model rule/state count does not match the graph");
  if (!is_connected(model.graph)) throw std::invalid_argument("model graph is not connected");
  for (int i = 0; i < n; ++i) {
    const AgentRule& r = model.rules[i];
    if (r.theta.size() != expected_theta_size(r.rule, n))
      throw std::invalid_argument("parameter vector of agent " + std::to_string(i + 1) +
                                  " has the wrong size");
    const bool has_negative = degrees(model.graph, i).minus > 0;
    if (has_negative && r.rule != RuleType::Repell)
      throw std::invalid_argument("agent " + std::to_string(i + 1) +
                                  " has negative edges but is not repelling");
    if (r.rule == RuleType::FJ) {
      const double lambda = r.theta(n);
      if (!(lambda >= 0.0 && lambda <= 1.0))
        throw std::invalid_argument("susceptibility outside [0, 1]");
    }
    if (r.rule == RuleType::HK && !(r.theta(0) >= 0.0))
      throw std::invalid_argument("negative confidence bound");
  }
}

Trajectory simulate(const MixedModel& model, int T) {
  if (T < 1) throw std::invalid_argument("horizon must be at least 1");
  check_simulable(model);
  const int n = model.size();
  MatrixXd states(T + 1, n);
  states.row(0) = model.x0.transpose();
  VectorXd x = model.x0;
  for (int t = 0; t < T; ++t) {
    x = step_all(model, x, model.x0);
    states.row(t + 1) = x.transpose();
  }
  return Trajectory(std::move(states));
}

bool ValidationReport::violates(int clause) const {
  return std::any_of(violations.begin(), violations.end(),
                     [clause](const AssumptionViolation& v) { return v.clause == clause; });
}

ValidationReport validate_assumptions(const MixedModel& model, double eps_lambda) {
  ValidationReport report;
  const int n = model.size();
  auto add = [&](int clause, int agent, std::string msg) {
    report.violations.push_back({clause, agent, std::move(msg)});
  };
  if (static_cast<int>(model.rules.size()) != n || model.x0.size() != n) {
    add(1, -1, "rule/state count does not match the graph");
    return report;
  }
  if (!is_connected(model.graph)) add(1, -1, "graph is not connected");

  const double max_abs_x0 = n > 0 ? model.x0.cwiseAbs().maxCoeff() : 0.0;
  for (int i = 0; i < n; ++i) {
    const AgentRule& r = model.rules[i];
    const bool has_negative = degrees(model.graph, i).minus > 0;
    const bool repelling = r.rule == RuleType::Repell;
    if (has_negative != repelling)
      add(3, i, repelling ? "repelling agent without negative neighbors"
                          : "non-repelling agent with negative neighbors");
    if (r.theta.size() != expected_theta_size(r.rule, n)) {
      add(2, i, "parameter vector has the wrong size");
      continue;
    }
    if (r.rule == RuleType::FJ) {
      const double lambda = r.theta(n);
      if (lambda < eps_lambda || lambda > 1.0 - eps_lambda)
        add(2, i, "susceptibility outside [eps_lambda, 1 - eps_lambda]");
    }
    if (r.rule == RuleType::HK && !(r.theta(0) < max_abs_x0))
      add(4, i, "confidence bound not below max |x_j(0)|");
  }
  return report;
}

VectorXd uniform_positive_weights(const SignedGraph& g, int i) {
  const std::vector<int> pos = g.positive_neighbors(i);
  VectorXd w = VectorXd::Zero(g.size());
  for (int j : pos) w(j) = 1.0 / static_cast<double>(pos.size());
  return w;
}

VectorXd repell_weights(const SignedGraph& g, int i, double alpha, double beta) {
  const int n = g.size();
  VectorXd w = VectorXd::Zero(n);
  int others_plus = 0;
  int minus = 0;
  for (int j = 0; j < n; ++j) {
    if (j == i) continue;
    if (g.at(i, j) > 0) {
      w(j) = alpha;
      ++others_plus;
    } else if (g.at(i, j) < 0) {
      w(j) = -beta;
      ++minus;
    }
  }
  w(i) = 1.0 - alpha * others_plus + beta * minus;
  return w;
}

MixedModel sample_model(const ModelGenConfig& gen, Rng& rng) {
  const int n = gen.agents();
  if (n < 1) throw std::invalid_argument("model needs at least one agent");
  std::vector<RuleType> assignment;
  for (int a = 0; a < 4; ++a)
    for (int k = 0; k < gen.agents_per_rule[a]; ++k) assignment.push_back(rule_from_arm(a));

  GraphGenConfig gcfg;
  gcfg.n = n;
  gcfg.p_link = gen.p_link < 0.0 ? default_link_probability(n) : gen.p_link;
  gcfg.max_retries = gen.max_retries;
  for (int i = 0; i < n; ++i)
    if (assignment[i] == RuleType::Repell) gcfg.repell_agents.push_back(i);

  MixedModel model;
  model.graph = generate_mixed_graph(gcfg, rng);
  model.rules.resize(n);
  for (int i = 0; i < n; ++i) {
    AgentRule& r = model.rules[i];
    r.rule = assignment[i];
    switch (r.rule) {
      case RuleType::DeGroot: r.theta = uniform_positive_weights(model.graph, i); break;
      case RuleType::FJ:
        r.theta.resize(n + 1);
        r.theta.head(n) = uniform_positive_weights(model.graph, i);
        r.theta(n) = gen.lambda;
        break;
      case RuleType::Repell: {
        const Degrees d = degrees(model.graph, i);
        const double a = gen.weight_scale / static_cast<double>(d.plus + d.minus);
        r.theta = repell_weights(model.graph, i, a, a);
        break;
      }
      case RuleType::HK: r.theta = VectorXd::Constant(1, gen.confidence); break;
    }
  }
  model.x0.resize(n);
  for (int i = 0; i < n; ++i) model.x0(i) = uniform(rng, gen.x0_low, gen.x0_high);
  return model;
}

}  // namespace opinionlearn
