#include <doctest.h>

#include <cmath>

#include "opinionlearn/dynamics.hpp"
#include "oracles.hpp"

using namespace opinionlearn;

namespace {

VectorXd vec(std::initializer_list<double> v) {
  VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index k = 0;
  for (double x : v) out(k++) = x;
  return out;
}

VectorXd random_state(Rng& rng, int n) {
  VectorXd x(n);
  for (int i = 0; i < n; ++i) x(i) = uniform(rng, -1.0, 1.0);
  return x;
}

}  // namespace

TEST_CASE("rule labels follow the arm table") {
  CHECK(static_cast<int>(RuleType::DeGroot) == 1);
  CHECK(static_cast<int>(RuleType::HK) == 4);
  for (RuleType r : kAllRules) {
    CHECK(rule_from_arm(arm_index(r)) == r);
    CHECK(parse_rule(rule_name(r)) == r);
  }
  CHECK_THROWS(parse_rule("Voter"));
}

TEST_CASE("DeGroot step") {
  CHECK(step_degroot(vec({0, 1, 0}), vec({0.3, -0.7, 0.9})) == -0.7);
  CHECK(step_degroot(vec({1.0 / 3, 1.0 / 3, 1.0 / 3}), vec({0.9, 0, -0.9})) == doctest::Approx(0.0));
  CHECK(step_degroot(vec({0.7, 0.3}), vec({1, -1})) == doctest::Approx(0.4));
  CHECK_THROWS_AS(step_degroot(vec({1, 0}), vec({1})), std::invalid_argument);
}

TEST_CASE("FJ step") {
  CHECK(step_fj(vec({1, 0.5}), vec({0.4}), 0.2) == doctest::Approx(0.3));
  CHECK(step_fj(vec({0.5, 0.5, 0.0}), vec({0.4, -0.8}), 0.9) == 0.9);
  CHECK(step_fj(vec({0.5, 0.5, 1.0}), vec({0.4, -0.8}), 0.9) == step_degroot(vec({0.5, 0.5}), vec({0.4, -0.8})));
  CHECK_THROWS_AS(step_fj(vec({1}), vec({1}), 0.0), std::invalid_argument);
}

TEST_CASE("repelling step") {
  CHECK(step_repell(vec({1.2, -0.2}), vec({1, -1})) == doctest::Approx(1.4));
  const VectorXd w = vec({0.5, 0.7, -0.2});
  CHECK(step_repell(w, VectorXd::Constant(3, 0.37)) == doctest::Approx(0.37));
  // linear: scale covariance
  const VectorXd x = vec({0.2, -0.5, 0.9});
  CHECK(step_repell(w, 3.0 * x) == doctest::Approx(3.0 * step_repell(w, x)));
}

TEST_CASE("repelling weights sum to one and carry the graph signs") {
  SignedGraph g = SignedGraph::isolated(4);
  g.set_edge(0, 1, 1);
  g.set_edge(0, 2, -1);
  g.set_edge(0, 3, -1);
  const VectorXd w = repell_weights(g, 0, 0.1, 0.05);
  CHECK(w.sum() == doctest::Approx(1.0));
  CHECK(w(1) == 0.1);
  CHECK(w(2) == -0.05);
  CHECK(w(0) == doctest::Approx(1 - 0.1 + 2 * 0.05));
  // beta = 0 leaves a DeGroot-valid weight vector
  const VectorXd d = repell_weights(g, 0, 0.25, 0.0);
  CHECK(d.minCoeff() >= 0.0);
  CHECK(d.sum() == doctest::Approx(1.0));
}

TEST_CASE("social HK step") {
  Eigen::VectorXi row(3);
  row << 1, 1, 1;
  CHECK(step_hk(0.5, row, vec({0, 0.2, 1}), 0) == doctest::Approx(0.1));
  CHECK(step_hk(0.0, row, vec({0.3, 0.2, 1}), 0) == 0.3);
  CHECK(step_hk(5.0, row, vec({0.3, 0.2, 1}), 0) == doctest::Approx(0.5));
  // boundary distance counts as trusted (0.25 is exact in binary)
  CHECK(step_hk(0.25, row, vec({0.5, 0.75, 2}), 0) == doctest::Approx(0.625));
  Eigen::VectorXi sparse(3);
  sparse << 1, 0, 1;
  CHECK(step_hk(5.0, sparse, vec({0.3, 0.2, 1}), 0) == doctest::Approx(0.65));
}

TEST_CASE("degenerate parameter choices reduce to DeGroot") {
  Rng rng = derive_rng({2024});
  const int n = 10;
  for (int trial = 0; trial < 200; ++trial) {
    const VectorXd x = random_state(rng, n);
    VectorXd w = VectorXd::Zero(n);
    for (int j = 0; j < n; ++j) w(j) = uniform01(rng);
    w /= w.sum();
    VectorXd fj(n + 1);
    fj << w, 1.0;
    CHECK(std::abs(step_fj(fj, x, uniform(rng, -1, 1)) - step_degroot(w, x)) <= 1e-12);

    SignedGraph g = SignedGraph::isolated(n);
    for (int j = 1; j < n; ++j) g.set_edge(0, j, j % 3 == 0 ? -1 : 1);
    const Degrees d = degrees(g, 0);
    const VectorXd rw = repell_weights(g, 0, 1.0 / (d.plus + d.minus), 0.0);
    CHECK(rw.minCoeff() >= 0.0);
    CHECK(std::abs(step_repell(rw, x) - step_degroot(rw, x)) <= 1e-12);

    Eigen::VectorXi row = Eigen::VectorXi::Ones(n);
    CHECK(std::abs(step_hk(2.5, row, x, 0) - step_degroot(VectorXd::Constant(n, 1.0 / n), x)) <= 1e-12);
  }
}

TEST_CASE("sampled models follow the generation law") {
  ModelGenConfig gen;
  CHECK(gen.agents() == 20);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng = derive_rng({seed});
    const MixedModel m = sample_model(gen, rng);
    CHECK(validate_assumptions(m, 0.1).ok());
    for (int i = 0; i < 20; ++i) {
      const AgentRule& r = m.rules[i];
      CHECK(r.rule == rule_from_arm(i / 5));
      CHECK(std::abs(m.x0(i)) < 1.0);
      const Degrees d = degrees(m.graph, i);
      switch (r.rule) {
        case RuleType::DeGroot:
          CHECK(r.theta.sum() == doctest::Approx(1.0));
          CHECK(r.theta.minCoeff() >= 0.0);
          for (int j = 0; j < 20; ++j) CHECK((r.theta(j) > 0) == (m.graph.at(i, j) > 0));
          break;
        case RuleType::FJ:
          CHECK(r.theta(20) == 0.5);
          CHECK(r.theta.head(20).sum() == doctest::Approx(1.0));
          break;
        case RuleType::Repell: {
          const double a = 0.2 / (d.plus + d.minus);
          CHECK(d.minus >= 1);
          CHECK(r.theta.sum() == doctest::Approx(1.0));
          for (int j = 0; j < 20; ++j) {
            if (j == i) continue;
            if (m.graph.at(i, j) > 0) CHECK(r.theta(j) == doctest::Approx(a));
            if (m.graph.at(i, j) < 0) CHECK(r.theta(j) == doctest::Approx(-a));
            if (m.graph.at(i, j) == 0) CHECK(r.theta(j) == 0.0);
          }
          break;
        }
        case RuleType::HK: CHECK(r.theta(0) == 0.25); break;
      }
    }
  }
}

TEST_CASE("simulation matches the term-by-term model equations") {
  ModelGenConfig small;
  small.agents_per_rule = {1, 1, 2, 1};
  small.p_link = 0.5;
  const ModelGenConfig full;
  for (const ModelGenConfig& gen : {small, full}) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      Rng rng = derive_rng({seed, 5});
      const MixedModel m = sample_model(gen, rng);
      const Trajectory traj = simulate(m, 15);
      CHECK(traj.horizon() == 15);
      CHECK(traj.state(0) == m.x0);
      for (int t = 0; t < 15; ++t)
        for (int i = 0; i < m.size(); ++i)
          CHECK(std::abs(traj.states()(t + 1, i) - oracle::step(m, traj.state(t), m.x0, i, 0.2)) <= 1e-12);
    }
  }
}

TEST_CASE("simulation edge cases") {
  ModelGenConfig gen;
  gen.agents_per_rule = {4, 0, 0, 0};
  gen.p_link = 1.0;
  Rng rng = derive_rng({3});
  MixedModel m = sample_model(gen, rng);
  m.x0 = VectorXd::Constant(4, 0.25);
  const Trajectory flat = simulate(m, 6);
  for (int t = 0; t <= 6; ++t) CHECK((flat.state(t).array() == 0.25).all());

  CHECK(simulate(m, 1).states().rows() == 2);
  CHECK_THROWS(simulate(m, 0));

  MixedModel bad = m;
  bad.graph.set_edge(0, 1, -1);
  CHECK_THROWS_AS(simulate(bad, 3), std::invalid_argument);

  MixedModel cut = m;
  cut.graph = SignedGraph::isolated(4);
  CHECK_THROWS_AS(simulate(cut, 3), std::invalid_argument);
}

TEST_CASE("trajectory views") {
  MatrixXd s(4, 2);
  s << 1, 2, 3, 4, 5, 6, 7, 8;
  const Trajectory t(s);
  CHECK(t.horizon() == 3);
  CHECK(t.X() == s.topRows(3));
  CHECK(t.b(1) == s.col(1).tail(3));
  CHECK(t.prefix(1).states() == s.topRows(2));
  CHECK_THROWS(Trajectory(MatrixXd::Zero(1, 2)));
  CHECK_THROWS(t.prefix(4));
}

TEST_CASE("assumption checks flag each clause") {
  ModelGenConfig gen;
  Rng rng = derive_rng({11});
  const MixedModel m = sample_model(gen, rng);
  REQUIRE(validate_assumptions(m, 0.1).ok());

  MixedModel neg = m;
  neg.graph.set_edge(0, 1, -1);
  CHECK(validate_assumptions(neg, 0.1).violates(3));

  MixedModel hk = m;
  hk.rules[15].theta(0) = 2.0 * m.x0.cwiseAbs().maxCoeff();
  CHECK(validate_assumptions(hk, 0.1).violates(4));

  MixedModel fj = m;
  fj.rules[5].theta(20) = 0.95;
  CHECK(validate_assumptions(fj, 0.1).violates(2));

  MixedModel lonely = m;
  for (int j : m.graph.negative_neighbors(10)) lonely.graph.set_edge(10, j, 0);
  const ValidationReport r = validate_assumptions(lonely, 0.1);
  CHECK((r.violates(3) || r.violates(1)));
}
