#include <doctest.h>

#include <cmath>

#include "opinionlearn/graph.hpp"

using namespace opinionlearn;

TEST_CASE("signed graph construction validates the matrix") {
  SignMatrix a(2, 2);
  a << 1, 1, 1, 1;
  CHECK_NOTHROW(SignedGraph{a});

  SignMatrix asym(2, 2);
  asym << 1, 1, 0, 1;
  CHECK_THROWS_AS(SignedGraph{asym}, std::invalid_argument);

  SignMatrix no_loop(2, 2);
  no_loop << 0, 1, 1, 1;
  CHECK_THROWS_AS(SignedGraph{no_loop}, std::invalid_argument);

  SignMatrix big(2, 2);
  big << 1, 2, 2, 1;
  CHECK_THROWS_AS(SignedGraph{big}, std::invalid_argument);

  CHECK_THROWS_AS(SignedGraph{SignMatrix::Identity(2, 3)}, std::invalid_argument);
}

TEST_CASE("set_edge keeps symmetry") {
  SignedGraph g = SignedGraph::isolated(3);
  g.set_edge(0, 2, -1);
  CHECK(g.at(0, 2) == -1);
  CHECK(g.at(2, 0) == -1);
  CHECK(g.negative_neighbors(2) == std::vector<int>{0});
  CHECK(g.positive_neighbors(2) == std::vector<int>{2});
  CHECK_THROWS(g.set_edge(1, 1, 1));
}

TEST_CASE("connectivity of the unsigned support") {
  CHECK(is_connected(SignedGraph::isolated(1)));

  SignedGraph dyads = SignedGraph::isolated(4);
  dyads.set_edge(0, 1, 1);
  dyads.set_edge(2, 3, 1);
  CHECK_FALSE(is_connected(dyads));

  SignedGraph path = SignedGraph::isolated(5);
  for (int i = 0; i + 1 < 5; ++i) path.set_edge(i, i + 1, 1);
  CHECK(is_connected(path));

  SignedGraph mixed = SignedGraph::isolated(3);
  mixed.set_edge(0, 1, 1);
  mixed.set_edge(1, 2, -1);
  CHECK(is_connected(mixed));
  CHECK_FALSE(is_positive_connected(mixed));
}

TEST_CASE("degrees count the self-loop as positive") {
  CHECK(degrees(SignedGraph::isolated(3), 1).plus == 1);
  CHECK(degrees(SignedGraph::isolated(3), 1).minus == 0);

  SignMatrix a(3, 3);
  a << 1, 1, -1, 1, 1, 0, -1, 0, 1;
  const SignedGraph g(a);
  CHECK(degrees(g, 0).plus == 2);
  CHECK(degrees(g, 0).minus == 1);

  SignedGraph complete = SignedGraph::isolated(3);
  complete.set_edge(0, 1, 1);
  complete.set_edge(0, 2, 1);
  complete.set_edge(1, 2, 1);
  for (int i = 0; i < 3; ++i) {
    CHECK(degrees(complete, i).plus == 3);
    CHECK(degrees(complete, i).minus == 0);
  }
  CHECK_THROWS_AS(degrees(g, 3), std::out_of_range);
  CHECK_THROWS_AS(degrees(g, -1), std::out_of_range);
}

TEST_CASE("default link probability") {
  CHECK(default_link_probability(20) == doctest::Approx(1.1 * std::log(20.0) / 20.0));
  CHECK(default_link_probability(1) >= 0.0);
  CHECK(default_link_probability(2) <= 1.0);
}

TEST_CASE("complete graph when p = 1") {
  Rng rng = derive_rng({7});
  const SignedGraph g = generate_mixed_graph({2, 1.0, {}, 10}, rng);
  CHECK(g.adjacency() == SignMatrix::Ones(2, 2));
}

TEST_CASE("generated graphs satisfy the protocol invariants") {
  const int n = 20;
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    Rng rng = derive_rng({seed, 99});
    GraphGenConfig cfg{n, default_link_probability(n), {10, 11, 12, 13, 14}, 1000};
    const SignedGraph g = generate_mixed_graph(cfg, rng);
    CHECK(is_connected(g));
    CHECK(is_positive_connected(g));
    const SignMatrix& a = g.adjacency();
    CHECK(a == a.transpose());
    for (int i = 0; i < n; ++i) {
      CHECK(a(i, i) == 1);
      const bool repell = i >= 10 && i < 15;
      const Degrees d = degrees(g, i);
      if (repell) CHECK(d.minus >= 1);
      else CHECK(d.minus == 0);
      int nonzero = 0;
      for (int j = 0; j < n; ++j) nonzero += a(i, j) != 0;
      CHECK(d.plus + d.minus == nonzero);
      for (int j : g.negative_neighbors(i)) CHECK((j >= 10 && j < 15));
    }
  }
}

TEST_CASE("generation is a function of the seed") {
  GraphGenConfig cfg{12, 0.3, {0, 1, 2}, 1000};
  Rng a = derive_rng({5});
  Rng b = derive_rng({5});
  Rng c = derive_rng({6});
  const SignedGraph ga = generate_mixed_graph(cfg, a);
  CHECK(ga.adjacency() == generate_mixed_graph(cfg, b).adjacency());
  CHECK_FALSE(ga.adjacency() == generate_mixed_graph(cfg, c).adjacency());
}

TEST_CASE("impossible requests exhaust the retry budget") {
  Rng rng = derive_rng({1});
  // A single repelling agent has nobody to repel.
  CHECK_THROWS_AS(generate_mixed_graph({5, 0.5, {2}, 20}, rng), GraphGenerationError);
  // p = 0 never connects more than one agent.
  CHECK_THROWS_AS(generate_mixed_graph({3, 0.0, {}, 20}, rng), GraphGenerationError);
  CHECK_THROWS_AS(generate_mixed_graph({3, 1.5, {}, 20}, rng), std::invalid_argument);
}
