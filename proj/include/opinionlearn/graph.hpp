#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "opinionlearn/random.hpp"

namespace opinionlearn {

/// Matrix over {-1, 0, +1}; used both for true graphs and for (possibly
/// asymmetric) adjacency estimates.
using SignMatrix = Eigen::MatrixXi;

class GraphGenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Degrees {
  int plus = 0;   // includes the self-loop
  int minus = 0;
};

/// Undirected signed graph with a positive self-loop on every agent.
/// Agents are indexed 0..n-1 in memory; file formats use 1-based indices.
class SignedGraph {
 public:
  SignedGraph() = default;

  /// Throws std::invalid_argument unless `adj` is square, symmetric, has
  /// entries in {-1,0,1} and a +1 diagonal. Connectivity is not required here;
  /// see is_connected().
  explicit SignedGraph(SignMatrix adj);

  /// Graph with only self-loops.
  static SignedGraph isolated(int n);

  int size() const { return static_cast<int>(adj_.rows()); }
  int at(int i, int j) const { return adj_(i, j); }
  const SignMatrix& adjacency() const { return adj_; }

  /// Sets the undirected edge {i,j} to `sign` (both directions). i != j.
  void set_edge(int i, int j, int sign);

  std::vector<int> positive_neighbors(int i) const;
  std::vector<int> negative_neighbors(int i) const;

 private:
  SignMatrix adj_;
};

struct GraphGenConfig {
  int n = 0;
  double p_link = 0.0;
  std::vector<int> repell_agents;  // 0-based
  int max_retries = 1000;
};

/// (1.1 log n) / n, clamped to [0, 1].
double default_link_probability(int n);

/// Erdos-Renyi positive graph (resampled until connected), then negative
/// edges among pairs of `repell_agents` not already positive (resampled until
/// every repelling agent has at least one). Throws GraphGenerationError when
/// `max_retries` is exhausted.
SignedGraph generate_mixed_graph(const GraphGenConfig& cfg, Rng& rng);

/// Connectivity of the unsigned support (BFS over nonzero off-diagonal entries).
bool is_connected(const SignedGraph& g);

/// Connectivity of the positive-edge subgraph only.
bool is_positive_connected(const SignedGraph& g);

Degrees degrees(const SignedGraph& g, int i);

}  // namespace opinionlearn
