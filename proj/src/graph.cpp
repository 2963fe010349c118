#include "opinionlearn/graph.hpp"

#include <cmath>
#include <queue>
#include <utility>

namespace opinionlearn {

SignedGraph::SignedGraph(SignMatrix adj) : adj_(std::move(adj)) {
  if (adj_.rows() != adj_.cols())
    throw std::invalid_argument("adjacency must be square");
  const int n = size();
  for (int i = 0; i < n; ++i) {
    if (adj_(i, i) != 1)
      throw std::invalid_argument("agent " + std::to_string(i + 1) + " lacks a positive self-loop");
    for (int j = 0; j < n; ++j) {
      const int v = adj_(i, j);
      if (v < -1 || v > 1) throw std::invalid_argument("adjacency entries must be -1, 0 or 1");
      if (v != adj_(j, i)) throw std::invalid_argument("adjacency must be symmetric");
    }
  }
}

SignedGraph SignedGraph::isolated(int n) {
  if (n < 0) throw std::invalid_argument("negative agent count");
  return SignedGraph(SignMatrix::Identity(n, n));
}

void SignedGraph::set_edge(int i, int j, int sign) {
  if (i == j) throw std::invalid_argument("self-loops are fixed at +1");
  if (sign < -1 || sign > 1) throw std::invalid_argument("edge sign must be -1, 0 or 1");
  adj_(i, j) = sign;
  adj_(j, i) = sign;
}

std::vector<int> SignedGraph::positive_neighbors(int i) const {
  std::vector<int> out;
  for (int j = 0; j < size(); ++j)
    if (adj_(i, j) > 0) out.push_back(j);
  return out;
}

std::vector<int> SignedGraph::negative_neighbors(int i) const {
  std::vector<int> out;
  for (int j = 0; j < size(); ++j)
    if (adj_(i, j) < 0) out.push_back(j);
  return out;
}

double default_link_probability(int n) {
  if (n <= 1) return 1.0;
  const double p = 1.1 * std::log(static_cast<double>(n)) / n;
  return std::min(1.0, std::max(0.0, p));
}

namespace {

template <typename EdgePred>
bool connected_by(const SignedGraph& g, EdgePred keep) {
  const int n = g.size();
  if (n <= 1) return true;
  std::vector<char> seen(n, 0);
  std::queue<int> frontier;
  frontier.push(0);
  seen[0] = 1;
  int reached = 1;
  while (!frontier.empty()) {
    const int u = frontier.front();
    frontier.pop();
    for (int v = 0; v < n; ++v) {
      if (seen[v] || !keep(g.at(u, v))) continue;
      seen[v] = 1;
      ++reached;
      frontier.push(v);
    }
  }
  return reached == n;
}

}  // namespace

bool is_connected(const SignedGraph& g) {
  return connected_by(g, [](int v) { return v != 0; });
}

bool is_positive_connected(const SignedGraph& g) {
  return connected_by(g, [](int v) { return v > 0; });
}

Degrees degrees(const SignedGraph& g, int i) {
  if (i < 0 || i >= g.size()) throw std::out_of_range("agent index out of range");
  Degrees d;
  for (int j = 0; j < g.size(); ++j) {
    if (g.at(i, j) > 0) ++d.plus;
    else if (g.at(i, j) < 0) ++d.minus;
  }
  return d;
}

SignedGraph generate_mixed_graph(const GraphGenConfig& cfg, Rng& rng) {
  if (cfg.n < 1) throw std::invalid_argument("graph needs at least one agent");
  if (!(cfg.p_link >= 0.0 && cfg.p_link <= 1.0))
    throw std::invalid_argument("link probability must lie in [0, 1]");
  if (cfg.max_retries < 1) throw std::invalid_argument("max_retries must be positive");
  std::vector<char> repelling(cfg.n, 0);
  for (int a : cfg.repell_agents) {
    if (a < 0 || a >= cfg.n) throw std::invalid_argument("repelling agent index out of range");
    repelling[a] = 1;
  }

  // Each attempt redraws the whole graph: a repelling agent positively tied to
  // every other repelling agent can never get a negative edge otherwise.
  bool connected_once = false;
  for (int attempt = 0; attempt < cfg.max_retries; ++attempt) {
    SignedGraph g = SignedGraph::isolated(cfg.n);
    for (int i = 0; i < cfg.n; ++i)
      for (int j = i + 1; j < cfg.n; ++j)
        if (coin(rng, cfg.p_link)) g.set_edge(i, j, 1);
    if (!is_positive_connected(g)) continue;
    connected_once = true;
    if (cfg.repell_agents.empty()) return g;

    const SignedGraph positive = g;
    for (int i = 0; i < cfg.n; ++i) {
      if (!repelling[i]) continue;
      for (int j = i + 1; j < cfg.n; ++j) {
        if (!repelling[j] || positive.at(i, j) != 0) continue;
        if (coin(rng, cfg.p_link)) g.set_edge(i, j, -1);
      }
    }
    bool covered = true;
    for (int a : cfg.repell_agents) covered = covered && degrees(g, a).minus > 0;
    if (covered) return g;
  }
  if (!connected_once)
    throw GraphGenerationError("no connected positive graph within " +
                               std::to_string(cfg.max_retries) + " attempts");
  throw GraphGenerationError("could not give every repelling agent a negative edge within " +
                             std::to_string(cfg.max_retries) + " attempts");
}

}  // namespace opinionlearn
