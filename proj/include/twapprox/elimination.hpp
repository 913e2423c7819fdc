#pragma once

#include <algorithm>
#include <numeric>
#include <set>
#include <string_view>
#include <tuple>
#include <unordered_set>
#include <vector>

#include "twapprox/graph.hpp"
#include "twapprox/tree_decomposition.hpp"

namespace twapprox {

enum class BootstrapStrategy { Trivial, MinDegree, MinFill };

inline std::optional<BootstrapStrategy> bootstrap_from_string(std::string_view name) {
  if (name == "trivial") return BootstrapStrategy::Trivial;
  if (name == "min-degree") return BootstrapStrategy::MinDegree;
  if (name == "min-fill") return BootstrapStrategy::MinFill;
  return std::nullopt;
}

namespace detail {

class EliminationGame {
 public:
  explicit EliminationGame(const Graph& g) : adj_(static_cast<std::size_t>(g.num_vertices())), alive_(adj_.size(), 1) {
    for (Vertex v = 0; v < g.num_vertices(); ++v) {
      auto nb = g.neighbors(v);
      adj_[v].insert(nb.begin(), nb.end());
    }
  }

  std::size_t degree(Vertex v) const { return adj_[v].size(); }

  std::size_t fill_in(Vertex v) const {
    std::vector<Vertex> nb(adj_[v].begin(), adj_[v].end());
    std::size_t missing = 0;
    for (std::size_t i = 0; i < nb.size(); ++i) {
      for (std::size_t j = i + 1; j < nb.size(); ++j) {
        if (!adj_[nb[i]].count(nb[j])) ++missing;
      }
    }
    return missing;
  }

  // Removes v, turns its neighborhood into a clique, returns the neighborhood and the new edges.
  std::pair<VertexSet, std::vector<Edge>> eliminate(Vertex v) {
    VertexSet nb(adj_[v].begin(), adj_[v].end());
    std::sort(nb.begin(), nb.end());
    std::vector<Edge> added;
    for (std::size_t i = 0; i < nb.size(); ++i) {
      for (std::size_t j = i + 1; j < nb.size(); ++j) {
        if (adj_[nb[i]].insert(nb[j]).second) {
          adj_[nb[j]].insert(nb[i]);
          added.emplace_back(nb[i], nb[j]);
        }
      }
    }
    for (Vertex u : nb) adj_[u].erase(v);
    adj_[v].clear();
    alive_[v] = 0;
    return {std::move(nb), std::move(added)};
  }

  const std::unordered_set<Vertex>& neighborhood(Vertex v) const { return adj_[v]; }

 private:
  std::vector<std::unordered_set<Vertex>> adj_;
  std::vector<char> alive_;
};

inline std::vector<Vertex> min_degree_order(const Graph& g) {
  EliminationGame game(g);
  std::set<std::pair<std::size_t, Vertex>> queue;
  for (Vertex v = 0; v < g.num_vertices(); ++v) queue.emplace(game.degree(v), v);
  std::vector<Vertex> order;
  order.reserve(static_cast<std::size_t>(g.num_vertices()));
  while (!queue.empty()) {
    auto [deg, v] = *queue.begin();
    queue.erase(queue.begin());
    order.push_back(v);
    VertexSet nb(game.neighborhood(v).begin(), game.neighborhood(v).end());
    for (Vertex u : nb) queue.erase({game.degree(u), u});
    game.eliminate(v);
    for (Vertex u : nb) queue.emplace(game.degree(u), u);
  }
  return order;
}

inline std::vector<Vertex> min_fill_order(const Graph& g) {
  EliminationGame game(g);
  using Key = std::tuple<std::size_t, std::size_t, Vertex>;  // fill, degree, id
  std::vector<Key> key(static_cast<std::size_t>(g.num_vertices()));
  std::set<Key> queue;
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    key[v] = {game.fill_in(v), game.degree(v), v};
    queue.insert(key[v]);
  }
  std::vector<char> done(key.size(), 0);
  std::vector<Vertex> order;
  order.reserve(key.size());
  while (!queue.empty()) {
    Vertex v = std::get<2>(*queue.begin());
    queue.erase(queue.begin());
    done[v] = 1;
    order.push_back(v);
    auto [nb, added] = game.eliminate(v);
    // Fill counts change for the old neighbors and for common neighbors of every new edge.
    std::vector<Vertex> touched(nb.begin(), nb.end());
    for (auto [a, b] : added) {
      for (Vertex c : game.neighborhood(a)) {
        if (game.neighborhood(b).count(c)) touched.push_back(c);
      }
    }
    std::sort(touched.begin(), touched.end());
    touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
    for (Vertex u : touched) {
      if (done[u]) continue;
      queue.erase(key[u]);
      key[u] = {game.fill_in(u), game.degree(u), u};
      queue.insert(key[u]);
    }
  }
  return order;
}

}  // namespace detail

// Builds the decomposition induced by an elimination ordering: the bag of v is v plus its
// later neighbors in the fill-in graph, attached to the bag of its earliest later neighbor.
// Components are chained together through their last-eliminated bags.
inline TreeDecomposition decomposition_from_order(const Graph& g, std::span<const Vertex> order) {
  const Vertex n = g.num_vertices();
  if (static_cast<Vertex>(order.size()) != n) throw ContractViolation("ordering must list every vertex once");
  TreeDecomposition t;
  t.num_vertices = n;
  if (n == 0) {
    t.add_node({});
    return t;
  }
  std::vector<int> position(static_cast<std::size_t>(n), -1);
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (order[i] < 0 || order[i] >= n || position[order[i]] >= 0) throw ContractViolation("ordering is not a permutation");
    position[order[i]] = static_cast<int>(i);
  }
  detail::EliminationGame game(g);
  t.bags.resize(static_cast<std::size_t>(n));
  NodeId previous_root = -1;
  for (Vertex v : order) {
    auto [later, added] = game.eliminate(v);
    VertexSet bag = later;
    bag.push_back(v);
    std::sort(bag.begin(), bag.end());
    const NodeId node = position[v];
    t.bags[node] = std::move(bag);
    if (later.empty()) {
      if (previous_root >= 0) t.edges.emplace_back(previous_root, node);
      previous_root = node;
    } else {
      Vertex next = *std::min_element(later.begin(), later.end(),
                                      [&](Vertex a, Vertex b) { return position[a] < position[b]; });
      t.edges.emplace_back(node, position[next]);
    }
  }
  return t;
}

// A valid starting decomposition for the width-reduction loop.
inline TreeDecomposition initial_decomposition(const Graph& g, BootstrapStrategy strategy) {
  switch (strategy) {
    case BootstrapStrategy::Trivial: {
      TreeDecomposition t;
      t.num_vertices = g.num_vertices();
      VertexSet all(static_cast<std::size_t>(g.num_vertices()));
      std::iota(all.begin(), all.end(), 0);
      t.add_node(std::move(all));
      return t;
    }
    case BootstrapStrategy::MinDegree:
      return decomposition_from_order(g, detail::min_degree_order(g));
    case BootstrapStrategy::MinFill:
      return decomposition_from_order(g, detail::min_fill_order(g));
  }
  throw ContractViolation("unknown bootstrap strategy");
}

}  // namespace twapprox
