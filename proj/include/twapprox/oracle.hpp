#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "twapprox/errors.hpp"
#include "twapprox/graph.hpp"
#include "twapprox/split.hpp"
#include "twapprox/tree_decomposition.hpp"

// Exhaustive references for tiny graphs. Nothing here shares code with the DP engine.
namespace twapprox::oracle {

struct OracleBudget {
  int max_n = 12;
};

namespace detail {

using Mask = std::uint32_t;

inline void check_budget(const Graph& g, const OracleBudget& budget, const char* what) {
  if (g.num_vertices() > budget.max_n || g.num_vertices() > 24) {
    throw BudgetExceeded(std::string(what) + ": " + std::to_string(g.num_vertices()) + " vertices exceed the cap of " +
                         std::to_string(std::min(budget.max_n, 24)));
  }
}

inline std::vector<Mask> adjacency_masks(const Graph& g) {
  std::vector<Mask> adj(static_cast<std::size_t>(g.num_vertices()), 0);
  for (auto [u, v] : g.edges()) {
    adj[u] |= Mask{1} << v;
    adj[v] |= Mask{1} << u;
  }
  return adj;
}

inline Mask neighborhood(const std::vector<Mask>& adj, Mask set) {
  Mask out = 0;
  for (Mask rest = set; rest; rest &= rest - 1) out |= adj[std::countr_zero(rest)];
  return out & ~set;
}

}  // namespace detail

// Treewidth by dynamic programming over vertex subsets: TW(S) is the best possible maximum
// forward degree when S is eliminated first, TW(S) = min over v in S of
// max(TW(S - v), |Q(S - v, v)|), with Q(S, v) the vertices outside S + v reachable from v through S.
inline int exact_treewidth(const Graph& g, const OracleBudget& budget = {}) {
  detail::check_budget(g, budget, "exact_treewidth");
  using detail::Mask;
  const int n = g.num_vertices();
  if (n == 0) return -1;
  const auto adj = detail::adjacency_masks(g);
  const Mask all = n == 32 ? ~Mask{0} : (Mask{1} << n) - 1;
  std::vector<std::int8_t> tw(std::size_t{1} << n, 0);
  tw[0] = -1;
  for (Mask s = 1; s <= all && s != 0; ++s) {
    int best = n;
    for (Mask rest = s; rest; rest &= rest - 1) {
      const int v = std::countr_zero(rest);
      const Mask before = s & ~(Mask{1} << v);
      // Component of v in G[before + v].
      Mask comp = Mask{1} << v;
      Mask frontier = comp;
      while (frontier) {
        const Mask grow = detail::neighborhood(adj, frontier) & before & ~comp;
        comp |= grow;
        frontier = grow;
      }
      const int q = std::popcount(detail::neighborhood(adj, comp) & ~s);
      best = std::min(best, std::max<int>(tw[before], q));
    }
    tw[s] = static_cast<std::int8_t>(best);
    if (s == all) break;
  }
  return tw[all];
}

// Minimum split of the bag at node r, by enumerating X in (|X|, d(X)) order; nullopt if none.
// With parts == 2 only splits with C3 empty are considered.
inline std::optional<Split> exhaustive_min_split(const Graph& g, const TreeDecomposition& t, NodeId r, int parts = 3,
                                                 const OracleBudget& budget = {}) {
  detail::check_budget(g, budget, "exhaustive_min_split");
  if (r < 0 || r >= t.num_nodes()) throw ContractViolation("root node out of range");
  if (parts != 2 && parts != 3) throw ContractViolation("parts must be 2 or 3");
  using detail::Mask;
  const int n = g.num_vertices();
  const auto adj = detail::adjacency_masks(g);

  // Node depths from r, then the shallowest bag holding each vertex.
  std::vector<std::vector<NodeId>> tree(t.bags.size());
  for (auto [a, b] : t.edges) {
    tree[a].push_back(b);
    tree[b].push_back(a);
  }
  std::vector<int> depth(t.bags.size(), -1);
  std::deque<NodeId> queue{r};
  depth[r] = 0;
  while (!queue.empty()) {
    const NodeId i = queue.front();
    queue.pop_front();
    for (NodeId j : tree[i]) {
      if (depth[j] < 0) {
        depth[j] = depth[i] + 1;
        queue.push_back(j);
      }
    }
  }
  std::vector<std::uint64_t> vertex_depth(static_cast<std::size_t>(n), UINT64_MAX);
  for (std::size_t i = 0; i < t.bags.size(); ++i) {
    for (Vertex v : t.bags[i]) {
      vertex_depth[v] = std::min<std::uint64_t>(vertex_depth[v], static_cast<std::uint64_t>(depth[i]));
    }
  }

  Mask w_mask = 0;
  for (Vertex v : t.bags[r]) w_mask |= Mask{1} << v;
  const int w_size = std::popcount(w_mask);
  const Mask all = (n == 32) ? ~Mask{0} : (Mask{1} << n) - 1;

  // Tries to spread the W-weighted components of G - X over `parts` groups, each staying below
  // |W| - |X|. Returns the group of every vertex (X as -1), or empty on failure.
  auto try_assign = [&](Mask x) -> std::vector<int> {
    const int limit = w_size - std::popcount(x);
    if (limit <= 0) return {};
    std::vector<Mask> comps;
    Mask left = all & ~x;
    Mask unweighted = 0;
    while (left) {
      Mask comp = left & (~left + 1);
      Mask frontier = comp;
      while (frontier) {
        const Mask grow = detail::neighborhood(adj, frontier) & left & ~comp;
        comp |= grow;
        frontier = grow;
      }
      left &= ~comp;
      if (comp & w_mask) {
        comps.push_back(comp);
      } else {
        unweighted |= comp;
      }
    }
    std::vector<int> weight;
    for (Mask c : comps) weight.push_back(std::popcount(c & w_mask));
    std::vector<int> group(comps.size(), -1);
    std::vector<int> load(static_cast<std::size_t>(parts), 0);
    // Plain backtracking over all group choices per component.
    auto search = [&](auto&& self, std::size_t i) -> bool {
      if (i == comps.size()) return true;
      for (int p = 0; p < parts; ++p) {
        if (load[p] + weight[i] >= limit) continue;
        load[p] += weight[i];
        group[i] = p;
        if (self(self, i + 1)) return true;
        load[p] -= weight[i];
      }
      return false;
    };
    if (!search(search, 0)) return {};
    std::vector<int> label(static_cast<std::size_t>(n), -1);
    for (std::size_t i = 0; i < comps.size(); ++i) {
      for (Mask m = comps[i]; m; m &= m - 1) label[std::countr_zero(m)] = group[i];
    }
    for (Mask m = unweighted; m; m &= m - 1) label[std::countr_zero(m)] = 0;
    return label;
  };

  for (int size = 0; size < w_size; ++size) {
    std::vector<std::pair<std::uint64_t, Mask>> candidates;
    for (Mask x = 0;; ++x) {
      if (std::popcount(x) == size) {
        std::uint64_t d = 0;
        for (Mask m = x; m; m &= m - 1) d += vertex_depth[std::countr_zero(m)];
        candidates.emplace_back(d, x);
      }
      if (x == all) break;
    }
    std::sort(candidates.begin(), candidates.end());
    for (auto [d, x] : candidates) {
      auto label = try_assign(x);
      if (label.empty()) continue;
      Split s;
      for (Vertex v = 0; v < n; ++v) {
        if (x & (Mask{1} << v)) {
          s.x.push_back(v);
        } else {
          s.c[label[v]].push_back(v);
        }
      }
      canonicalize(s.c);
      s.objective = {static_cast<std::size_t>(size), d};
      return s;
    }
  }
  return std::nullopt;
}

}  // namespace twapprox::oracle
