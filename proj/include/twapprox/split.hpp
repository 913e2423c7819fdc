#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <vector>

#include "twapprox/errors.hpp"
#include "twapprox/graph.hpp"
#include "twapprox/tree_decomposition.hpp"

namespace twapprox {

// (|X|, d(X)); compared lexicographically, smaller is better.
struct Objective {
  std::size_t separator_size = 0;
  std::uint64_t distance = 0;

  friend auto operator<=>(const Objective&, const Objective&) = default;
};

inline std::strong_ordering better_objective(const Objective& a, const Objective& b) { return a <=> b; }

// A partition (C1, C2, C3, X) of the vertex set; parts may be empty.
struct Split {
  std::array<VertexSet, 3> c;
  VertexSet x;
  Objective objective;

  friend bool operator==(const Split&, const Split&) = default;
};

// Sorts the three C-parts by smallest member, empty parts last.
inline void canonicalize(std::array<VertexSet, 3>& parts) {
  std::stable_sort(parts.begin(), parts.end(), [](const VertexSet& a, const VertexSet& b) {
    if (a.empty() || b.empty()) return !a.empty() && b.empty();
    return a.front() < b.front();
  });
}

inline std::size_t intersection_size(const VertexSet& a, const VertexSet& b) {
  std::size_t i = 0, j = 0, count = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) {
      ++i;
    } else if (b[j] < a[i]) {
      ++j;
    } else {
      ++count;
      ++i;
      ++j;
    }
  }
  return count;
}

// True iff no edge joins distinct C-parts and |W ∩ Ci| + |X| < |W| for every i.
inline bool is_valid_split(const Graph& g, const VertexSet& w, const Split& s) {
  const Vertex n = g.num_vertices();
  std::vector<int> part(static_cast<std::size_t>(n), -1);
  auto place = [&](const VertexSet& set, int label) {
    for (Vertex v : set) {
      if (v < 0 || v >= n || part[v] != -1) throw ContractViolation("split parts are not a partition of V(G)");
      part[v] = label;
    }
  };
  for (int i = 0; i < 3; ++i) place(s.c[i], i);
  place(s.x, 3);
  if (std::find(part.begin(), part.end(), -1) != part.end()) throw ContractViolation("split parts do not cover V(G)");

  for (auto [u, v] : g.edges()) {
    if (part[u] != 3 && part[v] != 3 && part[u] != part[v]) return false;
  }
  for (int i = 0; i < 3; ++i) {
    if (intersection_size(w, s.c[i]) + s.x.size() >= w.size()) return false;
  }
  return true;
}

// Sum over x of the depth of x's home bag.
inline std::uint64_t split_distance(const VertexSet& x, const RootedView& view) {
  std::uint64_t total = 0;
  for (Vertex v : x) {
    const NodeId home = view.home.at(static_cast<std::size_t>(v));
    if (home < 0) throw ContractViolation("vertex has no home bag");
    total += static_cast<std::uint64_t>(view.depth[home]);
  }
  return total;
}

}  // namespace twapprox
