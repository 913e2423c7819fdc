#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "twapprox/errors.hpp"
#include "twapprox/graph.hpp"

namespace twapprox {

using NodeId = std::int32_t;
using TreeEdge = std::pair<NodeId, NodeId>;

// A tree of bags. `num_vertices` is the vertex count of the decomposed graph.
struct TreeDecomposition {
  Vertex num_vertices = 0;
  std::vector<VertexSet> bags;
  std::vector<TreeEdge> edges;
  std::optional<NodeId> root;

  NodeId num_nodes() const noexcept { return static_cast<NodeId>(bags.size()); }

  NodeId add_node(VertexSet bag) {
    bags.push_back(std::move(bag));
    return num_nodes() - 1;
  }

  std::vector<std::vector<NodeId>> adjacency() const {
    std::vector<std::vector<NodeId>> adj(bags.size());
    for (auto [a, b] : edges) {
      adj[a].push_back(b);
      adj[b].push_back(a);
    }
    return adj;
  }

  friend bool operator==(const TreeDecomposition&, const TreeDecomposition&) = default;
};

// Largest bag size minus one; -1 for a decomposition without vertices.
inline int width(const TreeDecomposition& t) {
  std::size_t largest = 0;
  for (const auto& bag : t.bags) largest = std::max(largest, bag.size());
  return static_cast<int>(largest) - 1;
}

inline std::size_t max_degree(const TreeDecomposition& t) {
  std::vector<std::size_t> deg(t.bags.size(), 0);
  for (auto [a, b] : t.edges) {
    ++deg[a];
    ++deg[b];
  }
  return deg.empty() ? 0 : *std::max_element(deg.begin(), deg.end());
}

enum class ViolationKind {
  NotATree,          // node graph disconnected, cyclic, or has bad edges
  MalformedBag,      // bag unsorted, has duplicates, or out-of-range vertices
  VertexUncovered,   // condition 1
  EdgeUncovered,     // condition 2
  Disconnected,      // condition 3
};

struct Violation {
  ViolationKind kind;
  std::string message;
  std::vector<std::int64_t> witness;  // vertex, edge endpoints, or node pair depending on kind
};

namespace detail {

struct DisjointSets {
  std::vector<NodeId> parent;
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  NodeId find(NodeId x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(NodeId a, NodeId b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[a] = b;
    return true;
  }
};

inline bool bag_contains(const VertexSet& bag, Vertex v) {
  return std::binary_search(bag.begin(), bag.end(), v);
}

}  // namespace detail

// Checks tree-ness and the three decomposition conditions. Empty result means valid.
inline std::vector<Violation> validate(const Graph& g, const TreeDecomposition& t) {
  std::vector<Violation> out;
  const NodeId nodes = t.num_nodes();
  const Vertex n = g.num_vertices();

  // Tree structure.
  bool tree_ok = true;
  if (nodes > 0 && t.edges.size() != static_cast<std::size_t>(nodes - 1)) {
    out.push_back({ViolationKind::NotATree,
                   "tree has " + std::to_string(nodes) + " nodes but " + std::to_string(t.edges.size()) + " edges",
                   {}});
    tree_ok = false;
  }
  detail::DisjointSets dsu(static_cast<std::size_t>(std::max<NodeId>(nodes, 0)));
  for (auto [a, b] : t.edges) {
    if (a < 0 || b < 0 || a >= nodes || b >= nodes || a == b) {
      out.push_back({ViolationKind::NotATree, "invalid tree edge " + std::to_string(a) + "-" + std::to_string(b), {a, b}});
      tree_ok = false;
      continue;
    }
    if (!dsu.unite(a, b)) {
      out.push_back({ViolationKind::NotATree, "tree edge closes a cycle", {a, b}});
      tree_ok = false;
    }
  }
  if (tree_ok) {
    for (NodeId i = 1; i < nodes; ++i) {
      if (dsu.find(i) != dsu.find(0)) {
        out.push_back({ViolationKind::NotATree, "tree is disconnected", {0, i}});
        tree_ok = false;
        break;
      }
    }
  }

  std::vector<std::vector<NodeId>> holders(static_cast<std::size_t>(n));
  for (NodeId i = 0; i < nodes; ++i) {
    const auto& bag = t.bags[i];
    for (std::size_t j = 0; j < bag.size(); ++j) {
      if (bag[j] < 0 || bag[j] >= n) {
        out.push_back({ViolationKind::MalformedBag, "bag " + std::to_string(i) + " holds an out-of-range vertex", {i}});
        break;
      }
      if (j > 0 && bag[j - 1] >= bag[j]) {
        out.push_back({ViolationKind::MalformedBag, "bag " + std::to_string(i) + " is not strictly ascending", {i}});
        break;
      }
      holders[bag[j]].push_back(i);
    }
  }

  for (Vertex v = 0; v < n; ++v) {
    if (holders[v].empty()) {
      out.push_back({ViolationKind::VertexUncovered, "vertex " + std::to_string(v) + " is in no bag", {v}});
    }
  }

  for (auto [u, v] : g.edges()) {
    const auto& a = holders[u].size() <= holders[v].size() ? holders[u] : holders[v];
    const Vertex other = holders[u].size() <= holders[v].size() ? v : u;
    bool covered = std::any_of(a.begin(), a.end(), [&](NodeId i) { return detail::bag_contains(t.bags[i], other); });
    if (!covered) {
      out.push_back({ViolationKind::EdgeUncovered,
                     "edge {" + std::to_string(u) + "," + std::to_string(v) + "} is in no bag", {u, v}});
    }
  }

  if (!tree_ok) return out;

  // In a tree, the nodes holding v induce a subtree iff they span exactly |holders|-1 tree edges.
  std::vector<std::size_t> spanned(static_cast<std::size_t>(n), 0);
  for (auto [a, b] : t.edges) {
    const auto& x = t.bags[a];
    const auto& y = t.bags[b];
    std::size_t i = 0, j = 0;
    while (i < x.size() && j < y.size()) {
      if (x[i] < y[j]) {
        ++i;
      } else if (y[j] < x[i]) {
        ++j;
      } else {
        if (x[i] >= 0 && x[i] < n) ++spanned[x[i]];
        ++i;
        ++j;
      }
    }
  }
  auto adj = t.adjacency();
  for (Vertex v = 0; v < n; ++v) {
    if (holders[v].empty() || spanned[v] + 1 == holders[v].size()) continue;
    // Find a witness pair in separate pieces.
    std::vector<char> seen(static_cast<std::size_t>(nodes), 0);
    std::deque<NodeId> queue{holders[v].front()};
    seen[holders[v].front()] = 1;
    while (!queue.empty()) {
      NodeId i = queue.front();
      queue.pop_front();
      for (NodeId j : adj[i]) {
        if (!seen[j] && detail::bag_contains(t.bags[j], v)) {
          seen[j] = 1;
          queue.push_back(j);
        }
      }
    }
    NodeId other = holders[v].front();
    for (NodeId i : holders[v]) {
      if (!seen[i]) {
        other = i;
        break;
      }
    }
    out.push_back({ViolationKind::Disconnected,
                   "bags containing vertex " + std::to_string(v) + " are disconnected (nodes " +
                       std::to_string(holders[v].front()) + " and " + std::to_string(other) + ")",
                   {v, holders[v].front(), other}});
  }
  return out;
}

// Expands every node of degree d > 3 into a path of d - 2 nodes with the same bag.
inline TreeDecomposition normalize_degree3(const TreeDecomposition& t) {
  const NodeId nodes = t.num_nodes();
  std::vector<std::vector<std::size_t>> incident(static_cast<std::size_t>(nodes));
  for (std::size_t e = 0; e < t.edges.size(); ++e) {
    incident[t.edges[e].first].push_back(e);
    incident[t.edges[e].second].push_back(e);
  }
  if (std::all_of(incident.begin(), incident.end(), [](const auto& l) { return l.size() <= 3; })) return t;

  TreeDecomposition out;
  out.num_vertices = t.num_vertices;
  out.bags = t.bags;
  out.root = t.root;
  // copies[i][c] is the node id of the c-th copy of node i on its expansion path.
  std::vector<std::vector<NodeId>> copies(static_cast<std::size_t>(nodes));
  for (NodeId i = 0; i < nodes; ++i) {
    copies[i].push_back(i);
    const std::size_t d = incident[i].size();
    if (d <= 3) continue;
    for (std::size_t c = 1; c < d - 2; ++c) {
      NodeId id = out.add_node(t.bags[i]);
      out.edges.emplace_back(copies[i].back(), id);
      copies[i].push_back(id);
    }
  }
  auto copy_for_slot = [&](NodeId i, std::size_t slot) -> NodeId {
    const std::size_t d = incident[i].size();
    if (d <= 3) return i;
    if (slot < 2) return copies[i].front();
    if (slot >= d - 2) return copies[i].back();
    return copies[i][slot - 1];
  };
  std::vector<std::size_t> next_slot(static_cast<std::size_t>(nodes), 0);
  for (auto [a, b] : t.edges) {
    NodeId ca = copy_for_slot(a, next_slot[a]++);
    NodeId cb = copy_for_slot(b, next_slot[b]++);
    out.edges.emplace_back(ca, cb);
  }
  return out;
}

// Orientation of a decomposition toward a chosen root node.
struct RootedView {
  NodeId root = 0;
  std::vector<NodeId> parent;  // -1 at the root
  std::vector<int> depth;
  std::vector<NodeId> home;    // per graph vertex; -1 when the vertex is in no bag
};

inline RootedView root_and_home_bags(const TreeDecomposition& t, NodeId r) {
  if (r < 0 || r >= t.num_nodes()) throw ContractViolation("root node out of range");
  RootedView view;
  view.root = r;
  view.parent.assign(t.bags.size(), -1);
  view.depth.assign(t.bags.size(), -1);
  view.home.assign(static_cast<std::size_t>(t.num_vertices), -1);
  auto adj = t.adjacency();
  std::deque<NodeId> queue{r};
  view.depth[r] = 0;
  while (!queue.empty()) {
    NodeId i = queue.front();
    queue.pop_front();
    for (Vertex v : t.bags[i]) {
      if (view.home[v] < 0) view.home[v] = i;
    }
    for (NodeId j : adj[i]) {
      if (view.depth[j] < 0) {
        view.depth[j] = view.depth[i] + 1;
        view.parent[j] = i;
        queue.push_back(j);
      }
    }
  }
  return view;
}

// Reads a PACE 2017 `.td` file. Bag and vertex ids in the file are 1-based.
inline TreeDecomposition parse_td(std::string_view text) {
  bool have_header = false;
  long long declared_bags = 0, declared_max = 0, declared_n = 0;
  std::vector<char> bag_seen;
  TreeDecomposition t;
  std::size_t last_line = 0;

  detail::for_each_record(text, [&](std::size_t line_no, const auto& tok) {
    last_line = line_no;
    if (tok.front() == "s") {
      if (have_header) throw ParseError(line_no, "duplicate header");
      if (tok.size() != 5 || tok[1] != "td") throw ParseError(line_no, "malformed header, expected 's td <bags> <maxbag> <n>'");
      declared_bags = detail::parse_integer(tok[2], line_no);
      declared_max = detail::parse_integer(tok[3], line_no);
      declared_n = detail::parse_integer(tok[4], line_no);
      if (declared_bags < 0 || declared_max < 0 || declared_n < 0 || declared_n > INT32_MAX || declared_bags > INT32_MAX) {
        throw ParseError(line_no, "malformed header, negative or oversized counts");
      }
      have_header = true;
      t.num_vertices = static_cast<Vertex>(declared_n);
      t.bags.assign(static_cast<std::size_t>(declared_bags), {});
      bag_seen.assign(static_cast<std::size_t>(declared_bags), 0);
      return;
    }
    if (!have_header) throw ParseError(line_no, "record before 's td' header");
    if (tok.front() == "b") {
      if (tok.size() < 2) throw ParseError(line_no, "bag line without id");
      long long id = detail::parse_integer(tok[1], line_no);
      if (id < 1 || id > declared_bags) throw ParseError(line_no, "bag id out of range");
      if (bag_seen[id - 1]) throw ParseError(line_no, "bag id listed twice");
      bag_seen[id - 1] = 1;
      if (static_cast<long long>(tok.size()) - 2 > declared_max) throw ParseError(line_no, "bag larger than declared maximum");
      VertexSet bag;
      for (std::size_t i = 2; i < tok.size(); ++i) {
        long long v = detail::parse_integer(tok[i], line_no);
        if (v < 1 || v > declared_n) throw ParseError(line_no, "vertex id out of range");
        bag.push_back(static_cast<Vertex>(v - 1));
      }
      std::sort(bag.begin(), bag.end());
      if (std::adjacent_find(bag.begin(), bag.end()) != bag.end()) throw ParseError(line_no, "vertex repeated in bag");
      t.bags[id - 1] = std::move(bag);
      return;
    }
    if (tok.size() != 2) throw ParseError(line_no, "expected a tree edge '<i> <j>'");
    long long a = detail::parse_integer(tok[0], line_no);
    long long b = detail::parse_integer(tok[1], line_no);
    if (a < 1 || a > declared_bags || b < 1 || b > declared_bags) throw ParseError(line_no, "tree edge endpoint out of range");
    t.edges.emplace_back(static_cast<NodeId>(a - 1), static_cast<NodeId>(b - 1));
  });

  if (!have_header) throw ParseError(last_line + 1, "missing 's td' header");
  for (std::size_t i = 0; i < bag_seen.size(); ++i) {
    if (!bag_seen[i]) throw ParseError(last_line, "bag " + std::to_string(i + 1) + " never listed");
  }
  if (declared_bags > 0 && width(t) + 1 != declared_max) {
    throw ParseError(last_line, "declared maximum bag size does not match the bags");
  }
  return t;
}

// Canonical `.td` text: bags in node order, tree edges i < j sorted, all ids 1-based.
inline std::string emit_td(const TreeDecomposition& t) {
  std::ostringstream out;
  out << "s td " << t.num_nodes() << ' ' << width(t) + 1 << ' ' << t.num_vertices << '\n';
  for (NodeId i = 0; i < t.num_nodes(); ++i) {
    out << "b " << i + 1;
    for (Vertex v : t.bags[i]) out << ' ' << v + 1;
    out << '\n';
  }
  std::vector<TreeEdge> edges;
  edges.reserve(t.edges.size());
  for (auto [a, b] : t.edges) edges.emplace_back(std::min(a, b), std::max(a, b));
  std::sort(edges.begin(), edges.end());
  for (auto [a, b] : edges) out << a + 1 << ' ' << b + 1 << '\n';
  return out.str();
}

}  // namespace twapprox
