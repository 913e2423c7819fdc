#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "twapprox/dp_engine.hpp"
#include "twapprox/elimination.hpp"
#include "twapprox/errors.hpp"
#include "twapprox/graph.hpp"
#include "twapprox/split.hpp"
#include "twapprox/tree_decomposition.hpp"

namespace twapprox {

using BigInt = boost::multiprecision::cpp_int;

inline BigInt bag_potential(std::size_t bag_size) {
  return boost::multiprecision::pow(BigInt(7), static_cast<unsigned>(bag_size));
}

// Sum over bags of 7^|B|.
inline BigInt potential(const TreeDecomposition& t) {
  BigInt total = 0;
  for (const auto& bag : t.bags) total += bag_potential(bag.size());
  return total;
}

// The region rewritten by one local split: editable nodes (preorder, split root first) and the
// non-editable nodes hanging off them.
struct EditableInfo {
  struct Node {
    NodeId id = -1;
    int parent = -1;  // index into `editable`, -1 at the split root
    VertexSet bag;
    BagPartition part;
    VertexSet bx;  // separator vertices outside the bag whose home bags lie strictly below it
  };
  struct Border {
    NodeId id = -1;
    int parent = -1;
    int component = 0;  // the copy this subtree is re-attached to
    BagPartition part;
  };

  std::vector<Node> editable;
  std::vector<Border> border;

  VertexSet separator() const {
    const auto& root = editable.front();
    VertexSet x;
    std::set_union(root.part.x.begin(), root.part.x.end(), root.bx.begin(), root.bx.end(), std::back_inserter(x));
    return x;
  }
};

namespace detail {

inline VertexSet set_union(const VertexSet& a, const VertexSet& b) {
  VertexSet out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline VertexSet set_difference(const VertexSet& a, const VertexSet& b) {
  VertexSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace detail

// Explores the editable subtree around the pointer after a successful split_query. The pointer
// is back at the split root on return.
template <int Parts>
EditableInfo find_editable(DpEngine<Parts>& engine) {
  EditableInfo info;
  const NodeId root = engine.pointer();
  info.editable.push_back({root, -1, engine.bag(root), engine.state_query(), {}});

  struct Frame {
    int index;
    std::size_t next;
    NodeId came_from;
  };
  std::vector<Frame> stack{{0, 0, -1}};
  while (!stack.empty()) {
    Frame& top = stack.back();
    const NodeId node = info.editable[top.index].id;
    const auto& neighbors = engine.neighbors(node);
    if (top.next == neighbors.size()) {
      const NodeId back = top.came_from;
      stack.pop_back();
      if (back >= 0) engine.move_to(back);
      continue;
    }
    const NodeId s = neighbors[top.next++];
    if (s == top.came_from) continue;
    const int parent = top.index;
    engine.move_to(s);
    BagPartition part = engine.state_query();
    if (part.nonempty_parts() >= 2) {
      info.editable.push_back({s, parent, engine.bag(s), std::move(part), {}});
      stack.push_back({static_cast<int>(info.editable.size()) - 1, 0, node});
    } else {
      int component = 0;
      for (int i = 0; i < 3; ++i) {
        if (!part.c[i].empty()) component = i;
      }
      info.border.push_back({s, parent, component, std::move(part)});
      engine.move_to(node);
    }
  }

  // B^X bottom-up: union of the children's B^X and the children's separator vertices not in B.
  for (std::size_t e = info.editable.size(); e-- > 1;) {
    auto& child = info.editable[e];
    auto& parent = info.editable[child.parent];
    VertexSet up = detail::set_difference(detail::set_union(child.bx, child.part.x), parent.bag);
    parent.bx = detail::set_union(parent.bx, up);
  }
  for (const auto& b : info.border) {
    auto& parent = info.editable[b.parent];
    parent.bx = detail::set_union(parent.bx, detail::set_difference(b.part.x, parent.bag));
  }
  return info;
}

// Outcome of the size and separator checks done while building a replacement.
struct ReplacementAudit {
  std::size_t root_size = 0;
  std::size_t editable = 0;
  std::size_t inserted = 0;
  std::size_t separator_checks = 0;
};

// Three copies B^i = (B ∩ (Ci ∪ X)) ∪ B^X of every editable bag, a bag X joined to the three root
// copies, border subtrees hung from the copy of their component, and a duplicate of any root copy
// that would otherwise reach degree 4. The plan's pointer is the separator bag.
inline EditPlan build_replacement(const EditableInfo& info, ReplacementAudit* audit = nullptr) {
  if (info.editable.empty()) throw ContractViolation("no editable region");
  const std::size_t t = info.editable.size();
  const std::size_t root_size = info.editable.front().bag.size();
  EditPlan plan;
  for (const auto& node : info.editable) plan.removed.push_back(node.id);

  std::size_t separator_checks = 0;
  for (const auto& node : info.editable) {
    if (node.bx.empty()) continue;
    for (int i = 0; i < 3; ++i) {
      for (int j = i + 1; j < 3; ++j) {
        ++separator_checks;
        if (node.bx.size() >= node.part.c[i].size() + node.part.c[j].size()) {
          throw InvariantViolation("separator insertion |B^X| = " + std::to_string(node.bx.size()) +
                                   " not below |B ∩ (Ci ∪ Cj)| at node " + std::to_string(node.id));
        }
      }
    }
  }

  auto copy_id = [](std::size_t e, int i) { return static_cast<int>(3 * e + i); };
  for (const auto& node : info.editable) {
    for (int i = 0; i < 3; ++i) {
      VertexSet bag = detail::set_union(detail::set_union(node.part.c[i], node.part.x), node.bx);
      plan.bags.push_back(std::move(bag));
    }
  }
  const int separator = static_cast<int>(plan.bags.size());
  plan.bags.push_back(info.separator());
  plan.new_pointer = separator;

  // Children of each root copy, as (is_border, index) so repairs can re-hang them.
  std::array<std::vector<std::pair<bool, std::size_t>>, 3> root_children;
  for (std::size_t e = 1; e < t; ++e) {
    const auto& node = info.editable[e];
    for (int i = 0; i < 3; ++i) {
      if (node.parent == 0) {
        root_children[i].emplace_back(false, e);
      } else {
        plan.edges.emplace_back(copy_id(e, i), copy_id(static_cast<std::size_t>(node.parent), i));
      }
    }
  }
  for (std::size_t k = 0; k < info.border.size(); ++k) {
    const auto& b = info.border[k];
    if (b.parent == 0) {
      root_children[b.component].emplace_back(true, k);
    } else {
      plan.attach.emplace_back(b.id, copy_id(static_cast<std::size_t>(b.parent), b.component));
    }
  }
  for (int i = 0; i < 3; ++i) {
    const int root_copy = copy_id(0, i);
    plan.edges.emplace_back(root_copy, separator);
    int holder = root_copy;
    auto& kids = root_children[i];
    if (kids.size() == 3) {
      holder = static_cast<int>(plan.bags.size());
      plan.bags.push_back(plan.bags[root_copy]);
      plan.edges.emplace_back(root_copy, holder);
    }
    for (std::size_t c = 0; c < kids.size(); ++c) {
      const int target = c < 2 ? holder : root_copy;
      const auto [is_border, index] = kids[c];
      if (is_border) {
        plan.attach.emplace_back(info.border[index].id, target);
      } else {
        plan.edges.emplace_back(copy_id(index, i), target);
      }
    }
  }

  if (plan.bags.size() > 3 * t + 4) throw InvariantViolation("replacement inserts more than 3t + 4 bags");
  for (const auto& bag : plan.bags) {
    if (bag.size() >= root_size) throw InvariantViolation("replacement bag is not smaller than the split bag");
  }
  if (audit) *audit = {root_size, t, plan.bags.size(), separator_checks};
  return plan;
}

struct ImproveOptions {
  bool check = false;  // validate after every edit, recompute the potential, check DFS invariants
};

struct PassStats {
  std::size_t passes = 0;
  std::size_t two_way_passes = 0;
  std::size_t splits = 0;
  std::size_t inserted = 0;
  std::size_t removed = 0;
  std::size_t moves = 0;
  std::size_t separator_checks = 0;
  std::size_t potential_checks = 0;
  std::size_t dfs_checks = 0;
};

enum class PassResult { Reduced, Unsplittable };

struct PassOutcome {
  PassResult result = PassResult::Reduced;
  NodeId unsplittable = -1;  // engine node id
};

namespace detail {

enum class Visit : std::uint8_t { Unseen, Open, Closed };

template <int Parts>
void check_open_path(const DpEngine<Parts>& engine, const std::vector<Visit>& status, const std::vector<NodeId>& path,
                     NodeId start) {
  if (path.empty() || path.front() != start || path.back() != engine.pointer()) {
    throw InvariantViolation("open path does not run from the start node to the pointer");
  }
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    const auto& nb = engine.neighbors(path[i]);
    if (std::find(nb.begin(), nb.end(), path[i + 1]) == nb.end()) throw InvariantViolation("open nodes do not form a path");
  }
  std::size_t open = 0;
  for (NodeId i = 0; i < engine.node_capacity(); ++i) {
    if (engine.alive(i) && status[i] == Visit::Open) ++open;
  }
  for (NodeId i : path) {
    if (status[i] != Visit::Open) throw InvariantViolation("path node is not open");
  }
  if (open != path.size()) throw InvariantViolation("open node off the start-to-pointer path");
}

}  // namespace detail

// One depth-first sweep that splits every bag of size w + 1. `start` must be the pointer, carry an
// empty bag, and have degree 1. `phi` tracks the potential of the engine's decomposition.
template <int Parts>
PassOutcome reduce_width_pass(DpEngine<Parts>& engine, NodeId start, int k, const ImproveOptions& options,
                              PassStats& stats, BigInt& phi) {
  const int w = engine.width();
  if (w < 2 * k + 2) return {};
  if (engine.pointer() != start || !engine.bag(start).empty() || engine.neighbors(start).size() > 1) {
    throw ContractViolation("pass must start at an empty degree-1 pointer node");
  }
  using detail::Visit;
  std::vector<Visit> status(static_cast<std::size_t>(engine.node_capacity()), Visit::Unseen);
  std::vector<NodeId> path{start};
  status[start] = Visit::Open;

  while (true) {
    const NodeId r = engine.pointer();
    if (options.check) {
      detail::check_open_path(engine, status, path, start);
      ++stats.dfs_checks;
    }
    NodeId unseen = -1;
    for (NodeId s : engine.neighbors(r)) {
      if (status[s] == Visit::Unseen) {
        unseen = s;
        break;
      }
    }
    if (unseen >= 0) {
      engine.move_to(unseen);
      status[unseen] = Visit::Open;
      path.push_back(unseen);
      continue;
    }
    if (r == start) {
      status[r] = Visit::Closed;
      path.pop_back();
      break;
    }
    if (static_cast<int>(engine.bag(r).size()) <= w) {
      status[r] = Visit::Closed;
      path.pop_back();
      engine.move_to(path.back());
      continue;
    }
    if (!engine.split_query()) return {PassResult::Unsplittable, r};

    EditableInfo info = find_editable(engine);
    ReplacementAudit audit;
    EditPlan plan = build_replacement(info, &audit);

    // The open path leaves the editable region exactly once; the first node outside is the resume point.
    std::vector<char> editable(static_cast<std::size_t>(engine.node_capacity()), 0);
    for (const auto& node : info.editable) editable[node.id] = 1;
    while (!path.empty() && editable[path.back()]) path.pop_back();
    if (path.empty()) throw InvariantViolation("start node became editable");
    const NodeId resume = path.back();
    if (options.check) {
      for (NodeId i : path) {
        if (editable[i]) throw InvariantViolation("editable nodes are not a suffix of the open path");
      }
    }
    auto hook = std::find_if(plan.attach.begin(), plan.attach.end(), [&](const auto& a) { return a.first == resume; });
    if (hook == plan.attach.end()) throw InvariantViolation("resume node is not adjacent to the editable region");
    plan.new_pointer = hook->second;

    BigInt next_phi = phi;
    for (const auto& node : info.editable) next_phi -= bag_potential(node.bag.size());
    for (const auto& bag : plan.bags) next_phi += bag_potential(bag.size());
    if (next_phi > phi - BigInt(info.editable.size())) {
      throw InvariantViolation("potential did not drop by the number of editable bags");
    }
    ++stats.potential_checks;

    const auto ids = engine.edit(plan);
    status.resize(static_cast<std::size_t>(engine.node_capacity()), Visit::Unseen);
    for (NodeId id : ids) status[id] = Visit::Unseen;
    engine.move_to(resume);
    phi = std::move(next_phi);

    ++stats.splits;
    stats.inserted += plan.bags.size();
    stats.removed += info.editable.size();
    stats.separator_checks += audit.separator_checks;

    if (options.check) {
      const auto t = engine.decomposition();
      if (auto v = validate(engine.graph(), t); !v.empty()) {
        throw InvariantViolation("edit produced an invalid decomposition: " + v.front().message);
      }
      if (max_degree(t) > 3) throw InvariantViolation("edit produced a node of degree > 3");
      if (potential(t) != phi) throw InvariantViolation("incremental potential disagrees with recomputation");
    }
  }

  if (options.check) {
    for (NodeId i = 0; i < engine.node_capacity(); ++i) {
      if (engine.alive(i) && status[i] != Visit::Closed) throw InvariantViolation("node left unclosed after the pass");
    }
  }
  for (NodeId i = 0; i < engine.node_capacity(); ++i) {
    if (engine.alive(i) && static_cast<int>(engine.bag(i).size()) > w) {
      throw InvariantViolation("pass finished with a bag of size w + 1");
    }
  }
  return {};
}

enum class TwoWayMode { Auto, On, Off };

struct ApproxOptions {
  BootstrapStrategy bootstrap = BootstrapStrategy::MinFill;
  TwoWayMode two_way = TwoWayMode::Auto;
  bool check = false;
};

struct RunReport {
  bool lower_bound = false;
  int width = -1;
  int k = 0;
  int initial_width = -1;
  std::size_t initial_nodes = 0;
  std::size_t final_nodes = 0;
  PassStats stats;
  double seconds = 0.0;
};

struct Approximation {
  TreeDecomposition decomposition;
};

// Proof that treewidth exceeds k: a bag of size at least 2k + 3 with no split.
struct LowerBound {
  TreeDecomposition decomposition;
  NodeId node = -1;
  int k = 0;
};

using Decision = std::variant<Approximation, LowerBound>;

namespace detail {

inline TreeDecomposition without_node(const TreeDecomposition& t, NodeId victim, NodeId* follow = nullptr) {
  TreeDecomposition out;
  out.num_vertices = t.num_vertices;
  auto renumber = [victim](NodeId i) { return i > victim ? i - 1 : i; };
  for (NodeId i = 0; i < t.num_nodes(); ++i) {
    if (i != victim) out.bags.push_back(t.bags[i]);
  }
  for (auto [a, b] : t.edges) {
    if (a != victim && b != victim) out.edges.emplace_back(renumber(a), renumber(b));
  }
  if (follow && *follow >= 0) *follow = renumber(*follow);
  return out;
}

struct PassRun {
  PassResult result;
  TreeDecomposition decomposition;
  NodeId unsplittable = -1;
};

// Runs one pass on a fresh engine with an empty start node attached to a low-degree node.
template <int Parts>
PassRun run_pass(const Graph& g, const TreeDecomposition& t, int k, const ImproveOptions& options, PassStats& stats) {
  TreeDecomposition with_start = t;
  with_start.root.reset();
  std::vector<std::size_t> degree(t.bags.size(), 0);
  for (auto [a, b] : t.edges) {
    ++degree[a];
    ++degree[b];
  }
  const NodeId anchor = static_cast<NodeId>(std::min_element(degree.begin(), degree.end()) - degree.begin());
  const NodeId start = with_start.add_node({});
  with_start.edges.emplace_back(anchor, start);

  DpEngine<Parts> engine(g, with_start, start);
  BigInt phi = potential(with_start);
  ++stats.passes;
  if (Parts == 2) ++stats.two_way_passes;
  const PassOutcome outcome = reduce_width_pass(engine, start, k, options, stats, phi);
  stats.moves += engine.move_count();

  std::vector<NodeId> map;
  TreeDecomposition exported = engine.decomposition(&map);
  NodeId cert = outcome.result == PassResult::Unsplittable ? map[outcome.unsplittable] : -1;
  exported.root.reset();
  TreeDecomposition cleaned = without_node(exported, map[start], &cert);
  return {outcome.result, std::move(cleaned), cert};
}

}  // namespace detail

// Width-reduction loop: returns a decomposition of width at most 2k + 1 or a certificate that
// the treewidth exceeds k. Two-way passes that get stuck are retried with three-way splits, so a
// certificate bag never has a three-way split either.
inline Decision approximate(const Graph& g, int k, std::optional<TreeDecomposition> t0, const ApproxOptions& options = {},
                            RunReport* report = nullptr) {
  if (k < 0) throw ContractViolation("k must be non-negative");
  const auto started = std::chrono::steady_clock::now();
  RunReport local;
  local.k = k;
  TreeDecomposition t;
  if (t0) {
    if (auto v = validate(g, *t0); !v.empty()) throw ContractViolation("supplied decomposition is invalid: " + v.front().message);
    t = std::move(*t0);
  } else {
    t = initial_decomposition(g, options.bootstrap);
  }
  local.initial_width = width(t);
  local.initial_nodes = t.bags.size();

  auto finish = [&](Decision d) {
    local.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    std::visit([&](const auto& r) {
      local.width = width(r.decomposition);
      local.final_nodes = r.decomposition.bags.size();
    }, d);
    local.lower_bound = std::holds_alternative<LowerBound>(d);
    if (report) *report = local;
    return d;
  };

  if (width(t) <= 2 * k + 1) return finish(Approximation{std::move(t)});
  t = normalize_degree3(t);
  local.initial_nodes = t.bags.size();
  const ImproveOptions improve{options.check};

  while (width(t) >= 2 * k + 2) {
    const int w = width(t);
    const bool two_way = options.two_way == TwoWayMode::On || (options.two_way == TwoWayMode::Auto && w + 1 >= 3 * k + 4);
    detail::PassRun run = two_way ? detail::run_pass<2>(g, t, k, improve, local.stats)
                                  : detail::run_pass<3>(g, t, k, improve, local.stats);
    if (run.result == PassResult::Unsplittable && two_way) {
      run = detail::run_pass<3>(g, run.decomposition, k, improve, local.stats);
    }
    if (run.result == PassResult::Unsplittable) {
      return finish(LowerBound{std::move(run.decomposition), run.unsplittable, k});
    }
    t = std::move(run.decomposition);
    if (width(t) >= w) throw InvariantViolation("pass did not reduce the width");
  }
  return finish(Approximation{std::move(t)});
}

}  // namespace twapprox
