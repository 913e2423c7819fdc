#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "twapprox/dp_table.hpp"
#include "twapprox/errors.hpp"
#include "twapprox/graph.hpp"
#include "twapprox/split.hpp"
#include "twapprox/tree_decomposition.hpp"

namespace twapprox {

// A split restricted to one bag: (C1 ∩ B, C2 ∩ B, C3 ∩ B, X ∩ B).
struct BagPartition {
  std::array<VertexSet, 3> c;
  VertexSet x;

  int nonempty_parts() const {
    return static_cast<int>(std::count_if(c.begin(), c.end(), [](const VertexSet& s) { return !s.empty(); }));
  }

  friend bool operator==(const BagPartition&, const BagPartition&) = default;
};

// Replaces the subtree `removed` (which must hold the pointer) with a new tree.
// Replacement nodes are addressed by their index into `bags`.
struct EditPlan {
  std::vector<NodeId> removed;
  std::vector<VertexSet> bags;
  std::vector<std::pair<int, int>> edges;
  std::vector<std::pair<NodeId, int>> attach;  // surviving neighbor of `removed` -> replacement node
  int new_pointer = 0;
};

// Rooted dynamic-programming structure over a degree-3 tree decomposition. All tables are
// oriented toward the pointer node. `Parts` is 3 for general splits and 2 for splits with C3 = ∅.
//
// The graph must outlive the engine. One engine must not be used from two threads at once.
template <int Parts>
class DpEngine {
 public:
  using Table = DpTable<Parts>;
  using Codec = PartitionCodec<Parts>;
  static constexpr int kParts = Parts;

  DpEngine(const Graph& g, const TreeDecomposition& t, NodeId root) : graph_(&g) {
    if (auto violations = validate(g, t); !violations.empty()) {
      throw ContractViolation("init requires a valid tree decomposition: " + violations.front().message);
    }
    if (max_degree(t) > 3) throw ContractViolation("init requires maximum node degree 3");
    if (root < 0 || root >= t.num_nodes()) throw ContractViolation("init root out of range");
    width_ = twapprox::width(t);
    h_count_ = std::max(width_ + 1, 1);
    bags_ = t.bags;
    adj_ = t.adjacency();
    alive_.assign(bags_.size(), 1);
    alive_count_ = bags_.size();
    tables_.resize(bags_.size());
    toward_.assign(bags_.size(), -1);
    states_.assign(bags_.size(), {});
    pointer_ = root;
    std::iota(labels_.begin(), labels_.end(), 0);
    ++epoch_;

    // Post-order from the root.
    std::vector<std::pair<NodeId, NodeId>> order;  // (node, parent)
    order.reserve(bags_.size());
    std::vector<std::pair<NodeId, NodeId>> stack{{root, -1}};
    while (!stack.empty()) {
      auto [i, p] = stack.back();
      stack.pop_back();
      order.emplace_back(i, p);
      for (NodeId j : adj_[i]) {
        if (j != p) stack.emplace_back(j, i);
      }
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      tables_[it->first] = build_table(it->first, it->second);
      toward_[it->first] = it->second;
    }
  }

  const Graph& graph() const noexcept { return *graph_; }
  int width() const noexcept { return width_; }
  NodeId pointer() const noexcept { return pointer_; }
  NodeId node_capacity() const noexcept { return static_cast<NodeId>(bags_.size()); }
  std::size_t alive_count() const noexcept { return alive_count_; }
  bool alive(NodeId i) const { return i >= 0 && i < node_capacity() && alive_[i]; }
  const VertexSet& bag(NodeId i) const { return bags_[i]; }
  const std::vector<NodeId>& neighbors(NodeId i) const { return adj_[i]; }
  const Table& table(NodeId i) const { return tables_[i]; }
  // Neighbor that node i's table treats as its parent; -1 at the pointer.
  NodeId oriented_toward(NodeId i) const { return toward_[i]; }
  std::uint64_t epoch() const noexcept { return epoch_; }
  std::size_t move_count() const noexcept { return moves_; }

  bool state_valid(NodeId i) const { return alive(i) && states_[i].stamp == epoch_; }

  // Moves the pointer to an adjacent node, first pushing the split state down to the children
  // of the old and the new pointer.
  void move_to(NodeId s) {
    const NodeId r = pointer_;
    if (!alive(s) || std::find(adj_[r].begin(), adj_[r].end(), s) == adj_[r].end()) {
      throw ContractViolation("move target is not adjacent to the pointer");
    }
    if (state_valid(r)) materialize_children(r, -1);
    if (state_valid(s)) materialize_children(s, r);
    tables_[r] = build_table(r, s);
    toward_[r] = s;
    tables_[s] = build_table(s, -1);
    toward_[s] = -1;
    pointer_ = s;
    ++moves_;
  }

  // Looks for a minimum split of the pointer's bag. On success the pointer's internal state
  // holds it and all other states become stale.
  bool split_query() {
    const NodeId r = pointer_;
    const Table& t = tables_[r];
    const int b = t.bag_size();
    bool found = false;
    PartitionCode best_code = 0;
    int best_h = 0;
    typename Table::Value best_value = Table::kAbsent;
    for (PartitionCode code = 0; code < t.code_count(); ++code) {
      std::array<int, Parts> count{};
      for (int p = 0; p < b; ++p) {
        const int d = Codec::digit(code, p);
        if (d != Codec::kSeparator) ++count[d];
      }
      const int largest = *std::max_element(count.begin(), count.end());
      const auto* row = t.row(code);
      for (int h = 0; h < t.h_count() && largest + h < b; ++h) {
        if (row[h] == Table::kAbsent) continue;
        if (!found || h < best_h || (h == best_h && row[h] < best_value)) {
          found = true;
          best_code = code;
          best_h = h;
          best_value = row[h];
        }
      }
    }
    if (!found) return false;
    ++epoch_;
    states_[r] = {best_code, best_h, epoch_};
    objective_ = {static_cast<std::size_t>(best_h), best_value};
    assign_canonical_labels(best_code, b);
    return true;
  }

  // The split found by the last successful split_query.
  Objective split_objective() const { return objective_; }

  // The current split restricted to the pointer's bag.
  BagPartition state_query() const {
    auto part = state_of(pointer_);
    if (!part) throw ContractViolation("state query without a valid state at the pointer");
    return *part;
  }

  // Restricted split at any node whose state has been materialized.
  std::optional<BagPartition> state_of(NodeId i) const {
    if (!state_valid(i)) return std::nullopt;
    return decode(states_[i].code, bags_[i]);
  }

  // Applies the edit and returns the engine ids of the replacement nodes (indexed like plan.bags).
  std::vector<NodeId> edit(const EditPlan& plan) {
    check_plan(plan);
    const NodeId m = static_cast<NodeId>(plan.bags.size());
    std::vector<char> removed(bags_.size(), 0);
    for (NodeId i : plan.removed) removed[i] = 1;

    std::vector<NodeId> ids(static_cast<std::size_t>(m));
    for (NodeId k = 0; k < m; ++k) {
      ids[k] = static_cast<NodeId>(bags_.size());
      bags_.push_back(plan.bags[k]);
      adj_.emplace_back();
      alive_.push_back(1);
      tables_.emplace_back();
      toward_.push_back(-1);
      states_.push_back({});
    }
    for (auto [a, b] : plan.edges) {
      adj_[ids[a]].push_back(ids[b]);
      adj_[ids[b]].push_back(ids[a]);
    }
    for (auto [border, target] : plan.attach) {
      auto& list = adj_[border];
      auto it = std::find_if(list.begin(), list.end(), [&](NodeId j) { return j < static_cast<NodeId>(removed.size()) && removed[j]; });
      *it = ids[target];
      adj_[ids[target]].push_back(border);
      toward_[border] = ids[target];
    }
    for (NodeId i : plan.removed) {
      alive_[i] = 0;
      adj_[i].clear();
      adj_[i].shrink_to_fit();
      bags_[i].clear();
      tables_[i] = Table();
    }
    alive_count_ = alive_count_ - plan.removed.size() + static_cast<std::size_t>(m);

    // Tables of the new nodes, bottom-up toward the new pointer; attached neighbors are leaves here.
    std::vector<char> is_new(bags_.size(), 0);
    for (NodeId id : ids) is_new[id] = 1;
    const NodeId root = ids[plan.new_pointer];
    std::vector<std::pair<NodeId, NodeId>> order;
    std::vector<std::pair<NodeId, NodeId>> stack{{root, -1}};
    while (!stack.empty()) {
      auto [i, p] = stack.back();
      stack.pop_back();
      order.emplace_back(i, p);
      for (NodeId j : adj_[i]) {
        if (j != p && is_new[j]) stack.emplace_back(j, i);
      }
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      tables_[it->first] = build_table(it->first, it->second);
      toward_[it->first] = it->second;
    }
    pointer_ = root;
    ++epoch_;
    return ids;
  }

  // The current tree with live nodes renumbered densely; `id_map` receives engine id -> new id.
  TreeDecomposition decomposition(std::vector<NodeId>* id_map = nullptr) const {
    std::vector<NodeId> map(bags_.size(), -1);
    TreeDecomposition t;
    t.num_vertices = graph_->num_vertices();
    for (NodeId i = 0; i < node_capacity(); ++i) {
      if (alive_[i]) map[i] = t.add_node(bags_[i]);
    }
    for (NodeId i = 0; i < node_capacity(); ++i) {
      if (!alive_[i]) continue;
      for (NodeId j : adj_[i]) {
        if (i < j) t.edges.emplace_back(map[i], map[j]);
      }
    }
    t.root = map[pointer_];
    if (id_map) *id_map = std::move(map);
    return t;
  }

 private:
  struct NodeState {
    PartitionCode code = 0;
    int h = 0;
    std::uint64_t stamp = 0;
  };

  enum class StepKind { Forget, Introduce };

  // Intermediate tables of one child's path to the parent bag, kept for backward recovery.
  struct Chain {
    NodeId child = -1;
    std::vector<Table> stages;  // stages[0] is the re-anchored child table
    std::vector<std::pair<StepKind, Vertex>> steps;
  };

  struct Trace {
    std::vector<Chain> chains;
    std::vector<Table> joins;  // joins[c - 1] = chains[0..c] joined
  };

  std::vector<NodeId> children_of(NodeId i, NodeId parent) const {
    std::vector<NodeId> out;
    for (NodeId j : adj_[i]) {
      if (j != parent) out.push_back(j);
    }
    return out;
  }

  // Forget the child's vertices outside the bag, introduce the bag's new vertices, then join.
  Table build_table(NodeId i, NodeId parent, Trace* trace = nullptr) const {
    const VertexSet& bag = bags_[i];
    const auto children = children_of(i, parent);
    if (children.empty()) {
      Table t = nice::empty_table<Parts>(h_count_);
      for (Vertex v : bag) t = nice::introduce(t, v, *graph_);
      return t;
    }
    std::optional<Table> acc;
    for (NodeId j : children) {
      const VertexSet& child_bag = bags_[j];
      Chain chain;
      chain.child = j;
      Table t = nice::reanchor(tables_[j], bag);
      auto advance = [&](StepKind kind, Vertex v, Table next) {
        if (trace) {
          chain.stages.push_back(std::move(t));
          chain.steps.emplace_back(kind, v);
        }
        t = std::move(next);
      };
      for (Vertex v : child_bag) {
        if (!std::binary_search(bag.begin(), bag.end(), v)) advance(StepKind::Forget, v, nice::forget(t, v));
      }
      for (Vertex v : bag) {
        if (!std::binary_search(child_bag.begin(), child_bag.end(), v)) {
          advance(StepKind::Introduce, v, nice::introduce(t, v, *graph_));
        }
      }
      if (!acc) {
        acc = trace ? t : std::move(t);
      } else {
        Table joined = nice::join(*acc, t);
        if (trace) trace->joins.push_back(joined);
        acc = std::move(joined);
      }
      if (trace) {
        chain.stages.push_back(std::move(t));
        trace->chains.push_back(std::move(chain));
      }
    }
    return std::move(*acc);
  }

  // Runs node i's transitions backwards from its state, giving every stale child a state that
  // realizes i's chosen entry. Ties go to the first candidate in scan order.
  void materialize_children(NodeId i, NodeId parent) {
    const auto children = children_of(i, parent);
    if (std::all_of(children.begin(), children.end(), [&](NodeId j) { return state_valid(j); })) return;
    const NodeState st = states_[i];
    const auto value = tables_[i].raw(st.code, st.h);
    if (value == Table::kAbsent) throw InvariantViolation("node state points at an absent entry");

    Trace trace;
    build_table(i, parent, &trace);
    const int b = static_cast<int>(bags_[i].size());
    const int shared = Codec::separator_count(st.code, b);

    struct Target {
      PartitionCode code;
      int h;
      std::uint64_t value;
    };
    const std::size_t m = trace.chains.size();
    std::vector<Target> targets(m);
    Target cur{st.code, st.h, value};
    for (std::size_t c = m; c-- > 1;) {
      const Table& left = c == 1 ? trace.chains[0].stages.back() : trace.joins[c - 2];
      const Table& right = trace.chains[c].stages.back();
      bool found = false;
      for (int ha = 0; ha < h_count_ && !found; ++ha) {
        const int hb = cur.h + shared - ha;
        if (hb < 0 || hb >= h_count_) continue;
        const auto va = left.raw(cur.code, ha);
        const auto vb = right.raw(cur.code, hb);
        if (va == Table::kAbsent || vb == Table::kAbsent) continue;
        if (std::uint64_t{va} + vb != cur.value) continue;
        targets[c] = {cur.code, hb, vb};
        cur = {cur.code, ha, va};
        found = true;
      }
      if (!found) throw InvariantViolation("join entry has no realizing pair");
    }
    targets[0] = cur;

    for (std::size_t c = 0; c < m; ++c) {
      const Chain& chain = trace.chains[c];
      Target t = targets[c];
      for (std::size_t s = chain.steps.size(); s-- > 0;) {
        const auto [kind, v] = chain.steps[s];
        const Table& before = chain.stages[s];
        if (kind == StepKind::Introduce) {
          const int pos = chain.stages[s + 1].position_of(v);
          if (Codec::digit(t.code, pos) == Codec::kSeparator) --t.h;
          t.code = Codec::erase(t.code, pos);
        } else {
          const int pos = before.position_of(v);
          bool found = false;
          for (int d = 0; d < Codec::kRadix && !found; ++d) {
            const PartitionCode candidate = Codec::insert(t.code, pos, d);
            if (before.raw(candidate, t.h) == t.value) {
              t.code = candidate;
              found = true;
            }
          }
          if (!found) throw InvariantViolation("forget entry has no realizing placement");
        }
      }
      // Undo the re-anchoring shift.
      const NodeId j = chain.child;
      int kept = 0;
      for (int p = 0; p < static_cast<int>(bags_[j].size()); ++p) {
        if (Codec::digit(t.code, p) == Codec::kSeparator &&
            std::binary_search(bags_[i].begin(), bags_[i].end(), bags_[j][p])) {
          ++kept;
        }
      }
      const std::uint64_t original = t.value - static_cast<std::uint64_t>(t.h - kept);
      if (tables_[j].raw(t.code, t.h) != original) throw InvariantViolation("recovered child entry mismatch");
      if (!state_valid(j)) states_[j] = {t.code, t.h, epoch_};
    }
  }

  void assign_canonical_labels(PartitionCode code, int b) {
    std::array<Vertex, Parts> smallest;
    smallest.fill(-1);
    for (int p = b - 1; p >= 0; --p) {
      const int d = Codec::digit(code, p);
      if (d != Codec::kSeparator) smallest[d] = bags_[pointer_][p];
    }
    std::array<int, Parts> digits;
    std::iota(digits.begin(), digits.end(), 0);
    std::stable_sort(digits.begin(), digits.end(), [&](int a, int c) {
      if (smallest[a] < 0 || smallest[c] < 0) return smallest[a] >= 0 && smallest[c] < 0;
      return smallest[a] < smallest[c];
    });
    for (int rank = 0; rank < Parts; ++rank) labels_[digits[rank]] = rank;
  }

  BagPartition decode(PartitionCode code, const VertexSet& bag) const {
    BagPartition out;
    for (int p = 0; p < static_cast<int>(bag.size()); ++p) {
      const int d = Codec::digit(code, p);
      if (d == Codec::kSeparator) {
        out.x.push_back(bag[p]);
      } else {
        out.c[labels_[d]].push_back(bag[p]);
      }
    }
    return out;
  }

  void check_plan(const EditPlan& plan) const {
    if (plan.removed.empty()) throw ContractViolation("edit removes no nodes");
    std::vector<char> removed(bags_.size(), 0);
    for (NodeId i : plan.removed) {
      if (!alive(i) || removed[i]) throw ContractViolation("edit removes a dead or repeated node");
      removed[i] = 1;
    }
    if (!removed[pointer_]) throw ContractViolation("edit must remove the pointer node");
    // The removed nodes must form a subtree.
    std::vector<char> reached(bags_.size(), 0);
    std::vector<NodeId> stack{pointer_};
    reached[pointer_] = 1;
    std::size_t count = 0;
    std::vector<NodeId> border;
    while (!stack.empty()) {
      NodeId i = stack.back();
      stack.pop_back();
      ++count;
      for (NodeId j : adj_[i]) {
        if (!removed[j]) {
          border.push_back(j);
        } else if (!reached[j]) {
          reached[j] = 1;
          stack.push_back(j);
        }
      }
    }
    if (count != plan.removed.size()) throw ContractViolation("removed nodes do not form a subtree");

    const NodeId m = static_cast<NodeId>(plan.bags.size());
    if (m == 0) throw ContractViolation("edit inserts no nodes");
    if (plan.new_pointer < 0 || plan.new_pointer >= m) throw ContractViolation("new pointer out of range");
    std::sort(border.begin(), border.end());
    std::vector<NodeId> attached;
    std::vector<int> degree(static_cast<std::size_t>(m), 0);
    for (auto [b, target] : plan.attach) {
      if (target < 0 || target >= m) throw ContractViolation("attachment target out of range");
      attached.push_back(b);
      ++degree[target];
    }
    std::sort(attached.begin(), attached.end());
    if (attached != border) throw ContractViolation("attachment map must cover every border node exactly once");

    if (plan.edges.size() != static_cast<std::size_t>(m - 1)) throw ContractViolation("replacement is not a tree");
    detail::DisjointSets dsu(static_cast<std::size_t>(m));
    for (auto [a, b] : plan.edges) {
      if (a < 0 || b < 0 || a >= m || b >= m || !dsu.unite(a, b)) throw ContractViolation("replacement is not a tree");
      ++degree[a];
      ++degree[b];
    }
    for (NodeId k = 0; k < m; ++k) {
      if (degree[k] > 3) throw ContractViolation("edit would create a node of degree > 3");
      const auto& bag = plan.bags[k];
      if (static_cast<int>(bag.size()) > width_ + 1) throw ContractViolation("edit would exceed the engine width");
      for (std::size_t p = 0; p < bag.size(); ++p) {
        if (bag[p] < 0 || bag[p] >= graph_->num_vertices() || (p > 0 && bag[p - 1] >= bag[p])) {
          throw ContractViolation("replacement bag is not a sorted vertex set");
        }
      }
    }
  }

  const Graph* graph_;
  int width_ = -1;
  int h_count_ = 1;
  std::vector<VertexSet> bags_;
  std::vector<std::vector<NodeId>> adj_;
  std::vector<char> alive_;
  std::size_t alive_count_ = 0;
  std::vector<Table> tables_;
  std::vector<NodeId> toward_;
  std::vector<NodeState> states_;
  NodeId pointer_ = 0;
  std::uint64_t epoch_ = 0;
  std::size_t moves_ = 0;
  Objective objective_;
  std::array<int, Parts> labels_{};
};

}  // namespace twapprox
