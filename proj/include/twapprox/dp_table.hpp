#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "twapprox/errors.hpp"
#include "twapprox/graph.hpp"

namespace twapprox {

using PartitionCode = std::uint64_t;

// Positional encoding of a partition of a bag: digit p describes the p-th smallest bag vertex.
// Digits 0..Parts-1 name the C-parts and digit Parts names the separator X. Three-way splits
// use radix 4 (two bits per vertex), two-way splits radix 3.
template <int Parts>
struct PartitionCodec {
  static_assert(Parts == 2 || Parts == 3, "splits have two or three C-parts");

  static constexpr int kRadix = Parts + 1;
  static constexpr int kSeparator = Parts;
  static constexpr int kMaxDigits = Parts == 3 ? 31 : 39;

  static constexpr PartitionCode power(int e) {
    if constexpr (kRadix == 4) {
      return PartitionCode{1} << (2 * e);
    } else {
      PartitionCode p = 1;
      for (int i = 0; i < e; ++i) p *= kRadix;
      return p;
    }
  }

  static int digit(PartitionCode code, int pos) {
    if constexpr (kRadix == 4) {
      return static_cast<int>((code >> (2 * pos)) & 3U);
    } else {
      return static_cast<int>((code / powers()[pos]) % kRadix);
    }
  }

  // Code with one more digit: `d` placed at `pos`, later digits shifted up.
  static PartitionCode insert(PartitionCode code, int pos, int d) {
    if constexpr (kRadix == 4) {
      const PartitionCode low = code & ((PartitionCode{1} << (2 * pos)) - 1);
      const PartitionCode high = code >> (2 * pos);
      return low | (PartitionCode(d) << (2 * pos)) | (high << (2 * pos + 2));
    } else {
      const PartitionCode p = powers()[pos];
      return code % p + PartitionCode(d) * p + (code / p) * p * kRadix;
    }
  }

  // Code with the digit at `pos` removed.
  static PartitionCode erase(PartitionCode code, int pos) {
    if constexpr (kRadix == 4) {
      const PartitionCode low = code & ((PartitionCode{1} << (2 * pos)) - 1);
      return low | ((code >> (2 * pos + 2)) << (2 * pos));
    } else {
      const PartitionCode p = powers()[pos];
      return code % p + (code / (p * kRadix)) * p;
    }
  }

  static int separator_count(PartitionCode code, int digits) {
    int count = 0;
    for (int p = 0; p < digits; ++p) count += digit(code, p) == kSeparator;
    return count;
  }

 private:
  static const std::array<PartitionCode, kMaxDigits + 2>& powers() {
    static const auto table = [] {
      std::array<PartitionCode, kMaxDigits + 2> t{};
      t[0] = 1;
      for (std::size_t i = 1; i < t.size(); ++i) t[i] = t[i - 1] * kRadix;
      return t;
    }();
    return table;
  }
};

// Table U[partition of bag][h] -> minimum d(X), or absent when no partition exists.
template <int Parts>
class DpTable {
 public:
  using Codec = PartitionCodec<Parts>;
  using Value = std::uint32_t;
  static constexpr Value kAbsent = std::numeric_limits<Value>::max();
  // Upper limit on slots per table; larger bags are rejected rather than attempted.
  static constexpr std::size_t kMaxSlots = std::size_t{1} << 31;

  DpTable() = default;

  DpTable(VertexSet bag, int h_count) : bag_(std::move(bag)), h_count_(h_count) {
    if (static_cast<int>(bag_.size()) > Codec::kMaxDigits) throw std::length_error("bag too large for a DP table");
    const PartitionCode codes = Codec::power(static_cast<int>(bag_.size()));
    if (codes > kMaxSlots / static_cast<std::size_t>(std::max(h_count, 1))) {
      throw std::length_error("DP table would exceed " + std::to_string(kMaxSlots) + " slots");
    }
    slots_.assign(static_cast<std::size_t>(codes) * static_cast<std::size_t>(h_count), kAbsent);
  }

  const VertexSet& bag() const noexcept { return bag_; }
  int bag_size() const noexcept { return static_cast<int>(bag_.size()); }
  int h_count() const noexcept { return h_count_; }
  PartitionCode code_count() const noexcept { return Codec::power(bag_size()); }
  std::size_t slot_count() const noexcept { return slots_.size(); }

  Value raw(PartitionCode code, int h) const { return slots_[code * h_count_ + h]; }
  Value& raw(PartitionCode code, int h) { return slots_[code * h_count_ + h]; }
  const Value* row(PartitionCode code) const { return slots_.data() + code * h_count_; }
  Value* row(PartitionCode code) { return slots_.data() + code * h_count_; }

  std::optional<std::uint64_t> at(PartitionCode code, int h) const {
    if (h < 0 || h >= h_count_) return std::nullopt;
    const Value v = raw(code, h);
    if (v == kAbsent) return std::nullopt;
    return v;
  }

  std::size_t present_count() const {
    return static_cast<std::size_t>(std::count_if(slots_.begin(), slots_.end(), [](Value v) { return v != kAbsent; }));
  }

  int position_of(Vertex v) const {
    auto it = std::lower_bound(bag_.begin(), bag_.end(), v);
    return static_cast<int>(it - bag_.begin());
  }

  friend bool operator==(const DpTable&, const DpTable&) = default;

 private:
  VertexSet bag_;
  int h_count_ = 0;
  std::vector<Value> slots_;
};

// Nice-step transitions. Each returns a fresh table.
namespace nice {

template <int Parts>
using Value = typename DpTable<Parts>::Value;

inline Value<3> checked_value(std::uint64_t v) {
  if (v >= DpTable<3>::kAbsent) throw std::overflow_error("distance value exceeds table range");
  return static_cast<Value<3>>(v);
}

// Table of an empty subgraph: only the empty partition at h = 0, distance 0.
template <int Parts>
DpTable<Parts> empty_table(int h_count) {
  DpTable<Parts> t(VertexSet{}, h_count);
  t.raw(0, 0) = 0;
  return t;
}

// Re-expresses a child's distances relative to its parent bag: every separator vertex outside
// the parent bag moves one step further away, i.e. add h - |X ∩ child ∩ parent|.
template <int Parts>
DpTable<Parts> reanchor(const DpTable<Parts>& child, const VertexSet& parent_bag) {
  using Codec = PartitionCodec<Parts>;
  DpTable<Parts> out(child.bag(), child.h_count());
  const int b = child.bag_size();
  std::vector<int> shared;
  for (int p = 0; p < b; ++p) {
    if (std::binary_search(parent_bag.begin(), parent_bag.end(), child.bag()[p])) shared.push_back(p);
  }
  for (PartitionCode code = 0; code < child.code_count(); ++code) {
    int kept = 0;
    for (int p : shared) kept += Codec::digit(code, p) == Codec::kSeparator;
    const auto* in = child.row(code);
    auto* o = out.row(code);
    for (int h = 0; h < child.h_count(); ++h) {
      if (in[h] == DpTable<Parts>::kAbsent) continue;
      o[h] = checked_value(std::uint64_t{in[h]} + static_cast<std::uint64_t>(h - kept));
    }
  }
  return out;
}

// Removes v from the bag; each entry is the minimum over v's possible parts.
template <int Parts>
DpTable<Parts> forget(const DpTable<Parts>& child, Vertex v) {
  using Codec = PartitionCodec<Parts>;
  const int pos = child.position_of(v);
  if (pos >= child.bag_size() || child.bag()[pos] != v) throw ContractViolation("forgotten vertex not in bag");
  VertexSet bag = child.bag();
  bag.erase(bag.begin() + pos);
  DpTable<Parts> out(std::move(bag), child.h_count());
  for (PartitionCode code = 0; code < out.code_count(); ++code) {
    auto* o = out.row(code);
    for (int d = 0; d < Codec::kRadix; ++d) {
      const auto* in = child.row(Codec::insert(code, pos, d));
      for (int h = 0; h < out.h_count(); ++h) o[h] = std::min(o[h], in[h]);
    }
  }
  return out;
}

// Adds v to the bag. Entries putting v in a C-part different from a neighbor's C-part are absent;
// placing v in X shifts h by one.
template <int Parts>
DpTable<Parts> introduce(const DpTable<Parts>& child, Vertex v, const Graph& g) {
  using Codec = PartitionCodec<Parts>;
  const int pos = child.position_of(v);
  if (pos < child.bag_size() && child.bag()[pos] == v) throw ContractViolation("introduced vertex already in bag");
  VertexSet bag = child.bag();
  bag.insert(bag.begin() + pos, v);
  // Neighbor positions in the child's digit numbering.
  std::vector<int> nb;
  for (int p = 0; p < child.bag_size(); ++p) {
    if (g.has_edge(v, child.bag()[p])) nb.push_back(p);
  }
  DpTable<Parts> out(std::move(bag), child.h_count());
  const int hc = child.h_count();
  for (PartitionCode code = 0; code < child.code_count(); ++code) {
    const auto* in = child.row(code);
    unsigned seen = 0;  // bit c set iff some neighbor sits in C-part c
    for (int p : nb) {
      const int d = Codec::digit(code, p);
      if (d != Codec::kSeparator) seen |= 1U << d;
    }
    for (int d = 0; d < Parts; ++d) {
      if ((seen & ~(1U << d)) != 0) continue;
      auto* o = out.row(Codec::insert(code, pos, d));
      std::copy(in, in + hc, o);
    }
    auto* o = out.row(Codec::insert(code, pos, Codec::kSeparator));
    for (int h = 1; h < hc; ++h) o[h] = in[h - 1];
  }
  return out;
}

// Combines two tables over the same bag: min over h1 + h2 = h + |X ∩ bag| of the sums.
template <int Parts>
DpTable<Parts> join(const DpTable<Parts>& a, const DpTable<Parts>& b) {
  using Codec = PartitionCodec<Parts>;
  if (a.bag() != b.bag() || a.h_count() != b.h_count()) throw ContractViolation("join of tables over different bags");
  DpTable<Parts> out(a.bag(), a.h_count());
  const int hc = a.h_count();
  constexpr auto kAbsent = DpTable<Parts>::kAbsent;
  for (PartitionCode code = 0; code < a.code_count(); ++code) {
    const auto* ra = a.row(code);
    const auto* rb = b.row(code);
    if (std::all_of(ra, ra + hc, [](auto x) { return x == kAbsent; })) continue;
    if (std::all_of(rb, rb + hc, [](auto x) { return x == kAbsent; })) continue;
    const int shared = Codec::separator_count(code, a.bag_size());
    auto* o = out.row(code);
    for (int h1 = 0; h1 < hc; ++h1) {
      if (ra[h1] == kAbsent) continue;
      for (int h2 = 0; h2 < hc; ++h2) {
        if (rb[h2] == kAbsent) continue;
        const int h = h1 + h2 - shared;
        if (h < 0 || h >= hc) continue;
        o[h] = std::min(o[h], checked_value(std::uint64_t{ra[h1]} + rb[h2]));
      }
    }
  }
  return out;
}

}  // namespace nice
}  // namespace twapprox
