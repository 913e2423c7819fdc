#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "twapprox/errors.hpp"

namespace twapprox {

using Vertex = std::int32_t;
using VertexSet = std::vector<Vertex>;  // always sorted ascending, no duplicates
using Edge = std::pair<Vertex, Vertex>;

// Undirected simple graph on the dense vertex ids 0..n-1.
class Graph {
 public:
  Graph() = default;

  explicit Graph(Vertex n) : adjacency_(static_cast<std::size_t>(n)) {}

  // Builds the graph from an arbitrary edge list. Self-loops and repeated edges are dropped.
  static Graph from_edges(Vertex n, std::span<const Edge> edges) {
    Graph g(n);
    for (auto [u, v] : edges) {
      if (u < 0 || v < 0 || u >= n || v >= n) {
        throw ContractViolation("edge endpoint out of range");
      }
      if (u == v) continue;
      g.adjacency_[u].push_back(v);
      g.adjacency_[v].push_back(u);
    }
    for (auto& list : g.adjacency_) {
      std::sort(list.begin(), list.end());
      list.erase(std::unique(list.begin(), list.end()), list.end());
    }
    return g;
  }

  Vertex num_vertices() const noexcept { return static_cast<Vertex>(adjacency_.size()); }

  std::size_t num_edges() const noexcept {
    std::size_t total = 0;
    for (const auto& list : adjacency_) total += list.size();
    return total / 2;
  }

  std::span<const Vertex> neighbors(Vertex v) const { return adjacency_[v]; }

  std::size_t degree(Vertex v) const { return adjacency_[v].size(); }

  bool has_edge(Vertex u, Vertex v) const {
    const auto& list = adjacency_[u];
    return std::binary_search(list.begin(), list.end(), v);
  }

  // Edges with u < v in lexicographic order.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(num_edges());
    for (Vertex u = 0; u < num_vertices(); ++u) {
      for (Vertex v : adjacency_[u]) {
        if (u < v) out.emplace_back(u, v);
      }
    }
    return out;
  }

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  std::vector<std::vector<Vertex>> adjacency_;
};

namespace detail {

// Splits a line into whitespace separated tokens.
inline std::vector<std::string_view> tokenize(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

inline long long parse_integer(std::string_view token, std::size_t line_no) {
  long long value = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw ParseError(line_no, "expected an integer, got '" + std::string(token) + "'");
  }
  return value;
}

// Calls `fn(line_no, tokens)` for every non-empty, non-comment line.
template <typename Fn>
void for_each_record(std::string_view text, Fn&& fn) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    auto tokens = tokenize(text.substr(pos, end - pos));
    if (!tokens.empty() && tokens.front() != "c") fn(line_no, tokens);
    if (end == text.size()) break;
    pos = end + 1;
  }
}

}  // namespace detail

// Normalization counters reported by parse_gr.
struct GrStats {
  std::size_t duplicate_edges = 0;
  std::size_t self_loops = 0;
};

// Reads a PACE 2017 `.gr` file. Vertex ids in the file are 1-based.
inline Graph parse_gr(std::string_view text, GrStats* stats = nullptr) {
  bool have_header = false;
  long long n = 0;
  long long m = 0;
  std::vector<Edge> edges;
  std::size_t last_line = 0;
  GrStats local;

  detail::for_each_record(text, [&](std::size_t line_no, const auto& tok) {
    last_line = line_no;
    if (tok.front() == "p") {
      if (have_header) throw ParseError(line_no, "duplicate header");
      if (tok.size() != 4 || tok[1] != "tw") throw ParseError(line_no, "malformed header, expected 'p tw <n> <m>'");
      n = detail::parse_integer(tok[2], line_no);
      m = detail::parse_integer(tok[3], line_no);
      if (n < 0 || m < 0 || n > INT32_MAX) throw ParseError(line_no, "malformed header, negative or oversized counts");
      have_header = true;
      edges.reserve(static_cast<std::size_t>(m));
      return;
    }
    if (!have_header) throw ParseError(line_no, "edge before 'p tw' header");
    if (tok.size() != 2) throw ParseError(line_no, "expected an edge '<u> <v>'");
    long long u = detail::parse_integer(tok[0], line_no);
    long long v = detail::parse_integer(tok[1], line_no);
    if (u < 1 || u > n || v < 1 || v > n) throw ParseError(line_no, "vertex id out of range");
    if (static_cast<long long>(edges.size()) >= m) throw ParseError(line_no, "more edges than announced in header");
    edges.emplace_back(static_cast<Vertex>(u - 1), static_cast<Vertex>(v - 1));
  });

  if (!have_header) throw ParseError(last_line + 1, "missing 'p tw' header");
  if (static_cast<long long>(edges.size()) != m) throw ParseError(last_line, "fewer edges than announced in header");

  std::vector<Edge> normalized;
  normalized.reserve(edges.size());
  for (auto [u, v] : edges) {
    if (u == v) {
      ++local.self_loops;
      continue;
    }
    normalized.emplace_back(std::min(u, v), std::max(u, v));
  }
  std::sort(normalized.begin(), normalized.end());
  auto unique_end = std::unique(normalized.begin(), normalized.end());
  local.duplicate_edges = static_cast<std::size_t>(normalized.end() - unique_end);
  normalized.erase(unique_end, normalized.end());

  if (stats) *stats = local;
  return Graph::from_edges(static_cast<Vertex>(n), normalized);
}

// Canonical `.gr` text: header, then edges u < v in lexicographic order, 1-based.
inline std::string emit_gr(const Graph& g) {
  std::ostringstream out;
  const auto edges = g.edges();
  out << "p tw " << g.num_vertices() << ' ' << edges.size() << '\n';
  for (auto [u, v] : edges) out << u + 1 << ' ' << v + 1 << '\n';
  return out.str();
}

}  // namespace twapprox
