#pragma once

// Undirected-tree representation with validation, BFS distances and the
// Wiener-index routines (pairwise-BFS oracle and linear-time edge-cut form).
//
// Values are immutable after construction and safe to share across threads;
// every operation here is a pure function of its inputs.

#include <algorithm>
#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "vicsek/error.hpp"
#include "vicsek/exact.hpp"

namespace vicsek {

using VertexId = std::int64_t;

struct Edge {
  VertexId u = 0;
  VertexId v = 0;
  friend bool operator==(const Edge&, const Edge&) = default;
};

// A validated undirected tree. Construct through validate_tree()
// (or the generators); neighbor lists are kept sorted so iteration
// order, and hence every Monte Carlo trace, is deterministic.
class Tree {
 public:
  Tree() = default;

  VertexId n() const { return n_; }
  std::int64_t edge_count() const { return static_cast<std::int64_t>(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }

  std::int64_t degree(VertexId v) const {
    check_vertex(v);
    return offsets_[v + 1] - offsets_[v];
  }

  std::span<const VertexId> neighbors(VertexId v) const {
    check_vertex(v);
    return {nbrs_.data() + offsets_[v], static_cast<std::size_t>(offsets_[v + 1] - offsets_[v])};
  }

  std::int64_t max_degree() const { return max_degree_; }

  void check_vertex(VertexId v) const {
    if (v < 0 || v >= n_) [[unlikely]] {
      fail(errc::id_out_of_range,
           "vertex id " + std::to_string(v) + " not in [0, " + std::to_string(n_) + ")");
    }
  }

  friend Tree validate_tree(VertexId n, const std::vector<Edge>& edges);

 private:
  VertexId n_ = 0;
  std::vector<Edge> edges_;          // input order preserved
  std::vector<std::int64_t> offsets_;  // CSR adjacency, neighbors sorted
  std::vector<VertexId> nbrs_;
  std::int64_t max_degree_ = 0;
};

// Checks that (n, edges) is a connected acyclic simple graph and builds the
// adjacency structure. Error messages name the first offending element.
inline Tree validate_tree(VertexId n, const std::vector<Edge>& edges) {
  require(n >= 1, errc::bad_parameter, "vertex count must be >= 1, got " + std::to_string(n));

  auto edge_str = [](const Edge& e) {
    return "(" + std::to_string(e.u) + "," + std::to_string(e.v) + ")";
  };

  for (const Edge& e : edges) {
    if (e.u < 0 || e.u >= n || e.v < 0 || e.v >= n) [[unlikely]] {
      fail(errc::id_out_of_range,
           "edge " + edge_str(e) + " references a vertex outside [0, " + std::to_string(n) + ")");
    }
    if (e.u == e.v) [[unlikely]] {
      fail(errc::self_loop, "edge " + edge_str(e) + " is a self-loop");
    }
  }

  {
    std::vector<std::pair<VertexId, VertexId>> seen;
    seen.reserve(edges.size());
    for (const Edge& e : edges) seen.emplace_back(std::min(e.u, e.v), std::max(e.u, e.v));
    std::sort(seen.begin(), seen.end());
    auto dup = std::adjacent_find(seen.begin(), seen.end());
    if (dup != seen.end()) {
      fail(errc::duplicate_edge, "edge (" + std::to_string(dup->first) + "," +
                                     std::to_string(dup->second) + ") appears more than once");
    }
  }

  const auto m = static_cast<std::int64_t>(edges.size());
  if (m > n - 1) {
    fail(errc::has_cycle, "graph has " + std::to_string(m) + " edges on " + std::to_string(n) +
                              " vertices; a tree needs exactly n-1");
  }
  if (m < n - 1) {
    fail(errc::not_connected, "graph has only " + std::to_string(m) + " edges on " +
                                  std::to_string(n) + " vertices; a tree needs exactly n-1");
  }

  Tree t;
  t.n_ = n;
  t.edges_ = edges;
  t.offsets_.assign(static_cast<std::size_t>(n) + 1, 0);
  for (const Edge& e : edges) {
    ++t.offsets_[e.u + 1];
    ++t.offsets_[e.v + 1];
  }
  for (VertexId v = 0; v < n; ++v) t.offsets_[v + 1] += t.offsets_[v];
  t.nbrs_.resize(static_cast<std::size_t>(2) * m);
  {
    std::vector<std::int64_t> cursor(t.offsets_.begin(), t.offsets_.end() - 1);
    for (const Edge& e : edges) {
      t.nbrs_[cursor[e.u]++] = e.v;
      t.nbrs_[cursor[e.v]++] = e.u;
    }
  }
  for (VertexId v = 0; v < n; ++v) {
    std::sort(t.nbrs_.begin() + t.offsets_[v], t.nbrs_.begin() + t.offsets_[v + 1]);
    t.max_degree_ = std::max(t.max_degree_, t.offsets_[v + 1] - t.offsets_[v]);
  }

  // n-1 edges and no duplicates: connectivity from vertex 0 implies a tree.
  {
    std::vector<char> reached(static_cast<std::size_t>(n), 0);
    std::vector<VertexId> stack{0};
    reached[0] = 1;
    while (!stack.empty()) {
      VertexId u = stack.back();
      stack.pop_back();
      for (VertexId w : t.neighbors(u)) {
        if (!reached[w]) {
          reached[w] = 1;
          stack.push_back(w);
        }
      }
    }
    auto miss = std::find(reached.begin(), reached.end(), 0);
    if (miss != reached.end()) {
      fail(errc::not_connected,
           "vertex " + std::to_string(miss - reached.begin()) + " is unreachable from vertex 0");
    }
  }
  return t;
}

// Exact hop distances from `source` to every vertex.
inline std::vector<std::int64_t> bfs_distances(const Tree& g, VertexId source) {
  g.check_vertex(source);
  std::vector<std::int64_t> dist(static_cast<std::size_t>(g.n()), -1);
  std::vector<VertexId> frontier{source}, next;
  dist[source] = 0;
  std::int64_t level = 0;
  while (!frontier.empty()) {
    ++level;
    next.clear();
    for (VertexId u : frontier) {
      for (VertexId w : g.neighbors(u)) {
        if (dist[w] < 0) {
          dist[w] = level;
          next.push_back(w);
        }
      }
    }
    frontier.swap(next);
  }
  return dist;
}

// BFS vertex order from `root` together with the induced parent array.
// Order[0] == root; every vertex appears after its parent.
struct BfsTraversal {
  std::vector<VertexId> order;
  std::vector<VertexId> parent;  // parent[root] == -1
};

inline BfsTraversal bfs_traversal(const Tree& g, VertexId root) {
  g.check_vertex(root);
  BfsTraversal out;
  out.order.reserve(static_cast<std::size_t>(g.n()));
  out.parent.assign(static_cast<std::size_t>(g.n()), -2);
  out.parent[root] = -1;
  out.order.push_back(root);
  for (std::size_t head = 0; head < out.order.size(); ++head) {
    VertexId u = out.order[head];
    for (VertexId w : g.neighbors(u)) {
      if (out.parent[w] == -2) {
        out.parent[w] = u;
        out.order.push_back(w);
      }
    }
  }
  require(out.order.size() == static_cast<std::size_t>(g.n()), errc::not_connected,
          "graph is not connected");
  return out;
}

// Wiener index by pairwise BFS: W = sum of d(u,v) over unordered pairs.
// The brute-force oracle; quadratic, intended for verification scale.
// Scratch buffers are reused across sources, which matters at the few-
// thousand-vertex sizes the acceptance grid visits.
inline BigInt wiener_brute(const Tree& g) {
  const VertexId n = g.n();
  std::vector<std::int32_t> dist(static_cast<std::size_t>(n));
  std::vector<VertexId> queue(static_cast<std::size_t>(n));
  BigInt twice_w = 0;
  for (VertexId src = 0; src < n; ++src) {
    std::fill(dist.begin(), dist.end(), -1);
    dist[src] = 0;
    queue[0] = src;
    std::size_t head = 0, tail = 1;
    std::int64_t row = 0;
    while (head < tail) {
      VertexId u = queue[head++];
      for (VertexId w : g.neighbors(u)) {
        if (dist[w] < 0) {
          dist[w] = dist[u] + 1;
          row += dist[w];
          queue[tail++] = w;
        }
      }
    }
    require(tail == static_cast<std::size_t>(n), errc::not_connected, "graph is not connected");
    twice_w += static_cast<unsigned long>(row);
  }
  return exact_div(twice_w, 2, "wiener_brute pair sum");
}

// Wiener index in linear time via edge cuts: removing an edge splits the tree
// into sides of size c and n-c, and that edge lies on exactly c*(n-c) paths.
inline BigInt wiener_fast_tree(const Tree& g) {
  const VertexId n = g.n();
  if (n == 1) return 0;
  BfsTraversal bfs = bfs_traversal(g, 0);
  std::vector<std::int64_t> subtree(static_cast<std::size_t>(n), 1);
  BigInt w = 0;
  for (std::size_t i = bfs.order.size(); i-- > 1;) {
    VertexId v = bfs.order[i];
    subtree[bfs.parent[v]] += subtree[v];
    unsigned long long cut =
        static_cast<unsigned long long>(subtree[v]) * static_cast<unsigned long long>(n - subtree[v]);
    w += BigInt(static_cast<unsigned long>(cut));
  }
  return w;
}

// W / (n(n-1)/2) as an exact rational.
inline Rational average_path_length(const Tree& g) {
  require(g.n() >= 2, errc::degenerate_size,
          "average path length needs n >= 2, got n = " + std::to_string(g.n()));
  BigInt pairs = BigInt(g.n()) * BigInt(g.n() - 1) / 2;
  return make_rational(wiener_brute(g), pairs);
}

// --- edge-list text format ------------------------------------------------
// First line "n m", then m lines "u v" (0-based ids, whitespace separated,
// LF endings). Lines starting with '#' are comments.

inline Tree read_edge_list(std::istream& in) {
  auto next_line = [&in](std::string& line) -> bool {
    while (std::getline(in, line)) {
      std::size_t pos = line.find_first_not_of(" \t\r");
      if (pos == std::string::npos) continue;
      if (line[pos] == '#') continue;
      return true;
    }
    return false;
  };

  std::string line;
  require(next_line(line), errc::io_error, "edge list is empty");
  VertexId n = 0;
  std::int64_t m = 0;
  {
    std::istringstream hdr(line);
    require(static_cast<bool>(hdr >> n >> m), errc::io_error,
            "bad header line, expected \"n m\": " + line);
  }
  require(m >= 0, errc::io_error, "negative edge count in header");
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(m));
  for (std::int64_t i = 0; i < m; ++i) {
    require(next_line(line), errc::io_error,
            "expected " + std::to_string(m) + " edges, found " + std::to_string(i));
    std::istringstream es(line);
    Edge e;
    require(static_cast<bool>(es >> e.u >> e.v), errc::io_error, "bad edge line: " + line);
    edges.push_back(e);
  }
  return validate_tree(n, edges);
}

inline void write_edge_list(const Tree& g, std::ostream& out) {
  out << g.n() << ' ' << g.edge_count() << '\n';
  for (const Edge& e : g.edges()) out << e.u << ' ' << e.v << '\n';
}

inline std::string edge_list_string(const Tree& g) {
  std::ostringstream os;
  write_edge_list(g, os);
  return os.str();
}

}  // namespace vicsek
