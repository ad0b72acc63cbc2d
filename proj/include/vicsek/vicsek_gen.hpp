#pragma once

// Construction of typical and generalized Vicsek fractals by iterating the
// edge operation V_s: subdivide every edge with two middle vertices, then
// attach s - deg(v) leaves to every pre-existing vertex v. New vertex ids are
// assigned deterministically (middles in input-edge order, then leaves in
// vertex order) so repeated runs produce byte-identical edge lists.

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "vicsek/error.hpp"
#include "vicsek/exact.hpp"
#include "vicsek/tree_core.hpp"

namespace vicsek {

inline constexpr std::int64_t kDefaultVertexCap = 2'000'000;

enum class VertexKind : unsigned char { original, inserted_middle, attached_leaf };

inline const char* vertex_kind_name(VertexKind k) {
  switch (k) {
    case VertexKind::original: return "original";
    case VertexKind::inserted_middle: return "inserted-middle";
    case VertexKind::attached_leaf: return "attached-leaf";
  }
  return "?";
}

// A generation-t fractal: the underlying tree plus construction metadata.
struct FractalGraph {
  Tree tree;
  long s = 0;
  long t = 0;
  VertexId seed_size = 0;                 // n0
  std::vector<std::int32_t> birth_step;   // generation at which each vertex appeared
  std::vector<VertexKind> kind;
};

// Star with center 0 and leaves 1..s.
inline Tree star_seed(long s) {
  require(s >= 2, errc::bad_parameter, "star seed needs s >= 2, got " + std::to_string(s));
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(s));
  for (long leaf = 1; leaf <= s; ++leaf) edges.push_back({0, leaf});
  return validate_tree(s + 1, edges);
}

inline Tree single_vertex_seed() { return validate_tree(1, {}); }

// n0 * (s+1)^t without building the graph.
inline BigInt vertex_count(const BigInt& n0, long s, long t) {
  require(n0 >= 1, errc::bad_parameter, "seed size must be >= 1");
  require(s >= 2, errc::bad_parameter, "functionality parameter s must be >= 2");
  require(t >= 0, errc::bad_parameter, "generation t must be >= 0");
  return n0 * int_pow(s + 1, static_cast<unsigned long>(t));
}

inline FractalGraph wrap_seed(const Tree& seed, long s) {
  require(s >= 2, errc::bad_parameter, "s must be >= 2, got " + std::to_string(s));
  require(seed.max_degree() <= s, errc::degree_exceeds_s,
          "seed max degree " + std::to_string(seed.max_degree()) + " exceeds s = " +
              std::to_string(s));
  FractalGraph g;
  g.tree = seed;
  g.s = s;
  g.t = 0;
  g.seed_size = seed.n();
  g.birth_step.assign(static_cast<std::size_t>(seed.n()), 0);
  g.kind.assign(static_cast<std::size_t>(seed.n()), VertexKind::original);
  return g;
}

// One application of V_s. Every edge (u,v) becomes the path u-a-b-v; the two
// middles are saturated by the insertion and receive no leaves. Pre-existing
// ids are preserved.
inline FractalGraph vicsek_step(const FractalGraph& g) {
  const Tree& in = g.tree;
  const long s = g.s;
  for (VertexId v = 0; v < in.n(); ++v) {
    require(in.degree(v) <= s, errc::degree_exceeds_s,
            "vertex " + std::to_string(v) + " has degree " + std::to_string(in.degree(v)) +
                " > s = " + std::to_string(s));
  }

  const VertexId old_n = in.n();
  const std::int64_t old_m = in.edge_count();
  const VertexId new_n = old_n * (s + 1);

  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(new_n - 1));

  // Middles: edge i spawns a = old_n + 2i (next to u) and b = old_n + 2i + 1.
  VertexId next = old_n;
  for (std::int64_t i = 0; i < old_m; ++i) {
    const Edge& e = in.edges()[i];
    VertexId a = next++;
    VertexId b = next++;
    edges.push_back({e.u, a});
    edges.push_back({a, b});
    edges.push_back({b, e.v});
  }
  // Leaves: vertex order, s - deg(v) apiece.
  for (VertexId v = 0; v < old_n; ++v) {
    for (std::int64_t k = in.degree(v); k < s; ++k) edges.push_back({v, next++});
  }

  FractalGraph out;
  out.tree = validate_tree(new_n, edges);
  out.s = s;
  out.t = g.t + 1;
  out.seed_size = g.seed_size;
  out.birth_step = g.birth_step;
  out.birth_step.resize(static_cast<std::size_t>(new_n), static_cast<std::int32_t>(out.t));
  out.kind = g.kind;
  out.kind.resize(static_cast<std::size_t>(new_n), VertexKind::attached_leaf);
  for (std::int64_t i = 0; i < 2 * old_m; ++i) {
    out.kind[static_cast<std::size_t>(old_n + i)] = VertexKind::inserted_middle;
  }
  return out;
}

inline FractalGraph vicsek_step(const Tree& seed, long s) { return vicsek_step(wrap_seed(seed, s)); }

// t-fold application of V_s; t = 0 returns the seed wrapped as a FractalGraph.
// Rejects up front when the projected size n0*(s+1)^t exceeds `cap`.
inline FractalGraph generate(const Tree& seed, long s, long t, std::int64_t cap = kDefaultVertexCap) {
  require(t >= 0, errc::bad_parameter, "generation t must be >= 0");
  BigInt projected = vertex_count(seed.n(), s, t);
  require(projected <= cap, errc::size_cap_exceeded,
          "projected size " + dec(projected) + " exceeds the explicit-construction cap " +
              std::to_string(cap));
  FractalGraph g = wrap_seed(seed, s);
  for (long step = 0; step < t; ++step) g = vicsek_step(g);
  return g;
}

// JSON sidecar accompanying a written edge list.
inline void write_sidecar(const FractalGraph& g, std::ostream& out) {
  nlohmann::json j;
  j["n0"] = g.seed_size;
  j["s"] = g.s;
  j["t"] = g.t;
  j["vertex_count"] = g.tree.n();
  j["birth_step"] = g.birth_step;
  {
    std::vector<std::string> kinds;
    kinds.reserve(g.kind.size());
    for (VertexKind k : g.kind) kinds.emplace_back(vertex_kind_name(k));
    j["vertex_kind"] = kinds;
  }
  out << j.dump(2) << '\n';
}

inline std::string sidecar_string(const FractalGraph& g) {
  std::ostringstream os;
  write_sidecar(g, os);
  return os.str();
}

}  // namespace vicsek
