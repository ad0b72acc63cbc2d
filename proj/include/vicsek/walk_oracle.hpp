#pragma once

// Ground-truth first-passage machinery: two independent exact hitting-time
// routes (tree edge decomposition, and generic rational elimination on the
// grounded Laplacian system) plus a seedable, reproducible Monte Carlo
// walker. The exact routes deliberately share no code; their agreement is
// what the formula-errata verdicts rest on.

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "vicsek/error.hpp"
#include "vicsek/exact.hpp"
#include "vicsek/tree_core.hpp"

namespace vicsek {

inline constexpr std::int64_t kExactSolveCap = 300;
inline constexpr std::int64_t kTreeMfptCap = 20'000;

// --- exact route 1: tree edge decomposition ---------------------------------
// Crossing edge (a,b) toward the target costs 2*N_a - 1 where N_a counts the
// vertices on a's side, so F(u -> target) accumulates along the unique path.
// Hitting times on trees are integers; with the 2e6 vertex cap they are
// bounded by 2n^2 < 2^63, so int64 holds them exactly.
inline std::vector<std::int64_t> hitting_times_tree(const Tree& g, VertexId target) {
  g.check_vertex(target);
  BfsTraversal bfs = bfs_traversal(g, target);
  const auto n = static_cast<std::size_t>(g.n());
  std::vector<std::int64_t> subtree(n, 1);
  for (std::size_t i = bfs.order.size(); i-- > 1;) {
    VertexId v = bfs.order[i];
    subtree[bfs.parent[v]] += subtree[v];
  }
  std::vector<std::int64_t> f(n, 0);
  for (std::size_t i = 1; i < bfs.order.size(); ++i) {
    VertexId v = bfs.order[i];
    f[v] = f[bfs.parent[v]] + 2 * subtree[v] - 1;
  }
  return f;
}

// --- exact route 2: generic linear solve ------------------------------------
// Solves (I - P restricted to V \ {target}) h = 1 with P = D^{-1} A, i.e. the
// grounded-Laplacian system  deg(v) h_v - sum_{w ~ v, w != target} h_w = deg(v),
// by exact rational Gaussian elimination. Vertices are eliminated in reverse
// BFS order from the target (a standard fill-reducing ordering); the system is
// positive definite for connected inputs so no pivoting is required.
inline std::vector<Rational> hitting_times_solve(const Tree& g, VertexId target,
                                                 std::int64_t cap = kExactSolveCap) {
  g.check_vertex(target);
  require(g.n() <= cap, errc::too_large_for_exact_solve,
          "exact elimination capped at " + std::to_string(cap) + " vertices, graph has " +
              std::to_string(g.n()));

  BfsTraversal bfs = bfs_traversal(g, target);
  const auto n = static_cast<std::size_t>(g.n());
  const std::size_t k = n - 1;  // unknowns
  std::vector<std::size_t> col_of(n, SIZE_MAX);
  std::vector<VertexId> vertex_of(k);
  for (std::size_t i = 0; i < k; ++i) {
    VertexId v = bfs.order[n - 1 - i];  // leaves first, target excluded
    col_of[v] = i;
    vertex_of[i] = v;
  }

  std::vector<std::vector<Rational>> a(k, std::vector<Rational>(k + 1, Rational(0)));
  for (std::size_t i = 0; i < k; ++i) {
    VertexId v = vertex_of[i];
    a[i][i] = Rational(g.degree(v));
    a[i][k] = Rational(g.degree(v));  // rhs
    for (VertexId w : g.neighbors(v)) {
      if (w != target) a[i][col_of[w]] = Rational(-1);
    }
  }

  for (std::size_t p = 0; p < k; ++p) {
    require(a[p][p] != 0, errc::internal_inconsistency,
            "zero pivot in grounded-Laplacian elimination");
    std::vector<std::size_t> pivot_cols;
    for (std::size_t j = p + 1; j <= k; ++j) {
      if (a[p][j] != 0) pivot_cols.push_back(j);
    }
    for (std::size_t i = p + 1; i < k; ++i) {
      if (a[i][p] == 0) continue;
      Rational factor = a[i][p] / a[p][p];
      a[i][p] = 0;
      for (std::size_t j : pivot_cols) a[i][j] -= factor * a[p][j];
    }
  }

  std::vector<Rational> x(k);
  for (std::size_t i = k; i-- > 0;) {
    Rational acc = a[i][k];
    for (std::size_t j = i + 1; j < k; ++j) {
      if (a[i][j] != 0) acc -= a[i][j] * x[j];
    }
    x[i] = acc / a[i][i];
    x[i].canonicalize();
  }

  std::vector<Rational> out(n, Rational(0));
  for (std::size_t i = 0; i < k; ++i) out[vertex_of[i]] = x[i];
  return out;
}

enum class HittingMethod { tree_decomposition, exact_solve };

// Mean first-passage time as the average of F(u->v) over ordered pairs,
// exact. Trees use the linear per-target decomposition by default.
inline Rational mfpt_oracle(const Tree& g, HittingMethod method = HittingMethod::tree_decomposition,
                            std::int64_t cap = 0) {
  require(g.n() >= 2, errc::degenerate_size, "mean first-passage time needs >= 2 vertices");
  BigInt total = 0;
  if (method == HittingMethod::tree_decomposition) {
    if (cap == 0) cap = kTreeMfptCap;
    require(g.n() <= cap, errc::too_large_for_exact_solve,
            "mfpt oracle capped at " + std::to_string(cap) + " vertices, graph has " +
                std::to_string(g.n()));
    for (VertexId target = 0; target < g.n(); ++target) {
      std::int64_t col = 0;
      for (std::int64_t fv : hitting_times_tree(g, target)) col += fv;
      total += static_cast<unsigned long>(col);
    }
  } else {
    if (cap == 0) cap = kExactSolveCap;
    Rational acc(0);
    for (VertexId target = 0; target < g.n(); ++target) {
      for (const Rational& fv : hitting_times_solve(g, target, cap)) acc += fv;
    }
    acc /= (BigInt(g.n()) * BigInt(g.n() - 1));
    acc.canonicalize();
    return acc;
  }
  return make_rational(total, BigInt(g.n()) * BigInt(g.n() - 1));
}

// All-pairs exact table for small graphs (test/report use).
struct HittingTimeTable {
  VertexId n = 0;
  std::vector<Rational> f;  // row-major, f[u*n + v] = F(u -> v)

  const Rational& at(VertexId u, VertexId v) const { return f[static_cast<std::size_t>(u * n + v)]; }
};

inline HittingTimeTable hitting_table(const Tree& g,
                                      HittingMethod method = HittingMethod::tree_decomposition,
                                      std::int64_t cap = kExactSolveCap) {
  require(g.n() <= cap, errc::too_large_for_exact_solve,
          "hitting table capped at " + std::to_string(cap) + " vertices");
  HittingTimeTable tab;
  tab.n = g.n();
  tab.f.assign(static_cast<std::size_t>(g.n()) * g.n(), Rational(0));
  for (VertexId target = 0; target < g.n(); ++target) {
    if (method == HittingMethod::tree_decomposition) {
      auto col = hitting_times_tree(g, target);
      for (VertexId u = 0; u < g.n(); ++u) tab.f[static_cast<std::size_t>(u * g.n() + target)] = Rational(static_cast<long>(col[u]));
    } else {
      auto col = hitting_times_solve(g, target, cap);
      for (VertexId u = 0; u < g.n(); ++u) tab.f[static_cast<std::size_t>(u * g.n() + target)] = col[u];
    }
  }
  return tab;
}

// --- Monte Carlo ------------------------------------------------------------

// splitmix64: the mixing function behind per-walk stream derivation and the
// counter-based generator itself.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

class RngStream {
 public:
  explicit RngStream(std::uint64_t stream_seed) : state_(mix64(stream_seed)) {}

  std::uint64_t next() { return mix64(state_++); }

  // Uniform index in [0, bound); multiply-shift, deterministic.
  std::uint64_t bounded(std::uint64_t bound) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next()) * bound) >> 64);
  }

 private:
  std::uint64_t state_;
};

struct WalkEstimate {
  double mean = 0;
  double half_width_95 = 0;
  std::int64_t samples = 0;
  std::uint64_t rng_seed = 0;
};

namespace detail {

inline constexpr double kZ95 = 1.959963984540054;

// One simple-random-walk passage; neighbor picked by index into the sorted
// adjacency list, so the trace is a pure function of the stream.
inline std::int64_t walk_until(const Tree& g, VertexId source, VertexId target, RngStream& rng) {
  VertexId at = source;
  std::int64_t steps = 0;
  while (at != target) {
    auto nbrs = g.neighbors(at);
    at = nbrs[rng.bounded(nbrs.size())];
    ++steps;
  }
  return steps;
}

inline WalkEstimate summarize(__int128 sum, __int128 sum_sq, std::int64_t count,
                              std::uint64_t seed) {
  WalkEstimate est;
  est.samples = count;
  est.rng_seed = seed;
  est.mean = static_cast<double>(sum) / static_cast<double>(count);
  if (count >= 2) {
    double var = (static_cast<double>(sum_sq) - static_cast<double>(count) * est.mean * est.mean) /
                 static_cast<double>(count - 1);
    if (var < 0) var = 0;
    est.half_width_95 = kZ95 * std::sqrt(var / static_cast<double>(count));
  }
  return est;
}

}  // namespace detail

// Empirical first-passage time from independent walks. Per-walk streams are
// derived as mix64(seed) ^ walk_index (the seed is mixed first so that nearby
// seeds do not share stream sets under xor), making totals independent of any
// scheduling or chunking of the walk loop.
inline WalkEstimate mc_first_passage(const Tree& g, VertexId source, VertexId target,
                                     std::int64_t samples, std::uint64_t rng_seed) {
  g.check_vertex(source);
  g.check_vertex(target);
  require(source != target, errc::same_source_target,
          "source and target are both " + std::to_string(source));
  require(samples >= 1, errc::bad_parameter, "samples must be >= 1");
  const std::uint64_t base = mix64(rng_seed);
  __int128 sum = 0, sum_sq = 0;
  for (std::int64_t w = 0; w < samples; ++w) {
    RngStream rng(base ^ static_cast<std::uint64_t>(w));
    std::int64_t steps = detail::walk_until(g, source, target, rng);
    sum += steps;
    sum_sq += static_cast<__int128>(steps) * steps;
  }
  return detail::summarize(sum, sum_sq, samples, rng_seed);
}

// Unbiased MFPT estimator: uniform random ordered pairs, walk_samples walks
// per pair. The interval comes from the per-pair means, which are iid.
// Accumulators are exact integers (per-pair step totals and their squares),
// so partial results combine commutatively and the totals are independent of
// how the pair loop is scheduled or chunked.
inline WalkEstimate mc_mfpt(const Tree& g, std::int64_t pair_samples, std::int64_t walk_samples,
                            std::uint64_t rng_seed) {
  require(g.n() >= 2, errc::bad_parameter, "mean first-passage time needs >= 2 vertices");
  require(pair_samples >= 1 && walk_samples >= 1, errc::bad_parameter,
          "pair and walk sample counts must be >= 1");
  const auto n = static_cast<std::uint64_t>(g.n());
  const std::uint64_t base = mix64(rng_seed ^ 0xd1b54a32d192ed03ULL);
  __int128 sum_steps = 0, sum_steps_sq = 0;
  for (std::int64_t p = 0; p < pair_samples; ++p) {
    RngStream rng(base ^ static_cast<std::uint64_t>(p));
    auto u = static_cast<VertexId>(rng.bounded(n));
    auto v = static_cast<VertexId>(rng.bounded(n - 1));
    if (v >= u) ++v;
    std::int64_t pair_steps = 0;
    for (std::int64_t k = 0; k < walk_samples; ++k) {
      pair_steps += detail::walk_until(g, u, v, rng);
    }
    sum_steps += pair_steps;
    sum_steps_sq += static_cast<__int128>(pair_steps) * pair_steps;
  }
  WalkEstimate est;
  est.rng_seed = rng_seed;
  est.samples = pair_samples * walk_samples;
  const double pairs = static_cast<double>(pair_samples);
  const double walks = static_cast<double>(walk_samples);
  est.mean = static_cast<double>(sum_steps) / (pairs * walks);
  if (pair_samples >= 2) {
    // variance of the pair means m_p = S_p / walks from the exact sums of S_p
    double mean_sq_total = static_cast<double>(sum_steps_sq) / (walks * walks);
    double var = (mean_sq_total - pairs * est.mean * est.mean) / (pairs - 1.0);
    if (var < 0) var = 0;
    est.half_width_95 = detail::kZ95 * std::sqrt(var / pairs);
  }
  return est;
}

}  // namespace vicsek
