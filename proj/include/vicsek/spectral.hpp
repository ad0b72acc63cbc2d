#pragma once

// Laplacian-based machinery: pseudoinverse hitting times, eigenvalue-sum
// MFPT, and the cubic spectral-decimation recursion
//     x (x - 3) (x - s - 1) = phi_parent,
// which maps every nonzero eigenvalue of generation t to three eigenvalues
// of generation t+1.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "vicsek/closed_form.hpp"
#include "vicsek/error.hpp"
#include "vicsek/exact.hpp"
#include "vicsek/tree_core.hpp"

namespace vicsek {

inline constexpr std::int64_t kDenseCap = 2000;

// Dense Laplacian: degrees on the diagonal, -1 for edges. Entries are small
// integers, represented exactly in double.
inline Eigen::MatrixXd laplacian(const Tree& g, std::int64_t cap = kDenseCap) {
  require(g.n() <= cap, errc::dense_cap_exceeded,
          "dense Laplacian capped at " + std::to_string(cap) + " vertices, graph has " +
              std::to_string(g.n()));
  const auto n = static_cast<Eigen::Index>(g.n());
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
  for (VertexId v = 0; v < g.n(); ++v) l(v, v) = static_cast<double>(g.degree(v));
  for (const Edge& e : g.edges()) {
    l(e.u, e.v) = -1.0;
    l(e.v, e.u) = -1.0;
  }
  return l;
}

struct SpectrumResult {
  std::vector<double> eigenvalues;  // ascending
  std::size_t zero_index = 0;
  double reciprocal_sum = 0;  // sum of 1/phi over nonzero eigenvalues
};

// All Laplacian eigenvalues of a connected graph, ascending. Checks that the
// null eigenvalue is simple, as it must be for connected inputs.
inline SpectrumResult spectrum(const Tree& g, std::int64_t cap = kDenseCap) {
  Eigen::MatrixXd l = laplacian(g, cap);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(l, Eigen::EigenvaluesOnly);
  require(solver.info() == Eigen::Success, errc::internal_inconsistency,
          "symmetric eigensolver failed to converge");

  SpectrumResult out;
  out.eigenvalues.assign(solver.eigenvalues().data(),
                         solver.eigenvalues().data() + solver.eigenvalues().size());
  const double scale = std::max(1.0, std::fabs(out.eigenvalues.back()));
  const double ztol = 1e-9 * scale;
  require(std::fabs(out.eigenvalues.front()) <= ztol, errc::internal_inconsistency,
          "smallest Laplacian eigenvalue is not numerically zero");
  require(out.eigenvalues.size() == 1 || out.eigenvalues[1] > ztol, errc::internal_inconsistency,
          "null eigenvalue is not simple; graph should be connected");
  out.zero_index = 0;
  out.reciprocal_sum = 0;
  for (std::size_t i = 1; i < out.eigenvalues.size(); ++i) {
    out.reciprocal_sum += 1.0 / out.eigenvalues[i];
  }
  return out;
}

// A = 2 * sum of reciprocal nonzero eigenvalues (trees).
inline double mfpt_eigen(const SpectrumResult& s) { return 2.0 * s.reciprocal_sum; }

// Hitting-time matrix from the Laplacian pseudoinverse: the pseudoinverse is
// obtained by the rank-one shift (L - J/n)^{-1} + J/n, and
//   F(u->v) = g(u) - g(v) + 2m (ldag(v,v) - ldag(u,v)),  g(u) = sum_a k_a ldag(u,a).
// The sign convention is the one that reproduces the exact tree oracle.
inline Eigen::MatrixXd pseudoinverse_hitting(const Tree& g, std::int64_t cap = kDenseCap) {
  require(g.n() <= cap, errc::dense_cap_exceeded,
          "pseudoinverse hitting capped at " + std::to_string(cap) + " vertices, graph has " +
              std::to_string(g.n()));
  const auto n = static_cast<Eigen::Index>(g.n());
  Eigen::MatrixXd l = laplacian(g, cap);
  Eigen::MatrixXd shifted = l.array() - 1.0 / static_cast<double>(n);
  Eigen::MatrixXd inv = shifted.partialPivLu().solve(Eigen::MatrixXd::Identity(n, n));

  // 6-digit loss gate: backward-stable solves sit near machine epsilon.
  const double rel_residual = (shifted * inv - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() /
                              std::max(1.0, shifted.cwiseAbs().rowwise().sum().maxCoeff() *
                                                inv.cwiseAbs().rowwise().sum().maxCoeff());
  require(rel_residual <= 2.2e-10, errc::ill_conditioned,
          "pseudoinverse solve lost more than 6 digits (relative residual " +
              std::to_string(rel_residual) + ")");

  Eigen::MatrixXd ldag = inv.array() + 1.0 / static_cast<double>(n);
  Eigen::VectorXd degrees(n);
  for (VertexId v = 0; v < g.n(); ++v) degrees(v) = static_cast<double>(g.degree(v));
  const double two_m = 2.0 * static_cast<double>(g.edge_count());
  Eigen::VectorXd gsum = ldag * degrees;

  Eigen::MatrixXd f(n, n);
  for (Eigen::Index u = 0; u < n; ++u) {
    for (Eigen::Index v = 0; v < n; ++v) {
      f(u, v) = (u == v) ? 0.0 : gsum(u) - gsum(v) + two_m * (ldag(v, v) - ldag(u, v));
    }
  }
  return f;
}

// --- spectral decimation ------------------------------------------------------

struct DecimationTriple {
  double parent = 0;
  std::array<double, 3> children{};   // ascending
  std::array<double, 3> residuals{};  // f(child) - parent
};

// The three real roots of x(x-3)(x-s-1) = phi_t, via the companion matrix of
// the cubic with one or two Newton polish steps. Throws NoThreeRealRoots when
// phi_t lies beyond the local maximum and the cubic has a complex pair.
inline DecimationTriple decimate_eigenvalue(double phi_t, long s) {
  require(phi_t > 0, errc::bad_parameter, "decimation needs a positive parent eigenvalue");
  require(s >= 2, errc::bad_parameter, "s must be >= 2");

  // x^3 + a2 x^2 + a1 x + a0
  const double a2 = -static_cast<double>(s + 4);
  const double a1 = 3.0 * static_cast<double>(s + 1);
  const double a0 = -phi_t;
  Eigen::Matrix3d companion;
  companion << 0, 0, -a0,
               1, 0, -a1,
               0, 1, -a2;
  Eigen::EigenSolver<Eigen::Matrix3d> solver(companion);
  require(solver.info() == Eigen::Success, errc::internal_inconsistency,
          "companion eigensolver failed");

  auto cubic = [&](double x) { return x * (x - 3.0) * (x - static_cast<double>(s + 1)); };
  auto cubic_deriv = [&](double x) {
    return 3.0 * x * x + 2.0 * a2 * x + a1;
  };

  DecimationTriple out;
  out.parent = phi_t;
  const double res_tol = 1e-10 * std::max(1.0, phi_t);
  for (int i = 0; i < 3; ++i) {
    std::complex<double> root = solver.eigenvalues()(i);
    require(std::fabs(root.imag()) <= 1e-7 * (1.0 + std::fabs(root.real())),
            errc::no_three_real_roots,
            "cubic has a complex root pair for parent " + std::to_string(phi_t));
    double x = root.real();
    for (int iter = 0; iter < 8 && std::fabs(cubic(x) - phi_t) > res_tol; ++iter) {
      double deriv = cubic_deriv(x);
      if (deriv == 0) break;
      x -= (cubic(x) - phi_t) / deriv;
    }
    out.children[i] = x;
  }
  std::sort(out.children.begin(), out.children.end());
  for (int i = 0; i < 3; ++i) {
    out.residuals[i] = cubic(out.children[i]) - phi_t;
    require(std::fabs(out.residuals[i]) <= res_tol, errc::internal_inconsistency,
            "decimation root polish did not reach the residual tolerance");
  }
  return out;
}

// Inclusion check between two consecutive generations: each nonzero parent
// eigenvalue's three cubic roots should appear in the child spectrum.
struct DecimationEntry {
  double parent = 0;
  std::array<double, 3> children{};
  std::array<double, 3> residuals{};
  std::array<std::int64_t, 3> matched_child_index{};
  std::array<double, 3> match_error{};
  bool matched = false;
};

struct DecimationReport {
  long s = 0;
  long parent_generation = -1;
  long child_generation = -1;
  double match_tolerance = 0;
  std::vector<DecimationEntry> entries;
  bool all_matched = false;
};

inline DecimationReport decimation_report(const SpectrumResult& parent_gen,
                                          const SpectrumResult& child_gen, long s,
                                          double match_tol = 1e-6) {
  DecimationReport rep;
  rep.s = s;
  rep.match_tolerance = match_tol;
  rep.all_matched = true;
  const double scale = std::max(1.0, std::fabs(parent_gen.eigenvalues.back()));
  const double ztol = 1e-9 * scale;
  const auto& child = child_gen.eigenvalues;
  for (std::size_t i = 0; i < parent_gen.eigenvalues.size(); ++i) {
    double phi = parent_gen.eigenvalues[i];
    if (i == parent_gen.zero_index || phi <= ztol) continue;
    DecimationTriple triple = decimate_eigenvalue(phi, s);
    DecimationEntry entry;
    entry.parent = phi;
    entry.children = triple.children;
    entry.residuals = triple.residuals;
    entry.matched = true;
    for (int c = 0; c < 3; ++c) {
      auto it = std::lower_bound(child.begin(), child.end(), triple.children[c]);
      std::int64_t best = -1;
      double best_err = std::numeric_limits<double>::infinity();
      for (auto probe : {it, it == child.begin() ? it : it - 1}) {
        if (probe == child.end()) continue;
        double err = std::fabs(*probe - triple.children[c]);
        if (err < best_err) {
          best_err = err;
          best = probe - child.begin();
        }
      }
      entry.matched_child_index[c] = best;
      entry.match_error[c] = best_err;
      if (best_err > match_tol) entry.matched = false;
    }
    rep.all_matched = rep.all_matched && entry.matched;
    rep.entries.push_back(entry);
  }
  return rep;
}

// --- printed eigenvalue-partition sums (errata material) ----------------------

// The two published partition sums for the typical fractal, evaluated exactly
// as printed, with their implied MFPT total 2*(sum1+sum2). No correctness
// claim; the total is compared against oracles upstream.
struct Ap5Evaluation {
  Rational sum1;
  Rational sum2;
  Rational total;
};

inline Ap5Evaluation eval_ap5_sums(long s, long t) {
  auto [sum1, sum2] = printed_ap5_sums(s, t);
  Rational total = Rational(2) * (sum1 + sum2);
  total.canonicalize();
  return {sum1, sum2, total};
}

// --- serialization -------------------------------------------------------------

// CSV schema: "index,eigenvalue,multiplicity_hint"; the hint is the size of
// the near-degenerate cluster the eigenvalue belongs to.
inline void write_spectrum_csv(const SpectrumResult& s, std::ostream& out) {
  const auto& ev = s.eigenvalues;
  const double ctol = 1e-8 * std::max(1.0, std::fabs(ev.back()));
  std::vector<std::size_t> cluster_size(ev.size(), 1);
  for (std::size_t lo = 0; lo < ev.size();) {
    std::size_t hi = lo + 1;
    while (hi < ev.size() && ev[hi] - ev[hi - 1] <= ctol) ++hi;
    for (std::size_t i = lo; i < hi; ++i) cluster_size[i] = hi - lo;
    lo = hi;
  }
  out << "index,eigenvalue,multiplicity_hint\n";
  char buf[64];
  for (std::size_t i = 0; i < ev.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%zu\n", i, ev[i], cluster_size[i]);
    out << buf;
  }
}

inline void write_decimation_json(const DecimationReport& rep, std::ostream& out) {
  nlohmann::json j;
  j["s"] = rep.s;
  j["parent_generation"] = rep.parent_generation;
  j["child_generation"] = rep.child_generation;
  j["match_tolerance"] = rep.match_tolerance;
  j["all_matched"] = rep.all_matched;
  j["entries"] = nlohmann::json::array();
  for (const DecimationEntry& e : rep.entries) {
    nlohmann::json je;
    je["parent"] = e.parent;
    je["children"] = e.children;
    je["residuals"] = e.residuals;
    je["matched_child_indices"] = e.matched_child_index;
    je["match_errors"] = e.match_error;
    je["matched"] = e.matched;
    j["entries"].push_back(je);
  }
  out << j.dump(2) << '\n';
}

}  // namespace vicsek
