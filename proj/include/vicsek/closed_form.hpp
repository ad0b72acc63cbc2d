#pragma once

// Exact evaluation of the Wiener-index / mean-first-passage-time closed forms
// for generalized Vicsek fractals, plus the scaling exponents.
//
// Two families live here. The canonical ("derived") forms are obtained by
// solving the one-step recursion
//     W_k = 3(s+1)^2 W_{k-1} + (s^2-s-2) |V_{k-1}|^2 + (s+2) |V_{k-1}|
// in closed form; they agree with brute-force oracles everywhere. The
// "printed" variants reproduce previously published explicit formulas
// verbatim for the errata report; eval_printed_formulas makes no correctness
// claim about them.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "vicsek/error.hpp"
#include "vicsek/exact.hpp"

namespace vicsek {

struct ClosedFormParams {
  BigInt n;       // seed vertex count
  BigInt wiener;  // seed Wiener index
  long s = 0;
  long t = 0;
};

inline void check_params(const ClosedFormParams& p, bool need_t = true) {
  require(p.n >= 1, errc::bad_parameter, "seed size must be >= 1");
  require(p.wiener >= 0, errc::bad_parameter, "seed Wiener index must be >= 0");
  require((p.wiener == 0) == (p.n == 1), errc::bad_parameter,
          "seed Wiener index is zero exactly for the single-vertex seed");
  require(p.s >= 2, errc::bad_parameter, "s must be >= 2");
  if (need_t) require(p.t >= 0, errc::bad_parameter, "t must be >= 0");
}

// One V_s application: W' = 3(s+1)^2 W + (s^2-s-2) n^2 + (s+2) n.
inline BigInt wiener_one_step(const BigInt& n, const BigInt& w, long s) {
  check_params({n, w, s, 0});
  BigInt sp1 = s + 1;
  return 3 * sp1 * sp1 * w + (BigInt(s) * s - s - 2) * n * n + (s + 2) * n;
}

// Iterate the recursion t times with exact integers.
inline BigInt wiener_recursive(const ClosedFormParams& p) {
  check_params(p);
  BigInt w = p.wiener;
  BigInt size = p.n;
  for (long k = 1; k <= p.t; ++k) {
    w = wiener_one_step(size, w, p.s);
    size *= (p.s + 1);
  }
  return w;
}

// Closed form of the recursion:
//   W_t = 3^t (s+1)^{2t} W
//       + (s-2) n^2 (s+1)^{2t-1} (3^t - 1) / 2
//       + (s+2) n (s+1)^{t-1} [(3(s+1))^t - 1] / (3s+2)
// Both divisions are exact; a remainder signals a transcription bug and
// raises InternalInconsistency.
inline BigInt wiener_closed(const ClosedFormParams& p) {
  check_params(p);
  if (p.t == 0) return p.wiener;
  const auto t = static_cast<unsigned long>(p.t);
  const BigInt pow3 = int_pow(3, t);
  const BigInt pow_sp1_t = int_pow(p.s + 1, t);

  BigInt term1 = pow3 * pow_sp1_t * pow_sp1_t * p.wiener;
  BigInt term2 = exact_div((p.s - 2) * p.n * p.n * int_pow(p.s + 1, 2 * t - 1) * (pow3 - 1), 2,
                           "wiener_closed geometric sum");
  BigInt term3 = exact_div((p.s + 2) * p.n * int_pow(p.s + 1, t - 1) * (pow3 * pow_sp1_t - 1),
                           3 * p.s + 2, "wiener_closed mixed sum");
  return term1 + term2 + term3;
}

// A = 2W/|T| on a tree.
inline Rational mfpt_from_wiener(const BigInt& wiener, const BigInt& n_vertices) {
  require(n_vertices >= 2, errc::degenerate_size, "mean first-passage time needs >= 2 vertices");
  return make_rational(2 * wiener, n_vertices);
}

// Closed form for the mean first-passage time,
//   A_t = 2*3^t (s+1)^t W / n
//       + (s-2) n (s+1)^{t-1} (3^t - 1)
//       + 2(s+2) [(3(s+1))^t - 1] / ((3s+2)(s+1)),
// algebraically equal to mfpt_from_wiener(wiener_closed(p), n(s+1)^t).
inline Rational mfpt_closed(const ClosedFormParams& p) {
  check_params(p);
  require(p.t >= 1 || p.n >= 2, errc::bad_parameter,
          "t = 0 with a single-vertex seed has no mean first-passage time");
  const Rational sp1(p.s + 1);
  const Rational pow3 = rat_pow(3, p.t);
  const Rational pow_sp1_t = rat_pow(sp1, p.t);

  Rational term1 = Rational(2) * pow3 * pow_sp1_t * make_rational(p.wiener, p.n);
  Rational term2 = Rational(p.s - 2) * Rational(p.n) * rat_pow(sp1, p.t - 1) * (pow3 - 1);
  Rational term3 = Rational(2 * (p.s + 2)) * (pow3 * pow_sp1_t - 1) /
                   (Rational(3 * p.s + 2) * sp1);
  Rational out = term1 + term2 + term3;
  out.canonicalize();
  return out;
}

// --- printed formula variants (errata material) -----------------------------

enum class FormulaVariant {
  derived,
  printed_theorem3,
  printed_corollary4,
  printed_corollary5,
  printed_ap5,
};

inline const char* formula_variant_name(FormulaVariant v) {
  switch (v) {
    case FormulaVariant::derived: return "derived";
    case FormulaVariant::printed_theorem3: return "printed-theorem3";
    case FormulaVariant::printed_corollary4: return "printed-corollary4";
    case FormulaVariant::printed_corollary5: return "printed-corollary5";
    case FormulaVariant::printed_ap5: return "printed-AP5";
  }
  return "?";
}

struct ClosedFormReport {
  FormulaVariant variant = FormulaVariant::derived;
  BigInt vertex_count;
  bool has_wiener = false;
  Rational wiener;  // exact; integer-valued for the derived variant
  bool has_mfpt = false;
  Rational mfpt;
};

// Published explicit Wiener form, evaluated verbatim (negative powers of
// (s+1) at small t are kept as exact rationals).
inline Rational printed_theorem3_wiener(const ClosedFormParams& p) {
  check_params(p);
  const Rational sp1(p.s + 1);
  const Rational pow3 = rat_pow(3, p.t);
  Rational w = pow3 * rat_pow(sp1, 2 * p.t) * Rational(p.wiener) +
               Rational(p.n * p.n) * (pow3 - 1) * rat_pow(sp1, 2 * (p.t - 1)) / 2 +
               Rational(p.n) * rat_pow(sp1, p.t - 1) * (pow3 * rat_pow(sp1, p.t) - 1) /
                   Rational(3 * p.s + 2);
  w.canonicalize();
  return w;
}

// Published explicit MFPT form.
inline Rational printed_corollary4_mfpt(const ClosedFormParams& p) {
  check_params(p);
  const Rational sp1(p.s + 1);
  const Rational pow3 = rat_pow(3, p.t);
  Rational a = Rational(2) * pow3 * rat_pow(sp1, p.t) * make_rational(p.wiener, p.n) +
               Rational(p.n) * (pow3 - 1) * rat_pow(sp1, p.t - 2) +
               Rational(2) * (pow3 * rat_pow(sp1, p.t) - 1) / (Rational(3 * p.s + 2) * sp1);
  a.canonicalize();
  return a;
}

// Published typical-fractal MFPT form (star seed implied; depends on s,t only).
inline Rational printed_corollary5_mfpt(long s, long t) {
  require(s >= 2, errc::bad_parameter, "s must be >= 2");
  require(t >= 0, errc::bad_parameter, "t must be >= 0");
  const Rational sp1(s + 1);
  const Rational pow3 = rat_pow(3, t);
  Rational a = Rational(2) * pow3 * rat_pow(sp1, t + 1) + (pow3 - 1) * rat_pow(sp1, t - 1) +
               Rational(2) * (pow3 * rat_pow(sp1, t) - 1) / (Rational(3 * s + 2) * sp1);
  a.canonicalize();
  return a;
}

// Published eigenvalue-partition sums for the typical fractal, verbatim:
//   sum1 = [(3s+3)^t - 1] / [(s+1)(3s+2)]
//   sum2 = (s-2)(s+1)^{t-1}(3^t - 1)/2 + [(3s+3)^t - 1]/(3s+2)
// The published MFPT reading is 2*(sum1 + sum2).
inline std::pair<Rational, Rational> printed_ap5_sums(long s, long t) {
  require(s >= 2, errc::bad_parameter, "s must be >= 2");
  require(t >= 1, errc::bad_parameter, "t must be >= 1");
  const BigInt pow3 = int_pow(3, static_cast<unsigned long>(t));
  const BigInt pow3s3 = int_pow(3 * s + 3, static_cast<unsigned long>(t));
  Rational sum1 = make_rational(pow3s3 - 1, BigInt(s + 1) * (3 * s + 2));
  Rational sum2 =
      make_rational((s - 2) * int_pow(s + 1, static_cast<unsigned long>(t - 1)) * (pow3 - 1), 2) +
      make_rational(pow3s3 - 1, BigInt(3 * s + 2));
  sum2.canonicalize();
  return {sum1, sum2};
}

inline Rational printed_ap5_mfpt(long s, long t) {
  auto [sum1, sum2] = printed_ap5_sums(s, t);
  Rational total = Rational(2) * (sum1 + sum2);
  total.canonicalize();
  return total;
}

// Evaluates every printed formula applicable to the given parameters, tagged
// by variant; the typical-only variants are included when n = s+1.
inline std::vector<ClosedFormReport> eval_printed_formulas(const ClosedFormParams& p) {
  check_params(p);
  const BigInt count = p.n * int_pow(p.s + 1, static_cast<unsigned long>(p.t));
  std::vector<ClosedFormReport> out;

  {
    ClosedFormReport derived;
    derived.variant = FormulaVariant::derived;
    derived.vertex_count = count;
    derived.has_wiener = true;
    derived.wiener = Rational(wiener_closed(p));
    if (count >= 2) {
      derived.has_mfpt = true;
      derived.mfpt = mfpt_closed(p);
    }
    out.push_back(std::move(derived));
  }
  {
    ClosedFormReport thm3;
    thm3.variant = FormulaVariant::printed_theorem3;
    thm3.vertex_count = count;
    thm3.has_wiener = true;
    thm3.wiener = printed_theorem3_wiener(p);
    out.push_back(std::move(thm3));
  }
  {
    ClosedFormReport cor4;
    cor4.variant = FormulaVariant::printed_corollary4;
    cor4.vertex_count = count;
    cor4.has_mfpt = true;
    cor4.mfpt = printed_corollary4_mfpt(p);
    out.push_back(std::move(cor4));
  }
  if (p.n == p.s + 1 && p.wiener == BigInt(p.s) * p.s) {  // genuinely the star seed
    ClosedFormReport cor5;
    cor5.variant = FormulaVariant::printed_corollary5;
    cor5.vertex_count = count;
    cor5.has_mfpt = true;
    cor5.mfpt = printed_corollary5_mfpt(p.s, p.t);
    out.push_back(std::move(cor5));
    if (p.t >= 1) {
      ClosedFormReport ap5;
      ap5.variant = FormulaVariant::printed_ap5;
      ap5.vertex_count = count;
      ap5.has_mfpt = true;
      ap5.mfpt = printed_ap5_mfpt(p.s, p.t);
      out.push_back(std::move(ap5));
    }
  }
  return out;
}

// JSON form with big integers as decimal strings; values stay lossless.
inline nlohmann::json closed_form_report_json(const ClosedFormReport& r) {
  nlohmann::json j;
  j["variant"] = formula_variant_name(r.variant);
  j["vertex_count"] = dec(r.vertex_count);
  if (r.has_wiener) {
    j["wiener_num"] = num_str(r.wiener);
    j["wiener_den"] = den_str(r.wiener);
  }
  if (r.has_mfpt) {
    j["mfpt_num"] = num_str(r.mfpt);
    j["mfpt_den"] = den_str(r.mfpt);
  }
  return j;
}

// --- scaling analysis -------------------------------------------------------

struct ScalingReport {
  double lambda = 0;        // MFPT-vs-size exponent, 1 + ln3/ln(s+1)
  double spectral_dim = 0;  // d = 2/lambda
  double fractal_dim = 0;   // d_f = ln(s+1)/ln3
  double walk_dim = 0;      // d_w = 1 + ln(s+1)/ln3
  std::vector<std::pair<long, double>> delta_series;  // (t, ln A_t / ln |V_t|)
};

inline ScalingReport scaling_exponents(long s) {
  require(s >= 2, errc::bad_parameter, "s must be >= 2");
  ScalingReport r;
  const double ln3 = std::log(3.0);
  const double lnsp1 = std::log(static_cast<double>(s + 1));
  r.lambda = 1.0 + ln3 / lnsp1;
  r.spectral_dim = 2.0 / r.lambda;
  r.fractal_dim = lnsp1 / ln3;
  r.walk_dim = 1.0 + lnsp1 / ln3;
  require(std::fabs(r.walk_dim - 2.0 * r.fractal_dim / r.spectral_dim) <= 1e-12,
          errc::internal_inconsistency, "scaling identity d_w = 2 d_f / d violated");
  return r;
}

// Delta(t) = ln A_t / ln |V_t| from the exact closed forms; log of the exact
// rational is taken through mantissa/exponent decomposition, so arbitrarily
// large t stays accurate.
inline std::vector<std::pair<long, double>> delta_series(const ClosedFormParams& base, long t_min,
                                                         long t_max) {
  check_params(base, /*need_t=*/false);
  require(t_min >= 0 && t_max >= t_min, errc::bad_parameter, "bad t range");
  std::vector<std::pair<long, double>> out;
  for (long t = t_min; t <= t_max; ++t) {
    ClosedFormParams p{base.n, base.wiener, base.s, t};
    BigInt count = p.n * int_pow(p.s + 1, static_cast<unsigned long>(t));
    require(count >= 2, errc::bad_parameter,
            "delta undefined at t = " + std::to_string(t) + ": |V| = " + dec(count) + " < 2");
    Rational a = mfpt_closed(p);
    out.emplace_back(t, log_rational(a) / log_bigint(count));
  }
  return out;
}

// CSV schema: "s,t,vertex_count,mfpt_num,mfpt_den,delta,lambda"; exact
// integers in full decimal, floats only in the delta/lambda columns.
inline void write_scaling_csv(const ClosedFormParams& seed, const std::vector<long>& s_list,
                              long t_max, std::ostream& out) {
  out << "s,t,vertex_count,mfpt_num,mfpt_den,delta,lambda\n";
  char buf[64];
  for (long s : s_list) {
    ScalingReport exps = scaling_exponents(s);
    long t_min = (seed.n == 1) ? 1 : 0;
    require(t_max >= t_min, errc::bad_parameter,
            "t-max " + std::to_string(t_max) + " leaves no row with |V| >= 2 for this seed");
    ClosedFormParams base{seed.n, seed.wiener, s, 0};
    auto deltas = delta_series(base, t_min, t_max);
    for (const auto& [t, delta] : deltas) {
      ClosedFormParams p{seed.n, seed.wiener, s, t};
      BigInt count = p.n * int_pow(s + 1, static_cast<unsigned long>(t));
      Rational a = mfpt_closed(p);
      out << s << ',' << t << ',' << dec(count) << ',' << num_str(a) << ',' << den_str(a) << ',';
      std::snprintf(buf, sizeof buf, "%.12g,%.12g\n", delta, exps.lambda);
      out << buf;
    }
  }
}

}  // namespace vicsek
