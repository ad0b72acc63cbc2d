#pragma once

// Exact arithmetic used throughout: arbitrary-precision integers and
// canonical rationals (GMP), plus the few numeric bridges the analysis
// layer needs (powers, logarithms of huge rationals).

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <string>

#include "vicsek/error.hpp"

namespace vicsek {

using BigInt = mpz_class;
using Rational = mpq_class;

inline BigInt int_pow(const BigInt& base, unsigned long exponent) {
  BigInt out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), exponent);
  return out;
}

inline BigInt int_pow(long base, unsigned long exponent) {
  return int_pow(BigInt(base), exponent);
}

// num/den in lowest terms; den must be nonzero.
inline Rational make_rational(const BigInt& num, const BigInt& den) {
  require(den != 0, errc::bad_parameter, "rational with zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

// base^exponent with negative exponents allowed (base must be nonzero then).
inline Rational rat_pow(const Rational& base, long exponent) {
  if (exponent >= 0) {
    Rational out(int_pow(BigInt(base.get_num()), static_cast<unsigned long>(exponent)),
                 int_pow(BigInt(base.get_den()), static_cast<unsigned long>(exponent)));
    out.canonicalize();
    return out;
  }
  require(base != 0, errc::bad_parameter, "negative power of zero");
  Rational out(int_pow(BigInt(base.get_den()), static_cast<unsigned long>(-exponent)),
               int_pow(BigInt(base.get_num()), static_cast<unsigned long>(-exponent)));
  out.canonicalize();
  return out;
}

inline Rational rat_pow(long base, long exponent) { return rat_pow(Rational(base), exponent); }

// a / b asserting the division is exact; `what` names the formula term so a
// transcription bug in a closed form surfaces as InternalInconsistency.
inline BigInt exact_div(const BigInt& a, const BigInt& b, const char* what) {
  require(b != 0, errc::internal_inconsistency, std::string("division by zero in ") + what);
  BigInt q, r;
  mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  require(r == 0, errc::internal_inconsistency,
          std::string("non-exact division in ") + what + " (remainder " + r.get_str() + ")");
  return q;
}

// Natural log of a huge positive integer via mantissa/exponent decomposition;
// exact to double precision regardless of the operand's bit length.
inline double log_bigint(const BigInt& z) {
  require(z > 0, errc::bad_parameter, "log of non-positive integer");
  long exp2 = 0;
  double mant = mpz_get_d_2exp(&exp2, z.get_mpz_t());
  return std::log(mant) + static_cast<double>(exp2) * M_LN2;
}

inline double log_rational(const Rational& q) {
  require(q > 0, errc::bad_parameter, "log of non-positive rational");
  return log_bigint(BigInt(q.get_num())) - log_bigint(BigInt(q.get_den()));
}

inline double to_double(const Rational& q) { return mpq_get_d(q.get_mpq_t()); }

inline std::string dec(const BigInt& z) { return z.get_str(); }
inline std::string num_str(const Rational& q) { return q.get_num().get_str(); }
inline std::string den_str(const Rational& q) { return q.get_den().get_str(); }

}  // namespace vicsek
