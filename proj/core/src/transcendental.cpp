// Fixed-point evaluation of exp2 and log2 with directed rounding.
//
// Values are integers scaled by 2^W, W = P + kGuardBits. Every series is
// evaluated twice: once with all truncations toward zero (a certified lower
// bound, since every term is positive) and once with all truncations away
// from zero plus an explicit tail bound (a certified upper bound).

#include <algorithm>
#include <limits>
#include <map>
#include <utility>

#include "algothermo/errors.hpp"
#include "algothermo/interval.hpp"

namespace algothermo {
namespace {

constexpr std::size_t kGuardBits = 40;

std::size_t WorkingBits(Precision p) { return p.bits + kGuardBits; }

mpz_class DivRound(const mpz_class& num, const mpz_class& den, Rounding r) {
  mpz_class out;
  if (r == Rounding::kDown) {
    mpz_fdiv_q(out.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  } else {
    mpz_cdiv_q(out.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  }
  return out;
}

mpz_class ShiftRound(const mpz_class& value, std::size_t bits, Rounding r) {
  mpz_class out;
  if (r == Rounding::kDown) {
    mpz_fdiv_q_2exp(out.get_mpz_t(), value.get_mpz_t(), bits);
  } else {
    mpz_cdiv_q_2exp(out.get_mpz_t(), value.get_mpz_t(), bits);
  }
  return out;
}

mpz_class One(std::size_t w) {
  mpz_class one = 1;
  mpz_mul_2exp(one.get_mpz_t(), one.get_mpz_t(), w);
  return one;
}

// Bound on 2^W * sum_{k>=0} z^(2k+1)/(2k+1) = 2^W * atanh(z), for 0 <= z <= 1/3
// given as a fixed-point value zf already rounded in direction r.
mpz_class AtanhSeries(const mpz_class& zf, std::size_t w, Rounding r) {
  if (sgn(zf) == 0) return 0;
  const mpz_class z2 = ShiftRound(zf * zf, w, r);
  mpz_class power = zf;
  mpz_class sum = 0;
  for (unsigned long k = 0;; ++k) {
    sum += DivRound(power, mpz_class(2 * k + 1), r);
    power = ShiftRound(power * z2, w, r);
    if (r == Rounding::kDown) {
      if (sgn(power) == 0) break;
    } else if (power <= 1) {
      // Remaining terms total at most power / (1 - z^2) <= 2 * power.
      sum += 2 * power;
      break;
    }
  }
  return sum;
}

// 2^W * ln 2 rounded in direction r, cached per working width.
const mpz_class& Ln2Fixed(std::size_t w, Rounding r) {
  thread_local std::map<std::size_t, std::pair<mpz_class, mpz_class>> cache;
  auto it = cache.find(w);
  if (it == cache.end()) {
    // ln 2 = 2 atanh(1/3).
    const mpz_class one = One(w);
    const mpz_class lo = 2 * AtanhSeries(DivRound(one, 3, Rounding::kDown), w, Rounding::kDown);
    const mpz_class hi = 2 * AtanhSeries(DivRound(one, 3, Rounding::kUp), w, Rounding::kUp);
    it = cache.emplace(w, std::make_pair(lo, hi)).first;
  }
  return r == Rounding::kDown ? it->second.first : it->second.second;
}

// 2^W * ln m for m in [1, 2), rounded in direction r.
mpz_class LnMantissaFixed(const Dyadic& m, std::size_t w, Rounding r) {
  // z = (m - 1) / (m + 1) in [0, 1/3).
  const Dyadic num = m - Dyadic(1);
  const Dyadic den = m + Dyadic(1);
  // Both share the same exponent scale once aligned; compute the ratio
  // directly as an integer quotient scaled by 2^W.
  const Dyadic ratio_scaled = num.Ldexp(static_cast<std::int64_t>(w));
  const std::int64_t shift = ratio_scaled.exponent() - den.exponent();
  mpz_class n = ratio_scaled.mantissa();
  mpz_class d = den.mantissa();
  if (shift >= 0) {
    mpz_mul_2exp(n.get_mpz_t(), n.get_mpz_t(), static_cast<mp_bitcnt_t>(shift));
  } else {
    mpz_mul_2exp(d.get_mpz_t(), d.get_mpz_t(), static_cast<mp_bitcnt_t>(-shift));
  }
  const mpz_class zf = DivRound(n, d, r);
  return 2 * AtanhSeries(zf, w, r);
}

// Splits positive x as m * 2^e with m in [1, 2).
std::pair<Dyadic, std::int64_t> Normalize(const Dyadic& x) {
  const std::int64_t e = x.FloorLog2();
  return {x.Ldexp(-e), e};
}

Dyadic Log2Bound(const Dyadic& x, Precision p, Rounding r) {
  if (x.sign() <= 0) throw DomainError("log2 of a nonpositive value");
  const auto [m, e] = Normalize(x);
  if (m == Dyadic(1)) return Dyadic(e);
  const std::size_t w = WorkingBits(p);
  const mpz_class ln_m = LnMantissaFixed(m, w, r);
  const mpz_class& ln2 = Ln2Fixed(w, Opposite(r));
  const Dyadic frac = Dyadic::Quotient(Dyadic(ln_m), Dyadic(ln2), Precision{w}, r);
  return (frac + Dyadic(e)).Round(p, r);
}

Dyadic LnBound(const Dyadic& x, Precision p, Rounding r) {
  if (x.sign() <= 0) throw DomainError("ln of a nonpositive value");
  const auto [m, e] = Normalize(x);
  const std::size_t w = WorkingBits(p);
  // e * ln2 rounded in direction r: choose the ln2 endpoint by the sign of e.
  const Rounding ln2_dir = e >= 0 ? r : Opposite(r);
  mpz_class fixed = mpz_class(static_cast<long>(e)) * Ln2Fixed(w, ln2_dir);
  if (!(m == Dyadic(1))) fixed += LnMantissaFixed(m, w, r);
  return Dyadic(fixed, -static_cast<std::int64_t>(w)).Round(p, r);
}

std::int64_t ToExponent(const mpz_class& k) {
  if (!k.fits_slong_p()) throw DomainError("exponent out of range for exp2");
  const long v = k.get_si();
  if (v > std::numeric_limits<std::int32_t>::max() / 2 ||
      v < std::numeric_limits<std::int32_t>::min() / 2) {
    throw DomainError("exponent out of range for exp2");
  }
  return v;
}

Dyadic Exp2Bound(const Dyadic& x, Precision p, Rounding r) {
  const mpz_class k_int = x.Floor();
  const std::int64_t k = ToExponent(k_int);
  const Dyadic frac = x - Dyadic(k_int);
  if (frac.is_zero()) return Dyadic::Pow2(k);

  const std::size_t w = WorkingBits(p);
  // y = frac * ln 2 in [0, ln 2), as a fixed-point value; frac >= 0.
  const Dyadic y_scaled = frac * Dyadic(Ln2Fixed(w, r));
  const mpz_class y = r == Rounding::kDown ? y_scaled.Floor() : y_scaled.Ceil();

  // e^y = sum_n y^n / n!
  mpz_class term = One(w);
  mpz_class sum = term;
  for (unsigned long n = 1;; ++n) {
    term = DivRound(term * y, mpz_class(n) * One(w), r);
    sum += term;
    if (r == Rounding::kDown) {
      if (sgn(term) == 0) break;
    } else if (term <= 1) {
      // For y < 1 the remaining terms sum to less than the last one.
      sum += 2 * term;
      break;
    }
  }
  return Dyadic(sum, k - static_cast<std::int64_t>(w)).Round(p, r);
}

}  // namespace

Interval Ln2(Precision precision) {
  const std::size_t w = WorkingBits(precision);
  const auto scale = -static_cast<std::int64_t>(w);
  return Interval(Dyadic(Ln2Fixed(w, Rounding::kDown), scale).Round(precision, Rounding::kDown),
                  Dyadic(Ln2Fixed(w, Rounding::kUp), scale).Round(precision, Rounding::kUp),
                  precision);
}

Interval Exp2(const Interval& x) {
  const Precision p = x.precision();
  return Interval(Exp2Bound(x.lo(), p, Rounding::kDown), Exp2Bound(x.hi(), p, Rounding::kUp), p);
}

Interval Log2(const Interval& x) {
  if (x.lo().sign() <= 0) throw DomainError("log2 of an interval not bounded away from zero");
  const Precision p = x.precision();
  return Interval(Log2Bound(x.lo(), p, Rounding::kDown), Log2Bound(x.hi(), p, Rounding::kUp), p);
}

Interval Ln(const Interval& x) {
  if (x.lo().sign() <= 0) throw DomainError("ln of an interval not bounded away from zero");
  const Precision p = x.precision();
  return Interval(LnBound(x.lo(), p, Rounding::kDown), LnBound(x.hi(), p, Rounding::kUp), p);
}

Interval Power(const Interval& x, const mpq_class& q) {
  const Precision p = x.precision();
  if (sgn(q) == 0) return Interval(Dyadic(1), p);
  if (q.get_den() == 1 && sgn(q) > 0 && q.get_num().fits_ulong_p()) {
    unsigned long e = q.get_num().get_ui();
    Interval result(Dyadic(1), p);
    Interval base = x;
    while (e != 0) {
      if (e & 1UL) result = result * base;
      e >>= 1;
      if (e != 0) base = Square(base);
    }
    return result;
  }
  if (x.lo().sign() <= 0) {
    throw DomainError("non-integer power of an interval not bounded away from zero");
  }
  const Precision inner{p.bits + 64};
  const Interval exponent =
      Interval::FromRational(q, inner) * Log2(x.WithPrecision(inner));
  const Interval v = Exp2(exponent);
  return Interval(v.lo().Round(p, Rounding::kDown), v.hi().Round(p, Rounding::kUp), p);
}

Interval Pow2Frac(std::uint64_t l, const mpq_class& temperature, Precision precision) {
  if (sgn(temperature) <= 0) throw DomainError("temperature must be positive");
  const mpq_class e = -mpq_class(mpz_class(static_cast<unsigned long>(l))) / temperature;
  const Precision inner{precision.bits + 64};
  const Interval v = Exp2(Interval::FromRational(e, inner));
  return Interval(v.lo().Round(precision, Rounding::kDown),
                  v.hi().Round(precision, Rounding::kUp), precision);
}

}  // namespace algothermo
