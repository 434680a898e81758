#pragma once

#include <cstdint>
#include <string>

#include <gmpxx.h>

#include "algothermo/dyadic.hpp"

namespace algothermo {

// Closed interval [lo, hi] of dyadic rationals carrying a working precision.
// Every operation returns an enclosure of the exact image of its operands:
// lower endpoints are rounded toward -infinity and upper endpoints toward
// +infinity. Binary operations run at the larger of the operand precisions.
class Interval {
 public:
  Interval() = default;
  explicit Interval(Dyadic point, Precision precision = {})
      : lo_(point), hi_(point), precision_(precision) {}
  // Throws DomainError when lo > hi.
  Interval(Dyadic lo, Dyadic hi, Precision precision = {});

  // Outward-rounded enclosure of an exact rational.
  static Interval FromRational(const mpq_class& q, Precision precision);
  static Interval FromInteger(const mpz_class& z, Precision precision) {
    return Interval(Dyadic(z), precision);
  }

  const Dyadic& lo() const { return lo_; }
  const Dyadic& hi() const { return hi_; }
  Precision precision() const { return precision_; }
  Interval WithPrecision(Precision p) const { return Interval(lo_, hi_, p); }

  Dyadic Width() const { return hi_ - lo_; }
  bool IsPoint() const { return lo_ == hi_; }

  bool Contains(const Dyadic& x) const { return lo_ <= x && x <= hi_; }
  bool Contains(const mpq_class& q) const {
    return Compare(lo_, q) <= 0 && Compare(hi_, q) >= 0;
  }
  bool Contains(const Interval& other) const {
    return lo_ <= other.lo_ && other.hi_ <= hi_;
  }
  bool ContainsZero() const { return lo_.sign() <= 0 && hi_.sign() >= 0; }
  bool Overlaps(const Interval& other) const {
    return lo_ <= other.hi_ && other.lo_ <= hi_;
  }

  // Interval hull.
  Interval Hull(const Interval& other) const;

  // Midpoint (exact).
  Dyadic Mid() const { return (lo_ + hi_).Ldexp(-1); }

  std::string DebugString() const;

  friend Interval operator+(const Interval& a, const Interval& b);
  friend Interval operator-(const Interval& a, const Interval& b);
  friend Interval operator*(const Interval& a, const Interval& b);
  // Throws DomainError when b contains zero.
  friend Interval operator/(const Interval& a, const Interval& b);
  friend Interval operator-(const Interval& a) { return Interval(-a.hi_, -a.lo_, a.precision_); }

  Interval& operator+=(const Interval& other) { return *this = *this + other; }

  // Exact scaling by 2^k.
  Interval Ldexp(std::int64_t k) const {
    return Interval(lo_.Ldexp(k), hi_.Ldexp(k), precision_);
  }

  friend bool operator==(const Interval&, const Interval&) = default;

 private:
  Dyadic lo_;
  Dyadic hi_;
  Precision precision_;
};

// Enclosure of ln 2 at the given precision.
Interval Ln2(Precision precision);

// 2^x. Exact when x is a point integer.
Interval Exp2(const Interval& x);

// log2(x); requires x.lo() > 0. Exact when x is a point power of two.
Interval Log2(const Interval& x);

// Natural logarithm; requires x.lo() > 0.
Interval Ln(const Interval& x);

// x^q for a rational exponent. q == 0 gives [1, 1]; nonnegative integer q is
// computed by repeated multiplication (x may straddle zero only then);
// otherwise x.lo() > 0 is required and the value is exp2(q * log2 x).
Interval Power(const Interval& x, const mpq_class& q);

// 2^(-l/T) with width at most 2^(-P+2). Throws DomainError when T <= 0.
Interval Pow2Frac(std::uint64_t l, const mpq_class& temperature, Precision precision);

// Square, tighter than x * x when x straddles zero.
Interval Square(const Interval& x);

}  // namespace algothermo
