#include "algothermo/dyadic.hpp"

#include <cmath>
#include <sstream>

#include "algothermo/errors.hpp"

namespace algothermo {
namespace {

// floor or ceil of m / 2^k for k >= 0.
mpz_class ShiftRight(const mpz_class& m, std::size_t k, Rounding rounding) {
  mpz_class out;
  if (rounding == Rounding::kDown) {
    mpz_fdiv_q_2exp(out.get_mpz_t(), m.get_mpz_t(), k);
  } else {
    mpz_cdiv_q_2exp(out.get_mpz_t(), m.get_mpz_t(), k);
  }
  return out;
}

mpz_class DivideRounded(const mpz_class& num, const mpz_class& den, Rounding rounding) {
  mpz_class out;
  if (rounding == Rounding::kDown) {
    mpz_fdiv_q(out.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  } else {
    mpz_cdiv_q(out.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  }
  return out;
}

std::size_t BitLength(const mpz_class& m) {
  return sgn(m) == 0 ? 0 : mpz_sizeinbase(m.get_mpz_t(), 2);
}

// Quotient num/den * 2^shift with at least `bits` significant bits, rounded.
Dyadic RoundedRatio(const mpz_class& num, const mpz_class& den, std::int64_t shift,
                    Precision precision, Rounding rounding) {
  if (sgn(num) == 0) return Dyadic();
  // Exact when the denominator is a power of two.
  mpz_class aden = abs(den);
  if (mpz_popcount(aden.get_mpz_t()) == 1) {
    const auto k = static_cast<std::int64_t>(mpz_scan1(aden.get_mpz_t(), 0));
    mpz_class n = sgn(den) < 0 ? mpz_class(-num) : num;
    return Dyadic(n, shift - k).Round(precision, rounding);
  }
  const std::int64_t extra = static_cast<std::int64_t>(precision.bits) + 2 +
                             static_cast<std::int64_t>(BitLength(den)) -
                             static_cast<std::int64_t>(BitLength(num));
  const std::int64_t k = std::max<std::int64_t>(extra, 0);
  mpz_class scaled = num;
  mpz_mul_2exp(scaled.get_mpz_t(), scaled.get_mpz_t(), static_cast<mp_bitcnt_t>(k));
  mpz_class n = scaled;
  mpz_class d = den;
  if (sgn(d) < 0) {
    n = -n;
    d = -d;
  }
  return Dyadic(DivideRounded(n, d, rounding), shift - k).Round(precision, rounding);
}

}  // namespace

Dyadic::Dyadic(mpz_class mantissa, std::int64_t exponent)
    : mantissa_(std::move(mantissa)), exponent_(exponent) {
  Normalize();
}

void Dyadic::Normalize() {
  if (sgn(mantissa_) == 0) {
    exponent_ = 0;
    return;
  }
  const auto tz = mpz_scan1(mantissa_.get_mpz_t(), 0);
  if (tz > 0) {
    mpz_tdiv_q_2exp(mantissa_.get_mpz_t(), mantissa_.get_mpz_t(), tz);
    exponent_ += static_cast<std::int64_t>(tz);
  }
}

Dyadic Dyadic::FromRational(const mpq_class& q, Precision precision, Rounding rounding) {
  return RoundedRatio(q.get_num(), q.get_den(), 0, precision, rounding);
}

Dyadic Dyadic::Quotient(const Dyadic& a, const Dyadic& b, Precision precision,
                        Rounding rounding) {
  if (b.is_zero()) throw DomainError("division by zero");
  return RoundedRatio(a.mantissa_, b.mantissa_, a.exponent_ - b.exponent_, precision,
                      rounding);
}

std::size_t Dyadic::significant_bits() const { return BitLength(mantissa_); }

std::int64_t Dyadic::FloorLog2() const {
  if (is_zero()) throw DomainError("log2 of zero");
  return exponent_ + static_cast<std::int64_t>(significant_bits()) - 1;
}

Dyadic Dyadic::Round(Precision precision, Rounding rounding) const {
  const std::size_t bits = significant_bits();
  if (bits <= precision.bits) return *this;
  const std::size_t drop = bits - precision.bits;
  return Dyadic(ShiftRight(mantissa_, drop, rounding),
                exponent_ + static_cast<std::int64_t>(drop));
}

mpz_class Dyadic::Floor() const {
  if (exponent_ >= 0) {
    mpz_class out = mantissa_;
    mpz_mul_2exp(out.get_mpz_t(), out.get_mpz_t(), static_cast<mp_bitcnt_t>(exponent_));
    return out;
  }
  return ShiftRight(mantissa_, static_cast<std::size_t>(-exponent_), Rounding::kDown);
}

mpz_class Dyadic::Ceil() const {
  if (exponent_ >= 0) return Floor();
  return ShiftRight(mantissa_, static_cast<std::size_t>(-exponent_), Rounding::kUp);
}

mpq_class Dyadic::ToRational() const {
  mpq_class q(mantissa_);
  if (exponent_ >= 0) {
    mpq_mul_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<mp_bitcnt_t>(exponent_));
  } else {
    mpq_div_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<mp_bitcnt_t>(-exponent_));
  }
  return q;
}

double Dyadic::ToDouble() const {
  if (is_zero()) return 0.0;
  long exp = 0;
  const double d = mpz_get_d_2exp(&exp, mantissa_.get_mpz_t());
  return std::ldexp(d, static_cast<int>(exp + exponent_));
}

std::string Dyadic::DebugString() const {
  std::ostringstream out;
  out << mantissa_.get_str() << "*2^" << exponent_;
  return out.str();
}

Dyadic operator+(const Dyadic& a, const Dyadic& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  const std::int64_t e = std::min(a.exponent_, b.exponent_);
  mpz_class ma = a.mantissa_;
  mpz_class mb = b.mantissa_;
  mpz_mul_2exp(ma.get_mpz_t(), ma.get_mpz_t(), static_cast<mp_bitcnt_t>(a.exponent_ - e));
  mpz_mul_2exp(mb.get_mpz_t(), mb.get_mpz_t(), static_cast<mp_bitcnt_t>(b.exponent_ - e));
  return Dyadic(ma + mb, e);
}

Dyadic operator-(const Dyadic& a, const Dyadic& b) { return a + (-b); }

Dyadic operator*(const Dyadic& a, const Dyadic& b) {
  return Dyadic(a.mantissa_ * b.mantissa_, a.exponent_ + b.exponent_);
}

std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b) {
  const int sa = a.sign();
  const int sb = b.sign();
  if (sa != sb) return sa <=> sb;
  if (sa == 0) return std::strong_ordering::equal;
  const int c = (a - b).sign();
  return c <=> 0;
}

int Compare(const Dyadic& a, const mpq_class& q) { return cmp(a.ToRational(), q); }

}  // namespace algothermo
