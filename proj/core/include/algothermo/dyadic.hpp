#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>

#include <gmpxx.h>

namespace algothermo {

// Directed rounding: kDown is toward -infinity, kUp toward +infinity.
enum class Rounding { kDown, kUp };

inline Rounding Opposite(Rounding r) {
  return r == Rounding::kDown ? Rounding::kUp : Rounding::kDown;
}

// Working precision in bits (significant bits kept by rounding operations).
struct Precision {
  std::size_t bits = 128;

  friend auto operator<=>(const Precision&, const Precision&) = default;
};

// Exact dyadic rational mantissa * 2^exponent, kept canonical: the mantissa is
// odd, or zero with exponent 0.
class Dyadic {
 public:
  Dyadic() = default;
  Dyadic(mpz_class mantissa, std::int64_t exponent);
  Dyadic(long value) : Dyadic(mpz_class(value), 0) {}  // NOLINT(google-explicit-constructor)
  explicit Dyadic(const mpz_class& value) : Dyadic(value, 0) {}

  // 2^k.
  static Dyadic Pow2(std::int64_t k) { return Dyadic(mpz_class(1), k); }

  // Nearest dyadic with at most `precision` significant bits in the given
  // direction; exact when the rational is dyadic and fits.
  static Dyadic FromRational(const mpq_class& q, Precision precision, Rounding rounding);

  // a / b rounded in the given direction. Throws DomainError when b == 0.
  static Dyadic Quotient(const Dyadic& a, const Dyadic& b, Precision precision,
                         Rounding rounding);

  const mpz_class& mantissa() const { return mantissa_; }
  std::int64_t exponent() const { return exponent_; }

  int sign() const { return sgn(mantissa_); }
  bool is_zero() const { return sign() == 0; }
  bool is_integer() const { return exponent_ >= 0; }

  // Number of significant bits of |mantissa|; 0 for zero.
  std::size_t significant_bits() const;

  // floor(log2 |x|) for nonzero x.
  std::int64_t FloorLog2() const;

  // Rounds to `precision` significant bits in the given direction.
  Dyadic Round(Precision precision, Rounding rounding) const;

  // x * 2^k, exact.
  Dyadic Ldexp(std::int64_t k) const { return Dyadic(mantissa_, exponent_ + k); }

  Dyadic Abs() const { return Dyadic(abs(mantissa_), exponent_); }

  mpz_class Floor() const;
  mpz_class Ceil() const;

  mpq_class ToRational() const;
  double ToDouble() const;

  std::string DebugString() const;

  friend Dyadic operator+(const Dyadic& a, const Dyadic& b);
  friend Dyadic operator-(const Dyadic& a, const Dyadic& b);
  friend Dyadic operator*(const Dyadic& a, const Dyadic& b);
  friend Dyadic operator-(const Dyadic& a) { return Dyadic(-a.mantissa_, a.exponent_); }

  Dyadic& operator+=(const Dyadic& other) { return *this = *this + other; }

  friend bool operator==(const Dyadic& a, const Dyadic& b) {
    return a.exponent_ == b.exponent_ && a.mantissa_ == b.mantissa_;
  }
  friend std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b);

  friend int Compare(const Dyadic& a, const mpq_class& q);

 private:
  void Normalize();

  mpz_class mantissa_ = 0;
  std::int64_t exponent_ = 0;
};

// Sign of a - q.
int Compare(const Dyadic& a, const mpq_class& q);

inline const Dyadic& Min(const Dyadic& a, const Dyadic& b) { return b < a ? b : a; }
inline const Dyadic& Max(const Dyadic& a, const Dyadic& b) { return a < b ? b : a; }

}  // namespace algothermo
