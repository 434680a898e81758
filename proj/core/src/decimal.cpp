#include "algothermo/decimal.hpp"

#include <cmath>
#include <cstdlib>

namespace algothermo {
namespace {

constexpr int kMaxExactFractionDigits = 60;

mpz_class Pow10(unsigned long k) {
  mpz_class out;
  mpz_ui_pow_ui(out.get_mpz_t(), 10, k);
  return out;
}

// Rounded x / 10^q as an integer.
mpz_class ScaleToDecimal(const Dyadic& x, long q, Rounding rounding) {
  mpz_class num = x.mantissa();
  mpz_class den = 1;
  if (x.exponent() >= 0) {
    mpz_mul_2exp(num.get_mpz_t(), num.get_mpz_t(), static_cast<mp_bitcnt_t>(x.exponent()));
  } else {
    mpz_mul_2exp(den.get_mpz_t(), den.get_mpz_t(), static_cast<mp_bitcnt_t>(-x.exponent()));
  }
  if (q >= 0) {
    den *= Pow10(static_cast<unsigned long>(q));
  } else {
    num *= Pow10(static_cast<unsigned long>(-q));
  }
  mpz_class out;
  if (rounding == Rounding::kDown) {
    mpz_fdiv_q(out.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  } else {
    mpz_cdiv_q(out.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  }
  return out;
}

// floor(log10 |x|) for nonzero x.
long DecimalMagnitude(const Dyadic& x) {
  const mpq_class ax = abs(x.ToRational());
  long guess = static_cast<long>(std::floor(static_cast<double>(x.FloorLog2()) * 0.30102999566398120));
  auto pow10q = [](long k) {
    return k >= 0 ? mpq_class(Pow10(static_cast<unsigned long>(k)))
                  : mpq_class(mpz_class(1), Pow10(static_cast<unsigned long>(-k)));
  };
  while (pow10q(guess) > ax) --guess;
  while (pow10q(guess + 1) <= ax) ++guess;
  return guess;
}

// Formats n * 10^q.
std::string Format(const mpz_class& n, long q) {
  std::string sign = sgn(n) < 0 ? "-" : "";
  std::string digits = mpz_class(abs(n)).get_str();
  const long len = static_cast<long>(digits.size());
  const long lead = q + len - 1;  // decimal exponent of the leading digit
  if (sgn(n) != 0 && (lead < -6 || lead > 20)) {
    std::string mant = digits.substr(0, 1);
    if (len > 1) mant += "." + digits.substr(1);
    return sign + mant + "e" + std::to_string(lead);
  }
  if (q >= 0) return sign + digits + std::string(static_cast<std::size_t>(q), '0');
  const long frac = -q;
  if (len <= frac) digits = std::string(static_cast<std::size_t>(frac - len + 1), '0') + digits;
  const std::size_t point = digits.size() - static_cast<std::size_t>(frac);
  return sign + digits.substr(0, point) + "." + digits.substr(point);
}

}  // namespace

std::string ToDecimal(const Dyadic& x, int significant, Rounding rounding) {
  if (x.is_zero()) return "0";
  const long q = DecimalMagnitude(x) - (significant - 1);
  return Format(ScaleToDecimal(x, q, rounding), q);
}

std::string ToExactDecimal(const Dyadic& x) {
  if (x.exponent() >= 0) return x.Floor().get_str();
  const long q = x.exponent();
  // m * 2^e = m * 5^-e * 10^e
  mpz_class five;
  mpz_ui_pow_ui(five.get_mpz_t(), 5, static_cast<unsigned long>(-q));
  std::string s = Format(x.mantissa() * five, q);
  return s;
}

std::pair<std::string, std::string> RenderInterval(const Interval& x) {
  if (x.IsPoint()) {
    if (x.lo().exponent() >= -kMaxExactFractionDigits) {
      const std::string s = ToExactDecimal(x.lo());
      return {s, s};
    }
    const int digits = static_cast<int>(x.precision().bits * 0.30103) + 2;
    return {ToDecimal(x.lo(), digits, Rounding::kDown), ToDecimal(x.hi(), digits, Rounding::kUp)};
  }
  // Fixed decimal place: two digits below the leading digit of the width.
  const long q = DecimalMagnitude(x.Width()) - 2;
  auto place = [q](const Dyadic& v, Rounding r) {
    return v.is_zero() ? std::string("0") : Format(ScaleToDecimal(v, q, r), q);
  };
  return {place(x.lo(), Rounding::kDown), place(x.hi(), Rounding::kUp)};
}

}  // namespace algothermo
