#include "algothermo/interval.hpp"

#include <algorithm>
#include <array>

#include "algothermo/errors.hpp"

namespace algothermo {
namespace {

Precision Join(const Interval& a, const Interval& b) {
  return std::max(a.precision(), b.precision());
}

}  // namespace

Interval::Interval(Dyadic lo, Dyadic hi, Precision precision)
    : lo_(std::move(lo)), hi_(std::move(hi)), precision_(precision) {
  if (hi_ < lo_) {
    throw DomainError("interval with lo > hi: [" + lo_.DebugString() + ", " +
                      hi_.DebugString() + "]");
  }
}

Interval Interval::FromRational(const mpq_class& q, Precision precision) {
  return Interval(Dyadic::FromRational(q, precision, Rounding::kDown),
                  Dyadic::FromRational(q, precision, Rounding::kUp), precision);
}

Interval Interval::Hull(const Interval& other) const {
  return Interval(Min(lo_, other.lo_), Max(hi_, other.hi_), std::max(precision_, other.precision_));
}

std::string Interval::DebugString() const {
  return "[" + lo_.DebugString() + ", " + hi_.DebugString() + "]";
}

Interval operator+(const Interval& a, const Interval& b) {
  const Precision p = Join(a, b);
  return Interval((a.lo_ + b.lo_).Round(p, Rounding::kDown),
                  (a.hi_ + b.hi_).Round(p, Rounding::kUp), p);
}

Interval operator-(const Interval& a, const Interval& b) {
  const Precision p = Join(a, b);
  return Interval((a.lo_ - b.hi_).Round(p, Rounding::kDown),
                  (a.hi_ - b.lo_).Round(p, Rounding::kUp), p);
}

Interval operator*(const Interval& a, const Interval& b) {
  const Precision p = Join(a, b);
  // Common case first: both nonnegative.
  if (a.lo_.sign() >= 0 && b.lo_.sign() >= 0) {
    return Interval((a.lo_ * b.lo_).Round(p, Rounding::kDown),
                    (a.hi_ * b.hi_).Round(p, Rounding::kUp), p);
  }
  const std::array<Dyadic, 4> products = {a.lo_ * b.lo_, a.lo_ * b.hi_, a.hi_ * b.lo_,
                                          a.hi_ * b.hi_};
  const auto [mn, mx] = std::minmax_element(products.begin(), products.end());
  return Interval(mn->Round(p, Rounding::kDown), mx->Round(p, Rounding::kUp), p);
}

Interval operator/(const Interval& a, const Interval& b) {
  if (b.ContainsZero()) throw DomainError("division by an interval containing zero");
  const Precision p = Join(a, b);
  const std::array<std::pair<const Dyadic*, const Dyadic*>, 4> pairs = {
      std::pair{&a.lo_, &b.lo_}, std::pair{&a.lo_, &b.hi_}, std::pair{&a.hi_, &b.lo_},
      std::pair{&a.hi_, &b.hi_}};
  Dyadic lo = Dyadic::Quotient(*pairs[0].first, *pairs[0].second, p, Rounding::kDown);
  Dyadic hi = Dyadic::Quotient(*pairs[0].first, *pairs[0].second, p, Rounding::kUp);
  for (std::size_t i = 1; i < pairs.size(); ++i) {
    lo = Min(lo, Dyadic::Quotient(*pairs[i].first, *pairs[i].second, p, Rounding::kDown));
    hi = Max(hi, Dyadic::Quotient(*pairs[i].first, *pairs[i].second, p, Rounding::kUp));
  }
  return Interval(std::move(lo), std::move(hi), p);
}

Interval Square(const Interval& x) {
  const Precision p = x.precision();
  if (x.lo().sign() >= 0) return x * x;
  if (x.hi().sign() <= 0) return (-x) * (-x);
  const Dyadic m = Max(x.lo().Abs(), x.hi());
  return Interval(Dyadic(), (m * m).Round(p, Rounding::kUp), p);
}

}  // namespace algothermo
