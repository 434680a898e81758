#include "algothermo/rational.hpp"

#include <cctype>
#include <limits>

#include "algothermo/errors.hpp"

namespace algothermo {
namespace {

std::string_view Trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool AllDigits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

mpz_class ParseInteger(std::string_view s, std::string_view whole) {
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!AllDigits(s)) throw ConfigError("not a number: '" + std::string(whole) + "'");
  mpz_class z(std::string(s), 10);
  return negative ? mpz_class(-z) : z;
}

mpq_class Pow10(long k) {
  mpz_class p;
  mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(k < 0 ? -k : k));
  return k >= 0 ? mpq_class(p) : mpq_class(mpz_class(1), p);
}

}  // namespace

mpq_class ParseRational(std::string_view text) {
  const std::string_view s = Trim(text);
  if (s.empty()) throw ConfigError("empty number");
  if (const auto slash = s.find('/'); slash != std::string_view::npos) {
    const mpz_class num = ParseInteger(Trim(s.substr(0, slash)), s);
    const mpz_class den = ParseInteger(Trim(s.substr(slash + 1)), s);
    if (sgn(den) == 0) throw ConfigError("zero denominator in '" + std::string(s) + "'");
    mpq_class q(num, den);
    q.canonicalize();
    return q;
  }
  std::string_view mantissa = s;
  long exp10 = 0;
  if (const auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    mantissa = s.substr(0, e);
    const mpz_class ez = ParseInteger(s.substr(e + 1), s);
    if (!ez.fits_slong_p() || abs(ez) > 10000) throw ConfigError("exponent too large");
    exp10 = ez.get_si();
  }
  bool negative = false;
  if (!mantissa.empty() && (mantissa.front() == '-' || mantissa.front() == '+')) {
    negative = mantissa.front() == '-';
    mantissa.remove_prefix(1);
  }
  std::string digits;
  long frac_digits = 0;
  if (const auto dot = mantissa.find('.'); dot != std::string_view::npos) {
    const std::string_view ip = mantissa.substr(0, dot);
    const std::string_view fp = mantissa.substr(dot + 1);
    if ((!ip.empty() && !AllDigits(ip)) || (!fp.empty() && !AllDigits(fp)) ||
        (ip.empty() && fp.empty())) {
      throw ConfigError("not a number: '" + std::string(s) + "'");
    }
    digits = std::string(ip) + std::string(fp);
    frac_digits = static_cast<long>(fp.size());
  } else {
    if (!AllDigits(mantissa)) throw ConfigError("not a number: '" + std::string(s) + "'");
    digits = std::string(mantissa);
  }
  mpq_class q(mpz_class(digits, 10));
  q *= Pow10(exp10 - frac_digits);
  q.canonicalize();
  return negative ? mpq_class(-q) : q;
}

unsigned long long ParseCount(std::string_view text) {
  const mpq_class q = ParseRational(text);
  if (q.get_den() != 1 || sgn(q) < 0 ||
      q.get_num() > mpz_class(std::to_string(std::numeric_limits<unsigned long long>::max()))) {
    throw ConfigError("not a nonnegative integer count: '" + std::string(text) + "'");
  }
  return std::stoull(q.get_num().get_str());
}

std::string FormatRational(const mpq_class& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::vector<mpq_class> ParseGrid(std::string_view text) {
  const std::string_view s = Trim(text);
  std::vector<mpq_class> out;
  if (s.find(':') != std::string_view::npos) {
    const auto c1 = s.find(':');
    const auto c2 = s.find(':', c1 + 1);
    if (c2 == std::string_view::npos) {
      throw ConfigError("range grid must be start:stop:step, got '" + std::string(s) + "'");
    }
    const mpq_class start = ParseRational(s.substr(0, c1));
    const mpq_class stop = ParseRational(s.substr(c1 + 1, c2 - c1 - 1));
    const mpq_class step = ParseRational(s.substr(c2 + 1));
    if (sgn(step) <= 0) throw ConfigError("grid step must be positive");
    for (mpq_class t = start; t <= stop; t += step) {
      out.push_back(t);
      if (out.size() > 1000000) throw ResourceError("grid has more than 10^6 points");
    }
    return out;
  }
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const auto comma = s.find(',', pos);
    const auto end = comma == std::string_view::npos ? s.size() : comma;
    out.push_back(ParseRational(s.substr(pos, end - pos)));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

}  // namespace algothermo
