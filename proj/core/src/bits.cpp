#include "algothermo/bits.hpp"

#include "algothermo/errors.hpp"

namespace algothermo {

const char* ToString(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kConfig: return "config";
    case ErrorKind::kResource: return "resource";
    case ErrorKind::kDomain: return "numeric-domain";
    case ErrorKind::kUnsolvable: return "unsolvable";
  }
  return "unknown";
}

BitString BitString::FromString(std::string_view bits) {
  for (char c : bits) {
    if (c != '0' && c != '1') {
      throw ConfigError("not a bit string: '" + std::string(bits) + "'");
    }
  }
  return BitString(std::string(bits));
}

BitString BitString::FromInteger(const mpz_class& value) {
  if (sgn(value) < 0) throw DomainError("negative value has no binary numeral");
  return BitString(value.get_str(2));
}

BitString BitString::FromInteger(const mpz_class& value, std::size_t width) {
  if (sgn(value) < 0) throw DomainError("negative value has no binary numeral");
  std::string digits = sgn(value) == 0 ? std::string() : value.get_str(2);
  if (digits.size() > width) throw DomainError("value does not fit in requested width");
  return BitString(std::string(width - digits.size(), '0') + digits);
}

bool BitString::IsPrefixOf(const BitString& other) const {
  return bits_.size() <= other.bits_.size() &&
         other.bits_.compare(0, bits_.size(), bits_) == 0;
}

mpz_class BitString::ToInteger() const {
  if (bits_.empty()) return 0;
  return mpz_class(bits_, 2);
}

std::string BitString::ToSentinelHex() const {
  mpz_class v(std::string("1") + bits_, 2);
  return v.get_str(16);
}

BitString BitString::FromSentinelHex(std::string_view hex) {
  if (hex.empty()) throw ConfigError("empty sentinel hex field");
  mpz_class v;
  if (v.set_str(std::string(hex), 16) != 0 || sgn(v) <= 0) {
    throw ConfigError("bad sentinel hex field: '" + std::string(hex) + "'");
  }
  std::string digits = v.get_str(2);
  return BitString(digits.substr(1));
}

}  // namespace algothermo
