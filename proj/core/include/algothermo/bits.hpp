#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include <gmpxx.h>

namespace algothermo {

// Default bound on program length, in bits.
inline constexpr std::size_t kMaxProgramBits = 4096;

// A finite binary string. Stored as '0'/'1' characters so that the natural
// string order is the lexicographic bit order.
class BitString {
 public:
  BitString() = default;

  // Throws ConfigError on characters other than '0' and '1'.
  static BitString FromString(std::string_view bits);
  // Minimal big-endian binary numeral; 0 -> "0".
  static BitString FromInteger(const mpz_class& value);
  // Fixed-width big-endian encoding of `value` in `width` bits.
  static BitString FromInteger(const mpz_class& value, std::size_t width);

  std::size_t size() const { return bits_.size(); }
  bool empty() const { return bits_.empty(); }
  bool operator[](std::size_t i) const { return bits_[i] == '1'; }

  void push_back(bool bit) { bits_.push_back(bit ? '1' : '0'); }
  void pop_back() { bits_.pop_back(); }
  void append(const BitString& other) { bits_ += other.bits_; }

  BitString prefix(std::size_t n) const { return BitString(bits_.substr(0, n)); }

  // True when *this is a (not necessarily proper) prefix of `other`.
  bool IsPrefixOf(const BitString& other) const;

  // Big-endian unsigned value.
  mpz_class ToInteger() const;

  const std::string& str() const { return bits_; }

  // Hex rendering of "1" followed by the bits, so the length survives the
  // round trip: "" -> "1", "0" -> "2", "10" -> "6".
  std::string ToSentinelHex() const;
  static BitString FromSentinelHex(std::string_view hex);

  friend bool operator==(const BitString&, const BitString&) = default;
  friend std::strong_ordering operator<=>(const BitString& a, const BitString& b) {
    return a.bits_.compare(b.bits_) <=> 0;
  }

 private:
  explicit BitString(std::string bits) : bits_(std::move(bits)) {}

  std::string bits_;
};

using Program = BitString;

// Shortlex order: by length, then lexicographically.
struct ShortlexLess {
  bool operator()(const BitString& a, const BitString& b) const {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  }
};

// Returns the first pair (a, b) found with a a proper prefix of b, if any.
// Runs in O(n log n) via the sorted-neighbour property of prefix relations.
template <typename Range>
std::optional<std::pair<BitString, BitString>> FindPrefixViolation(const Range& strings);

}  // namespace algothermo

#include "algothermo/bits_inl.hpp"
