#pragma once

#include <algorithm>
#include <vector>

namespace algothermo {

template <typename Range>
std::optional<std::pair<BitString, BitString>> FindPrefixViolation(const Range& strings) {
  std::vector<BitString> sorted(std::begin(strings), std::end(strings));
  std::sort(sorted.begin(), sorted.end());
  // If a is a prefix of c and a <= b <= c, then a is also a prefix of b, so
  // checking adjacent entries is enough.
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i - 1].IsPrefixOf(sorted[i])) {
      return std::make_pair(sorted[i - 1], sorted[i]);
    }
  }
  return std::nullopt;
}

}  // namespace algothermo
