#pragma once

#include <string>
#include <utility>

#include "algothermo/dyadic.hpp"
#include "algothermo/interval.hpp"

namespace algothermo {

// Decimal string for x rounded in the given direction to `significant` digits.
std::string ToDecimal(const Dyadic& x, int significant, Rounding rounding);

// Exact decimal expansion (dyadic rationals always terminate).
std::string ToExactDecimal(const Dyadic& x);

// Renders [lo, hi] as two decimal strings for CSV output. Short exact points
// are printed exactly; otherwise both endpoints are rounded outward to the
// decimal place two digits below the leading digit of the width, so they
// differ and carry two guard digits.
std::pair<std::string, std::string> RenderInterval(const Interval& x);

}  // namespace algothermo
