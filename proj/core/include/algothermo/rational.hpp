#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace algothermo {

// Parses "3", "-2/7", "0.125", "1.5e-3". Throws ConfigError otherwise.
mpq_class ParseRational(std::string_view text);

// Parses a nonnegative integer count; accepts "1000000" and "1e6".
unsigned long long ParseCount(std::string_view text);

// "a/b" or "a" when the denominator is 1.
std::string FormatRational(const mpq_class& q);

// Temperature grids: either a comma list ("0.25,1/3") or an inclusive
// range "start:stop:step" evaluated in exact rational arithmetic.
std::vector<mpq_class> ParseGrid(std::string_view text);

}  // namespace algothermo
