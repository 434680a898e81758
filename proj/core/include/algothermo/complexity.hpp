#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include <gmpxx.h>

#include "algothermo/bits.hpp"
#include "algothermo/interval.hpp"
#include "algothermo/machine.hpp"

namespace algothermo {

inline constexpr std::size_t kDefaultSearchBudget = std::size_t{1} << 24;

struct OutputInfo {
  mpq_class probability = 0;  // sum of 2^-|p| over programs found with this output
  Program witness;            // shortest program, shortlex-first among ties
  std::uint64_t witness_steps = 0;
  std::size_t programs = 0;
};

// Result of running every complete program of length <= l_max with `fuel`.
struct Census {
  Length l_max = 0;
  std::uint64_t fuel = 0;
  std::size_t programs_run = 0;
  std::size_t halted = 0;
  std::vector<std::size_t> exhausted_by_length;  // index = program length
  mpq_class found_mass = 0;                      // sum 2^-|p| over halting programs
  std::map<BitString, OutputInfo> outputs;

  // Programs shorter than `length` that ran out of fuel.
  std::size_t ExhaustedBelow(std::size_t length) const;
  bool complete_domain = false;  // a finite table domain lies entirely within l_max
};

// Throws ResourceError when more than `budget` programs would run.
Census RunCensus(const Machine& machine, Length l_max, std::uint64_t fuel,
                 std::size_t budget = kDefaultSearchBudget);

struct ComplexityResult {
  BitString target;
  bool exact = false;
  // exact: H(s); otherwise the certified lower bound l_max + 1.
  Length value = 0;
  std::optional<Program> witness;
  std::uint64_t witness_steps = 0;
  Length horizon = 0;
  std::uint64_t fuel = 0;
  // Step machines: some shorter program ran out of fuel, so the verdict
  // holds only for this fuel.
  bool fuel_conditional = false;
  // s is not an output of any program at all (finite table domain).
  bool beyond_domain = false;
};

ComplexityResult ProgramSizeComplexity(const Machine& machine, const BitString& s, Length l_max,
                                       std::uint64_t fuel,
                                       std::size_t budget = kDefaultSearchBudget);
ComplexityResult ComplexityFromCensus(const Machine& machine, const Census& census,
                                      const BitString& s);

struct ProbabilityResult {
  BitString target;
  mpq_class found = 0;  // sum of 2^-|p| over discovered programs with output s
  // [found, found + (1 - mass of all discovered halting programs)], or a point
  // when the value is known exactly.
  Interval bounds;
  bool exact = false;
  std::size_t programs = 0;
};

ProbabilityResult AlgorithmicProbability(const Machine& machine, const BitString& s,
                                         Length l_max, std::uint64_t fuel,
                                         Precision precision = {},
                                         std::size_t budget = kDefaultSearchBudget);
ProbabilityResult ProbabilityFromCensus(const Census& census, const BitString& s,
                                        Precision precision = {});

struct ProfileRow {
  std::size_t n = 0;
  ComplexityResult complexity;
  mpq_class ratio_lo;                 // H(alpha_n)/n lower bound
  std::optional<mpq_class> ratio_hi;  // upper bound when one is known
};

// H(alpha_n)/n for each n in the grid (each n must be <= |alpha|).
std::vector<ProfileRow> CompressionProfile(const Machine& machine, const BitString& alpha,
                                           std::span<const std::size_t> n_grid, Length l_max,
                                           std::uint64_t fuel,
                                           std::size_t budget = kDefaultSearchBudget);

}  // namespace algothermo
