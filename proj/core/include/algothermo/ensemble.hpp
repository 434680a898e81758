#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "algothermo/interval.hpp"
#include "algothermo/table_machine.hpp"

namespace algothermo {

// Codeword counts c_0..c_max of a prefix-free code.
class Spectrum {
 public:
  // Throws ConfigError on negative counts or a Kraft sum above 1.
  explicit Spectrum(std::vector<mpz_class> counts);
  static Spectrum FromPairs(const std::vector<std::pair<Length, mpz_class>>& pairs);
  // The machine's spectrum truncated at l_max (codewords longer than the
  // largest total length never take part in an ensemble).
  static Spectrum FromTable(const TableMachine& machine, Length l_max);

  const mpz_class& count(Length l) const;  // 0 beyond the table
  const std::vector<mpz_class>& counts() const { return counts_; }
  // Shortest and longest lengths with a positive count; throws when empty.
  Length min_length() const;
  Length max_length() const;
  bool empty() const { return counts_.empty(); }

 private:
  std::vector<mpz_class> counts_;
};

// Density of states: theta(L, N) = number of N-tuples of codewords whose
// lengths sum to a value in [L, L + delta_L].
class EnsembleTable {
 public:
  // Exact DP over 0 <= N <= n_max, 0 <= L <= l_max + delta_l. Throws
  // ConfigError unless n_max * l_min <= l_max, ResourceError when the
  // rectangle has more than `cell_limit` cells.
  EnsembleTable(Spectrum spectrum, std::uint32_t n_max, Length l_max, Length delta_l = 0,
                std::size_t cell_limit = std::size_t{1} << 24);

  const Spectrum& spectrum() const { return spectrum_; }
  std::uint32_t n_max() const { return n_max_; }
  Length l_max() const { return l_max_; }
  Length delta_l() const { return delta_l_; }

  // Count of tuples with total exactly L (0 outside the computed rectangle).
  const mpz_class& ExactTheta(std::int64_t L, std::uint32_t N) const;
  // Windowed count sum_{L <= L' <= L + delta_l} ExactTheta(L', N).
  mpz_class Theta(std::int64_t L, std::uint32_t N) const;

  // FNV-1a over the windowed rectangle, as 16 hex digits.
  std::string Digest() const;

 private:
  void CheckN(std::uint32_t N) const;

  Spectrum spectrum_;
  std::uint32_t n_max_;
  Length l_max_;
  Length delta_l_;
  std::vector<std::vector<mpz_class>> exact_;  // [N][L]
};

struct MicroState {
  Interval S;                                 // log2 theta(L, N)
  Interval inverse_temperature;               // [S(L+1) - S(L-1)] / 2
  std::optional<Interval> temperature;        // absent when 1/T is zero or straddles zero
  bool infinite_temperature = false;          // theta(L+1) == theta(L-1) exactly
};

// Throws DomainError when theta(L-1), theta(L) or theta(L+1) vanishes or
// lies outside the table.
MicroState MicroEntropyTemperature(const EnsembleTable& table, Length L, std::uint32_t N,
                                   Precision precision = {});

struct FirstCodewordDistribution {
  std::map<Length, mpq_class> mass;          // P(first codeword has length l)
  std::map<Length, mpq_class> per_codeword;  // R(p) for any p of length l
  mpq_class mean_length;                     // sum_l l * mass(l)
};

// R(p) = theta(L - |p|, N - 1) / theta(L, N). Needs N >= 2 and theta(L, N) > 0.
FirstCodewordDistribution FirstCodeword(const EnsembleTable& table, Length L, std::uint32_t N);

// Per-length canonical masses c_l 2^(-beta l) / sum_k c_k 2^(-beta k).
std::map<Length, Interval> CanonicalMasses(const Spectrum& spectrum, const Interval& beta);

// Canonical masses of a table machine at temperature T, listed for lengths
// <= l_list. Z is certified two-sided (finite domain, or T < 1 with a tail
// bound).
std::map<Length, Interval> CanonicalDistribution(const TableMachine& machine,
                                                 const mpq_class& temperature, Length l_list,
                                                 Precision precision = {});

// Mean length under the canonical weights at inverse temperature beta.
Interval CanonicalEnergy(const Spectrum& spectrum, const Interval& beta);

// Solves CanonicalEnergy(beta) = energy by bisection until the beta interval
// is at most 2^(-precision/2) wide. Throws UnsolvableError unless
// min_length < energy < max_length.
Interval SolveInverseTemperature(const Spectrum& spectrum, const mpq_class& energy,
                                 Precision precision = {});

// log2 theta(x, N) for rational x, interpolated linearly in L between the
// neighbouring integers. Throws DomainError when a needed theta vanishes.
Interval InterpolatedEntropy(const EnsembleTable& table, const mpq_class& x, std::uint32_t N,
                             Precision precision = {});

struct DeviationReport {
  Length L = 0;
  std::uint32_t N = 0;
  mpq_class energy;  // L / N
  FirstCodewordDistribution micro;
  bool energy_identity = false;  // micro.mean_length == L / N

  // Canonical law at the temperature solving E(T) = L/N.
  Interval beta_energy;
  std::optional<Interval> temperature_energy;
  std::map<Length, Interval> canonical_energy;
  Interval max_deviation_energy;

  // Canonical law at the microcanonical temperature T(L, N).
  MicroState state;
  std::map<Length, Interval> canonical_micro;
  Interval max_deviation_micro;

  // F(L, N) = E - T(L, N) S(E, 1), with E = micro.mean_length.
  std::optional<Interval> S_first;
  std::optional<Interval> free_energy;
};

DeviationReport MicroCanonicalDeviation(const EnsembleTable& table, Length L, std::uint32_t N,
                                        Precision precision = {});

// |S(L, N) - S(E, 1) - S(L - E, N - 1)| / N with E = E(L, N).
Interval AdditivityResidual(const EnsembleTable& table, Length L, std::uint32_t N,
                            Precision precision = {});

}  // namespace algothermo
