#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "algothermo/enumerate.hpp"
#include "algothermo/interval.hpp"
#include "algothermo/machine.hpp"

namespace algothermo {

// Running sums over the first n halting programs at temperature T:
//   Z  = sum 2^(-|p|/T)          W1 = sum |p| 2^(-|p|/T)
//   W2 = sum |p|^2 2^(-|p|/T)    WQ = sum |p|^Q 2^(-|p|/T)
class SeriesState {
 public:
  SeriesState(std::uint64_t machine_hash, mpq_class temperature, mpq_class moment,
              Precision precision);

  // Adds one program; throws ConfigError unless record.index == n + 1.
  void Accumulate(const HaltRecord& record);
  // Adds `count` programs of length l at once (spectrum sums).
  void AccumulateLength(Length l, const mpz_class& count);

  std::uint64_t machine_hash() const { return machine_hash_; }
  const mpq_class& temperature() const { return temperature_; }
  const mpq_class& moment() const { return moment_; }
  Precision precision() const { return precision_; }
  const mpz_class& n() const { return n_; }
  const Interval& Z() const { return z_; }
  const Interval& W1() const { return w1_; }
  const Interval& W2() const { return w2_; }
  const Interval& WQ() const { return wq_; }

 private:
  std::uint64_t machine_hash_;
  mpq_class temperature_;
  mpq_class moment_;
  Precision precision_;
  mpz_class n_ = 0;
  Interval z_, w1_, w2_, wq_;
};

// Functional form of SeriesState::Accumulate.
SeriesState Accumulate(SeriesState state, const HaltRecord& record);

// -T log2 Z. Each of these throws DomainError when Z contains 0.
Interval FreeEnergy(const Interval& z, const mpq_class& temperature);
// W1 / Z.
Interval Energy(const Interval& w1, const Interval& z);
// E/T + log2 Z.
Interval Entropy(const Interval& e, const Interval& z, const mpq_class& temperature);
// (ln 2 / T^2) (W2/Z - (W1/Z)^2).
Interval SpecificHeat(const Interval& w2, const Interval& w1, const Interval& z,
                      const mpq_class& temperature);

// Enclosure of sum_{l > l_cut} c_l l^Q 2^(-l/T). Finite domains sum the
// remaining lengths exactly (empty tail -> [0, 0]). Infinite domains need
// T < 1 and a majorant c_l <= 2^(beta l) with beta < 1/T; the bound is
// [0, sum of the majorant series]. Throws DomainError otherwise.
Interval TailBound(const TableMachine& machine, const mpq_class& temperature,
                   const mpq_class& moment, Length l_cut, Precision precision);

struct ThermoRow {
  mpq_class temperature;
  mpz_class n = 0;               // programs summed
  std::optional<Length> cutoff;  // spectrum cutoff, when summed by length
  Interval Z, F, E, S, C;
  std::vector<std::pair<mpq_class, Interval>> W;  // W(Q, T) per requested Q
  bool tail_bounded = false;     // intervals enclose the true limits
  std::optional<std::string> error;
};

// Row from the spectrum of a table machine summed over lengths <= cutoff,
// widened by the tail bound whenever one exists (unless with_tail is false,
// which gives the partial sums alone).
ThermoRow RowFromSpectrum(const TableMachine& machine, const mpq_class& temperature,
                          std::span<const mpq_class> moments, Length cutoff, Precision precision,
                          bool with_tail = true);
// Row from enumerated programs (partial sums only).
ThermoRow RowFromRecords(const Machine& machine, std::span<const HaltRecord> records,
                         const mpq_class& temperature, std::span<const mpq_class> moments,
                         Precision precision);

// One row per temperature. Table machines are summed by spectrum up to
// `cutoff`; step machines are dovetailed for `cutoff` rounds. Numeric errors
// are recorded in the row and do not stop the sweep. Throws ConfigError for
// nonpositive temperatures.
std::vector<ThermoRow> Sweep(const Machine& machine, std::span<const mpq_class> temperatures,
                             std::span<const mpq_class> moments, Precision precision,
                             Length cutoff, Schedule schedule = {});

// -sum r log2 r with r = 2^(-|p|/T) / Z over the same programs as the row.
// Equals S in exact arithmetic; used to cross-check the entropy.
Interval GibbsEntropyFromSpectrum(const TableMachine& machine, const mpq_class& temperature,
                                  Length cutoff, Precision precision);
Interval GibbsEntropyFromRecords(std::span<const HaltRecord> records,
                                 const mpq_class& temperature, Precision precision);

// Z(T) for a table machine with a certified two-sided enclosure, choosing the
// cutoff so the tail adds at most about 2^-precision. Requires T < 1 unless
// the domain is finite.
struct ZEnclosure {
  Interval Z;
  Length cutoff = 0;
};
ZEnclosure CertifiedPartition(const TableMachine& machine, const mpq_class& temperature,
                              Precision precision);

struct TemperatureSolution {
  Interval T;       // contains the unique T with Z(T) = q
  Interval Z;       // hull of Z over T; contains q
  Interval Z_at_lo; // Z(T.lo())
  Interval Z_at_hi; // Z(T.hi())
  int bisection_steps = 0;
};

// Solves Z(T) = q for T in (0, 1) by bisection until the T interval is at
// most 2^(-precision/2) wide. Throws UnsolvableError when q lies outside
// (0, Z(1-)).
TemperatureSolution SolveTemperature(const TableMachine& machine, const mpq_class& q,
                                     Precision precision);

// Divergence probes: partial sums of f(|p|) 2^(-|p|/T), optionally
// normalized by Z (Length weight normalized = the energy E).
enum class WeightKind { kOne, kLength, kLengthSquared, kLengthPower };

struct Weight {
  WeightKind kind = WeightKind::kOne;
  mpq_class power = 1;  // kLengthPower only
  std::string Name() const;
};

// Parses "1", "l", "l2" or "l^Q".
Weight ParseWeight(const std::string& text);

struct ProbeRow {
  Length cutoff = 0;  // program lengths <= cutoff (table) or dovetail round (step)
  mpz_class n = 0;
  Interval sum;       // sum f(|p|) 2^(-|p|/T)
  Interval z;         // sum 2^(-|p|/T)
  std::optional<Interval> normalized;  // sum / z, once z > 0
};

struct ProbeResult {
  std::vector<ProbeRow> rows;
  bool saturated = false;  // the domain is exhausted, the sums are final
  std::optional<mpq_class> threshold;
  std::optional<Length> first_exceeding;  // first cutoff whose lower bound beats the threshold
};

struct ProbeOptions {
  Length max_cutoff = 64;
  bool normalized = false;  // compare sum/z against the threshold instead of sum
  std::optional<mpq_class> threshold;
  bool stop_at_threshold = false;
  Precision precision{128};
  Schedule schedule;
};

ProbeResult DivergenceProbe(const Machine& machine, const mpq_class& temperature,
                            const Weight& weight, const ProbeOptions& options);

// Lower bound on the partial entropy -sum m(s) log2 m(s) over outputs of
// programs of length <= cutoff, with m = P (algorithmic probability) or
// m = 2^-H (shortest program).
enum class EntropyWeighting { kProbability, kShortest };

struct EntropyPartialRow {
  Length cutoff = 0;
  mpz_class outputs = 0;  // distinct outputs seen
  Interval partial;       // enclosure of the partial sum; lo() is the reported bound
};

std::vector<EntropyPartialRow> ShannonPartial(const Machine& machine, EntropyWeighting weighting,
                                              Length cutoff, Precision precision,
                                              std::uint64_t fuel = 1 << 16);

}  // namespace algothermo
