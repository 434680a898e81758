#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <gmpxx.h>

#include "algothermo/bits.hpp"
#include "algothermo/run_result.hpp"

namespace algothermo {

using Length = std::uint32_t;

// c_l given explicitly for finitely many lengths.
struct ExplicitSpectrum {
  std::vector<std::pair<Length, mpz_class>> counts;
};

// c_l = floor(2^(beta*l)) for l >= min_length, 0 below. Needs 0 <= beta < 1.
struct GeometricSpectrum {
  mpq_class beta;
  Length min_length = 1;
};

// c_l = floor(2^l / (l+1)^2) for l >= 1.
struct HarmonicSpectrum {};

using SpectrumRule = std::variant<ExplicitSpectrum, GeometricSpectrum, HarmonicSpectrum>;

enum class OutputRule {
  kIndex,     // output = 0-based canonical index in minimal binary
  kExplicit,  // output = explicit list entry, in canonical order
};

// A prefix-free machine defined by its length spectrum. Codewords are
// allocated canonically: lengths in increasing order, and at each length the
// lexicographically smallest strings that extend no earlier codeword. Every
// codeword halts in one step.
class TableMachine {
 public:
  TableMachine(std::string name, SpectrumRule rule, OutputRule output_rule = OutputRule::kIndex,
               std::vector<BitString> explicit_outputs = {},
               std::optional<Length> l_max_hint = std::nullopt);

  const std::string& name() const { return name_; }
  const SpectrumRule& rule() const { return rule_; }
  OutputRule output_rule() const { return output_rule_; }
  const std::vector<BitString>& explicit_outputs() const { return explicit_outputs_; }
  std::optional<Length> l_max_hint() const { return l_max_hint_; }

  // c_l per the rule (no Kraft check).
  mpz_class SpectrumCount(Length l) const;

  // Longest codeword length for finite domains.
  std::optional<Length> MaxLength() const { return max_length_; }
  // Shortest length with c_l > 0 (within kMaxProgramBits).
  std::optional<Length> MinLength() const { return min_length_; }

  // beta with c_l <= 2^(beta*l) for every l, when the rule admits a
  // closed-form geometric majorant. Finite domains have none (and need none).
  std::optional<mpq_class> MajorantExponent() const;

  // Exact sum_{l <= l_max} c_l 2^-l.
  mpq_class KraftPartial(Length l_max) const;

  // First length at which the partial Kraft sum exceeds 1, if any (checked
  // up to kMaxProgramBits).
  std::optional<Length> KraftViolation() const { return violation_; }

  // Canonical codewords of length <= l_max in shortlex order. Throws
  // DomainError when the spectrum violates Kraft up to l_max and
  // ResourceError when more than `limit` codewords would be produced.
  std::vector<Program> AssignCodewords(Length l_max, std::size_t limit = std::size_t{1} << 24) const;

  // Value of the first canonical codeword of length l, read as a binary number.
  const mpz_class& FirstCode(Length l) const;
  // Number of codewords strictly shorter than l.
  const mpz_class& CodewordsBefore(Length l) const;

  // Canonical 0-based index of p, or nullopt if p is not a codeword.
  std::optional<mpz_class> CodewordIndex(const Program& p) const;

  BitString OutputForIndex(const mpz_class& index) const;

  // HALTED in one step iff p is a codeword; MALFORMED otherwise.
  RunResult Run(const Program& p, std::uint64_t fuel) const;

 private:
  Length TableLimit() const { return static_cast<Length>(count_.size()) - 1; }

  std::string name_;
  SpectrumRule rule_;
  OutputRule output_rule_;
  std::vector<BitString> explicit_outputs_;
  std::optional<Length> l_max_hint_;
  std::optional<Length> max_length_;
  std::optional<Length> min_length_;
  std::optional<Length> violation_;
  // Indexed by length 0..limit, valid up to the first Kraft violation.
  std::vector<mpz_class> count_;
  std::vector<mpz_class> first_code_;
  std::vector<mpz_class> before_;
};

}  // namespace algothermo
