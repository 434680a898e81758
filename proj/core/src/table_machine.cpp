#include "algothermo/table_machine.hpp"

#include <algorithm>
#include <map>

#include "algothermo/errors.hpp"

namespace algothermo {
namespace {

mpz_class Pow2Int(Length l) {
  mpz_class out = 1;
  mpz_mul_2exp(out.get_mpz_t(), out.get_mpz_t(), l);
  return out;
}

// floor(2^(beta*l)) for rational beta = p/q >= 0: the integer q-th root of 2^(p*l).
mpz_class FloorPow2Rational(const mpq_class& beta, Length l) {
  const mpz_class& p = beta.get_num();
  const mpz_class& q = beta.get_den();
  if (!p.fits_ulong_p() || !q.fits_ulong_p()) throw ConfigError("geometric beta too large");
  const unsigned long exp = p.get_ui() * l;
  mpz_class value = 1;
  mpz_mul_2exp(value.get_mpz_t(), value.get_mpz_t(), exp);
  mpz_class root;
  mpz_root(root.get_mpz_t(), value.get_mpz_t(), q.get_ui());
  return root;
}

ExplicitSpectrum Canonicalize(ExplicitSpectrum spectrum) {
  std::map<Length, mpz_class> merged;
  for (auto& [l, c] : spectrum.counts) {
    if (sgn(c) < 0) throw ConfigError("negative codeword count at length " + std::to_string(l));
    if (l > kMaxProgramBits) {
      throw ConfigError("codeword length " + std::to_string(l) + " exceeds the program length bound");
    }
    merged[l] += c;
  }
  ExplicitSpectrum out;
  for (auto& [l, c] : merged) {
    if (sgn(c) > 0) out.counts.emplace_back(l, c);
  }
  return out;
}

}  // namespace

TableMachine::TableMachine(std::string name, SpectrumRule rule, OutputRule output_rule,
                           std::vector<BitString> explicit_outputs,
                           std::optional<Length> l_max_hint)
    : name_(std::move(name)),
      rule_(std::move(rule)),
      output_rule_(output_rule),
      explicit_outputs_(std::move(explicit_outputs)),
      l_max_hint_(l_max_hint) {
  if (auto* e = std::get_if<ExplicitSpectrum>(&rule_)) {
    *e = Canonicalize(std::move(*e));
    max_length_ = e->counts.empty() ? Length{0} : e->counts.back().first;
  } else if (auto* g = std::get_if<GeometricSpectrum>(&rule_)) {
    if (sgn(g->beta) < 0 || g->beta >= 1) throw ConfigError("geometric beta must lie in [0, 1)");
    if (g->min_length < 1) throw ConfigError("geometric min_length must be >= 1");
  }

  const Length limit = max_length_.value_or(static_cast<Length>(kMaxProgramBits));
  count_.reserve(limit + 1);
  first_code_.reserve(limit + 1);
  before_.reserve(limit + 1);
  mpz_class next_first = 0;  // canonical code value at the current length
  mpz_class before = 0;
  for (Length l = 0; l <= limit; ++l) {
    mpz_class c = SpectrumCount(l);
    if (!violation_ && next_first + c > Pow2Int(l)) violation_ = l;
    count_.push_back(c);
    first_code_.push_back(next_first);
    before_.push_back(before);
    if (!min_length_ && sgn(c) > 0) min_length_ = l;
    before += c;
    next_first = (next_first + c) * 2;
  }
  // One past the end so that CodewordsBefore(limit + 1) is defined.
  first_code_.push_back(next_first);
  before_.push_back(before);

  if (output_rule_ == OutputRule::kExplicit) {
    if (!max_length_) throw ConfigError("explicit outputs need a finite spectrum");
    if (mpz_class(static_cast<unsigned long>(explicit_outputs_.size())) != before) {
      throw ConfigError("explicit outputs must list exactly one output per codeword");
    }
  }
}

mpz_class TableMachine::SpectrumCount(Length l) const {
  return std::visit(
      [l](const auto& r) -> mpz_class {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, ExplicitSpectrum>) {
          auto it = std::lower_bound(r.counts.begin(), r.counts.end(), l,
                                     [](const auto& e, Length v) { return e.first < v; });
          return (it != r.counts.end() && it->first == l) ? it->second : mpz_class(0);
        } else if constexpr (std::is_same_v<T, GeometricSpectrum>) {
          if (l < r.min_length) return 0;
          return FloorPow2Rational(r.beta, l);
        } else {
          if (l == 0) return 0;
          const mpz_class d = mpz_class(static_cast<unsigned long>(l) + 1) *
                              mpz_class(static_cast<unsigned long>(l) + 1);
          return Pow2Int(l) / d;
        }
      },
      rule_);
}

std::optional<mpq_class> TableMachine::MajorantExponent() const {
  if (std::holds_alternative<HarmonicSpectrum>(rule_)) return mpq_class(1);
  if (const auto* g = std::get_if<GeometricSpectrum>(&rule_)) return g->beta;
  return std::nullopt;
}

mpq_class TableMachine::KraftPartial(Length l_max) const {
  mpq_class sum = 0;
  for (Length l = 0; l <= l_max; ++l) {
    const mpz_class c = l < count_.size() ? count_[l] : SpectrumCount(l);
    if (sgn(c) == 0) continue;
    mpq_class term(c);
    mpq_div_2exp(term.get_mpq_t(), term.get_mpq_t(), l);
    sum += term;
  }
  return sum;
}

const mpz_class& TableMachine::FirstCode(Length l) const {
  if (l >= first_code_.size()) throw DomainError("length beyond the codeword table");
  return first_code_[l];
}

const mpz_class& TableMachine::CodewordsBefore(Length l) const {
  if (l >= before_.size()) throw DomainError("length beyond the codeword table");
  return before_[l];
}

std::vector<Program> TableMachine::AssignCodewords(Length l_max, std::size_t limit) const {
  if (violation_ && *violation_ <= l_max) {
    throw DomainError("spectrum violates the Kraft inequality at length " +
                      std::to_string(*violation_));
  }
  const Length top = std::min<Length>(l_max, TableLimit());
  const mpz_class total = before_[top + 1];
  if (total > mpz_class(static_cast<unsigned long>(limit))) {
    throw ResourceError("more than " + std::to_string(limit) + " codewords of length <= " +
                        std::to_string(l_max));
  }
  std::vector<Program> out;
  out.reserve(total.get_ui());
  for (Length l = 0; l <= top; ++l) {
    for (mpz_class i = 0; i < count_[l]; ++i) {
      out.push_back(BitString::FromInteger(first_code_[l] + i, l));
    }
  }
  return out;
}

std::optional<mpz_class> TableMachine::CodewordIndex(const Program& p) const {
  const std::size_t l = p.size();
  if (l > TableLimit()) return std::nullopt;
  if (violation_ && *violation_ <= l) return std::nullopt;
  if (sgn(count_[l]) == 0) return std::nullopt;
  const mpz_class v = p.ToInteger();
  if (v < first_code_[l] || v >= first_code_[l] + count_[l]) return std::nullopt;
  return before_[l] + (v - first_code_[l]);
}

BitString TableMachine::OutputForIndex(const mpz_class& index) const {
  if (output_rule_ == OutputRule::kIndex) return BitString::FromInteger(index);
  return explicit_outputs_.at(index.get_ui());
}

RunResult TableMachine::Run(const Program& p, std::uint64_t fuel) const {
  if (fuel == 0) throw ConfigError("fuel must be at least 1");
  const auto index = CodewordIndex(p);
  if (!index) return RunResult::Malformed(fuel);
  return RunResult::Halted(OutputForIndex(*index), 1, fuel);
}

}  // namespace algothermo
