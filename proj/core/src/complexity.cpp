#include "algothermo/complexity.hpp"

#include <algorithm>

#include "algothermo/errors.hpp"
#include "algothermo/sdvm.hpp"

namespace algothermo {
namespace {

mpq_class Pow2Neg(std::size_t l) {
  mpq_class w(1);
  mpq_div_2exp(w.get_mpq_t(), w.get_mpq_t(), static_cast<mp_bitcnt_t>(l));
  return w;
}

bool UsesClosedForm(const Machine& m) {
  return m.is_table() && m.table().output_rule() == OutputRule::kIndex;
}

// For index-output table machines the output s names its codeword directly:
// s must be the minimal binary numeral of an index i.
struct IndexedCodeword {
  Program program;
  mpz_class index;
};

std::optional<IndexedCodeword> CodewordForOutput(const TableMachine& t, const BitString& s,
                                                 Length l_max, bool* beyond_domain) {
  *beyond_domain = false;
  if (s.empty() || BitString::FromInteger(s.ToInteger()) != s) {
    *beyond_domain = true;
    return std::nullopt;
  }
  const mpz_class i = s.ToInteger();
  const Length top = std::min<Length>(
      l_max, static_cast<Length>(t.MaxLength().value_or(static_cast<Length>(kMaxProgramBits))));
  for (Length l = 0; l <= top; ++l) {
    const mpz_class c = t.SpectrumCount(l);
    const mpz_class& before = t.CodewordsBefore(l);
    if (i < before + c) {
      return IndexedCodeword{BitString::FromInteger(t.FirstCode(l) + (i - before), l), i};
    }
  }
  if (auto max_len = t.MaxLength(); max_len && i >= t.CodewordsBefore(*max_len + 1)) {
    *beyond_domain = true;
  }
  return std::nullopt;
}

bool FiniteDomainCovered(const Machine& m, Length l_max) {
  return m.is_table() && m.table().MaxLength() && *m.table().MaxLength() <= l_max;
}

}  // namespace

std::size_t Census::ExhaustedBelow(std::size_t length) const {
  std::size_t total = 0;
  for (std::size_t l = 0; l < length && l < exhausted_by_length.size(); ++l) {
    total += exhausted_by_length[l];
  }
  return total;
}

Census RunCensus(const Machine& machine, Length l_max, std::uint64_t fuel, std::size_t budget) {
  if (l_max < 1) throw ConfigError("l_max must be at least 1");
  if (fuel < 1) throw ConfigError("fuel must be at least 1");
  Census c;
  c.l_max = l_max;
  c.fuel = fuel;
  c.exhausted_by_length.assign(l_max + 1, 0);
  c.complete_domain = FiniteDomainCovered(machine, l_max);
  for (const Program& p : machine.CompletePrograms(l_max, budget)) {
    ++c.programs_run;
    RunResult r = machine.Run(p, fuel);
    if (!r.halted()) {
      if (r.status == RunStatus::kExhausted) ++c.exhausted_by_length[p.size()];
      continue;
    }
    ++c.halted;
    const mpq_class w = Pow2Neg(p.size());
    c.found_mass += w;
    auto [it, inserted] = c.outputs.try_emplace(std::move(r.output));
    OutputInfo& info = it->second;
    info.probability += w;
    ++info.programs;
    // Programs arrive in shortlex order, so the first one is the witness.
    if (inserted) {
      info.witness = p;
      info.witness_steps = r.steps;
    }
  }
  return c;
}

ComplexityResult ComplexityFromCensus(const Machine& machine, const Census& census,
                                      const BitString& s) {
  ComplexityResult res;
  res.target = s;
  res.horizon = census.l_max;
  res.fuel = census.fuel;
  const auto it = census.outputs.find(s);
  if (it != census.outputs.end()) {
    res.exact = true;
    res.witness = it->second.witness;
    res.witness_steps = it->second.witness_steps;
    res.value = static_cast<Length>(it->second.witness.size());
    res.fuel_conditional = !machine.is_table() && census.ExhaustedBelow(res.value) > 0;
    return res;
  }
  res.value = census.l_max + 1;
  res.fuel_conditional = !machine.is_table() && census.ExhaustedBelow(census.l_max + 1) > 0;
  res.beyond_domain = census.complete_domain;
  return res;
}

ComplexityResult ProgramSizeComplexity(const Machine& machine, const BitString& s, Length l_max,
                                       std::uint64_t fuel, std::size_t budget) {
  if (l_max < 1) throw ConfigError("l_max must be at least 1");
  if (fuel < 1) throw ConfigError("fuel must be at least 1");
  if (!UsesClosedForm(machine)) {
    return ComplexityFromCensus(machine, RunCensus(machine, l_max, fuel, budget), s);
  }
  ComplexityResult res;
  res.target = s;
  res.horizon = l_max;
  res.fuel = fuel;
  bool beyond = false;
  if (auto cw = CodewordForOutput(machine.table(), s, l_max, &beyond)) {
    res.exact = true;
    res.value = static_cast<Length>(cw->program.size());
    res.witness = std::move(cw->program);
    res.witness_steps = 1;
    return res;
  }
  res.value = l_max + 1;
  res.beyond_domain = beyond;
  return res;
}

ProbabilityResult ProbabilityFromCensus(const Census& census, const BitString& s,
                                        Precision precision) {
  ProbabilityResult res;
  res.target = s;
  if (auto it = census.outputs.find(s); it != census.outputs.end()) {
    res.found = it->second.probability;
    res.programs = it->second.programs;
  }
  // Table machines halt in one step, so within a covered finite domain
  // nothing is missing.
  res.exact = census.complete_domain;
  if (res.exact) {
    res.bounds = Interval::FromRational(res.found, precision);
  } else {
    const mpq_class upper = res.found + (1 - census.found_mass);
    res.bounds = Interval::FromRational(res.found, precision)
                     .Hull(Interval::FromRational(upper, precision));
  }
  return res;
}

ProbabilityResult AlgorithmicProbability(const Machine& machine, const BitString& s,
                                         Length l_max, std::uint64_t fuel, Precision precision,
                                         std::size_t budget) {
  if (l_max < 1) throw ConfigError("l_max must be at least 1");
  if (fuel < 1) throw ConfigError("fuel must be at least 1");
  if (!UsesClosedForm(machine)) {
    return ProbabilityFromCensus(RunCensus(machine, l_max, fuel, budget), s, precision);
  }
  // Distinct outputs: P(s) = 2^-|p| for the unique codeword p, or 0.
  ProbabilityResult res;
  res.target = s;
  res.exact = true;
  bool beyond = false;
  if (auto cw = CodewordForOutput(machine.table(), s, l_max, &beyond)) {
    res.found = Pow2Neg(cw->program.size());
    res.programs = 1;
    res.bounds = Interval::FromRational(res.found, precision);
    return res;
  }
  if (beyond) {
    res.bounds = Interval(Dyadic(0), precision);
    return res;
  }
  // The codeword is longer than l_max: only a lower bound of 0 is known.
  res.exact = false;
  mpq_class mass = machine.table().KraftPartial(l_max);
  res.bounds = Interval::FromRational(0, precision).Hull(Interval::FromRational(1 - mass, precision));
  return res;
}

std::vector<ProfileRow> CompressionProfile(const Machine& machine, const BitString& alpha,
                                           std::span<const std::size_t> n_grid, Length l_max,
                                           std::uint64_t fuel, std::size_t budget) {
  for (std::size_t n : n_grid) {
    if (n < 1 || n > alpha.size()) {
      throw ConfigError("profile length " + std::to_string(n) + " is outside 1.." +
                        std::to_string(alpha.size()));
    }
  }
  std::optional<Census> census;
  if (!UsesClosedForm(machine)) census = RunCensus(machine, l_max, fuel, budget);
  std::vector<ProfileRow> rows;
  for (std::size_t n : n_grid) {
    ProfileRow row;
    row.n = n;
    const BitString prefix = alpha.prefix(n);
    row.complexity = census ? ComplexityFromCensus(machine, *census, prefix)
                            : ProgramSizeComplexity(machine, prefix, l_max, fuel, budget);
    const mpq_class denom(static_cast<unsigned long>(n));
    row.ratio_lo = mpq_class(static_cast<unsigned long>(row.complexity.value)) / denom;
    if (row.complexity.exact) {
      row.ratio_hi = row.ratio_lo;
    } else if (!machine.is_table()) {
      // Literal mode always halts, so its length bounds H from above.
      row.ratio_hi = mpq_class(static_cast<unsigned long>(sdvm::EncodeLiteral(prefix).size())) /
                     denom;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace algothermo
