#include <algorithm>
#include <map>

#include "algothermo/errors.hpp"
#include "algothermo/rational.hpp"
#include "algothermo/thermo.hpp"

namespace algothermo {
namespace {

Interval WeightAt(const Weight& w, Length l, Precision p) {
  const Interval len = Interval::FromInteger(mpz_class(static_cast<unsigned long>(l)), p);
  switch (w.kind) {
    case WeightKind::kOne:
      return Interval(Dyadic(1), p);
    case WeightKind::kLength:
      return len;
    case WeightKind::kLengthSquared:
      return Square(len);
    case WeightKind::kLengthPower:
      if (sgn(w.power) == 0) return Interval(Dyadic(1), p);
      if (l == 0) return Interval(Dyadic(0), p);
      return Power(len, w.power);
  }
  return Interval(Dyadic(1), p);
}

struct ProbeAccumulator {
  const Weight& weight;
  const mpq_class& temperature;
  const ProbeOptions& options;
  ProbeResult result;
  mpz_class n = 0;
  Interval sum, z;

  ProbeAccumulator(const Weight& w, const mpq_class& t, const ProbeOptions& o)
      : weight(w), temperature(t), options(o),
        sum(Dyadic(0), o.precision), z(Dyadic(0), o.precision) {
    result.threshold = o.threshold;
  }

  void Add(Length l, const mpz_class& count) {
    if (sgn(count) == 0) return;
    const Precision p = options.precision;
    const Interval cw = Interval::FromInteger(count, p) * Pow2Frac(l, temperature, p);
    z += cw;
    sum += WeightAt(weight, l, p) * cw;
    n += count;
  }

  // Returns false when the probe should stop.
  bool Emit(Length cutoff) {
    ProbeRow row{cutoff, n, sum, z, std::nullopt};
    if (z.lo().sign() > 0) row.normalized = sum / z;
    const Interval* probed = options.normalized ? (row.normalized ? &*row.normalized : nullptr)
                                                : &row.sum;
    const bool exceeds = options.threshold && !result.first_exceeding && probed != nullptr &&
                         Compare(probed->lo(), *options.threshold) > 0;
    result.rows.push_back(std::move(row));
    if (exceeds) {
      result.first_exceeding = cutoff;
      if (options.stop_at_threshold) return false;
    }
    return true;
  }
};

void CollectOutput(std::map<BitString, std::pair<mpq_class, std::size_t>>& outputs,
                   const BitString& output, std::size_t length) {
  mpq_class w(1);
  mpq_div_2exp(w.get_mpq_t(), w.get_mpq_t(), static_cast<mp_bitcnt_t>(length));
  auto [it, inserted] = outputs.try_emplace(output, w, length);
  if (!inserted) {
    it->second.first += w;
    it->second.second = std::min(it->second.second, length);
  }
}

// -m log2 m, enclosed.
Interval EntropyTerm(const mpq_class& m, Precision p) {
  const Interval x = Interval::FromRational(m, p);
  return -(x * Log2(x));
}

Interval EntropyOf(const std::map<BitString, std::pair<mpq_class, std::size_t>>& outputs,
                   EntropyWeighting weighting, Precision p) {
  Interval s(Dyadic(0), p);
  for (const auto& [out, info] : outputs) {
    if (weighting == EntropyWeighting::kProbability) {
      s += EntropyTerm(info.first, p);
    } else {
      // m = 2^-H: -m log2 m = H 2^-H exactly.
      s += Interval(Dyadic(mpz_class(static_cast<unsigned long>(info.second)),
                           -static_cast<std::int64_t>(info.second)),
                    p);
    }
  }
  return s;
}

bool DistinctOutputs(const TableMachine& m) {
  if (m.output_rule() == OutputRule::kIndex) return true;
  std::vector<BitString> outs = m.explicit_outputs();
  std::sort(outs.begin(), outs.end());
  return std::adjacent_find(outs.begin(), outs.end()) == outs.end();
}

}  // namespace

std::string Weight::Name() const {
  switch (kind) {
    case WeightKind::kOne:
      return "1";
    case WeightKind::kLength:
      return "l";
    case WeightKind::kLengthSquared:
      return "l2";
    case WeightKind::kLengthPower:
      return "l^" + FormatRational(power);
  }
  return "?";
}

Weight ParseWeight(const std::string& text) {
  if (text == "1" || text == "one") return {WeightKind::kOne, 1};
  if (text == "l" || text == "length") return {WeightKind::kLength, 1};
  if (text == "l2" || text == "l^2") return {WeightKind::kLengthSquared, 2};
  if (text.rfind("l^", 0) == 0) {
    const mpq_class q = ParseRational(text.substr(2));
    if (sgn(q) < 0) throw ConfigError("weight exponent must be nonnegative");
    return {WeightKind::kLengthPower, q};
  }
  throw ConfigError("unknown weight '" + text + "' (expected 1, l, l2 or l^Q)");
}

ProbeResult DivergenceProbe(const Machine& machine, const mpq_class& temperature,
                            const Weight& weight, const ProbeOptions& options) {
  if (sgn(temperature) <= 0) throw ConfigError("temperature must be positive");
  if (options.max_cutoff < 1) throw ConfigError("probe cutoff must be at least 1");
  ProbeAccumulator acc(weight, temperature, options);
  if (machine.is_table()) {
    const TableMachine& t = machine.table();
    acc.Add(0, t.SpectrumCount(0));
    for (Length l = 1; l <= options.max_cutoff; ++l) {
      acc.Add(l, t.SpectrumCount(l));
      if (!acc.Emit(l)) break;
      if (t.MaxLength() && l >= *t.MaxLength()) {
        acc.result.saturated = true;
        break;
      }
    }
    return std::move(acc.result);
  }
  Dovetailer d(machine, options.schedule);
  for (Length r = 1; r <= options.max_cutoff; ++r) {
    for (const HaltRecord& rec : d.RunRound()) {
      acc.Add(static_cast<Length>(rec.program.size()), 1);
    }
    if (!acc.Emit(r)) break;
  }
  return std::move(acc.result);
}

std::vector<EntropyPartialRow> ShannonPartial(const Machine& machine, EntropyWeighting weighting,
                                              Length cutoff, Precision precision,
                                              std::uint64_t fuel) {
  if (cutoff < 1) throw ConfigError("cutoff must be at least 1");
  std::vector<EntropyPartialRow> rows;
  if (machine.is_table() && DistinctOutputs(machine.table())) {
    // Every program has its own output, so P(s) = 2^-H(s) = 2^-|p| and the
    // partial sum is sum_l c_l l 2^-l, exactly.
    const TableMachine& t = machine.table();
    mpq_class sum = 0;
    mpz_class outputs = 0;
    for (Length l = 0; l <= cutoff; ++l) {
      const mpz_class c = t.SpectrumCount(l);
      mpq_class term(c * l);
      mpq_div_2exp(term.get_mpq_t(), term.get_mpq_t(), l);
      sum += term;
      outputs += c;
      if (l >= 1) rows.push_back({l, outputs, Interval::FromRational(sum, precision)});
    }
    return rows;
  }
  std::map<BitString, std::pair<mpq_class, std::size_t>> outputs;
  std::vector<Program> programs = machine.CompletePrograms(cutoff, std::size_t{1} << 24);
  std::size_t next = 0;
  for (Length l = 0; l <= cutoff; ++l) {
    for (; next < programs.size() && programs[next].size() == l; ++next) {
      const RunResult r = machine.Run(programs[next], fuel);
      if (r.halted()) CollectOutput(outputs, r.output, l);
    }
    if (l >= 1) {
      rows.push_back({l, mpz_class(static_cast<unsigned long>(outputs.size())),
                      EntropyOf(outputs, weighting, precision)});
    }
  }
  return rows;
}

}  // namespace algothermo
