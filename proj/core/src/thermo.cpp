#include "algothermo/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "algothermo/errors.hpp"

namespace algothermo {
namespace {

Interval Integer(std::uint64_t v, Precision p) {
  return Interval::FromInteger(mpz_class(static_cast<unsigned long>(v)), p);
}

Interval Zero(Precision p) { return Interval(Dyadic(0), p); }

void CheckTemperature(const mpq_class& t) {
  if (sgn(t) <= 0) throw DomainError("temperature must be positive");
}

// l^Q as an interval (0^0 = 1).
Interval LengthPower(Length l, const mpq_class& q, Precision p) {
  if (sgn(q) == 0) return Interval(Dyadic(1), p);
  if (l == 0) return Zero(p);
  return Power(Integer(l, p), q);
}

struct Sums {
  mpz_class n = 0;
  Interval z, w1, w2;
  std::vector<Interval> wq;
};

using Histogram = std::vector<std::pair<Length, mpz_class>>;

Sums SumHistogram(const Histogram& hist, const mpq_class& t, std::span<const mpq_class> moments,
                  Precision p) {
  Sums s;
  s.z = s.w1 = s.w2 = Zero(p);
  s.wq.assign(moments.size(), Zero(p));
  for (const auto& [l, count] : hist) {
    if (sgn(count) == 0) continue;
    const Interval c = Interval::FromInteger(count, p);
    const Interval cw = c * Pow2Frac(l, t, p);
    const Interval len = Integer(l, p);
    s.n += count;
    s.z += cw;
    s.w1 += len * cw;
    s.w2 += Square(len) * cw;
    for (std::size_t i = 0; i < moments.size(); ++i) {
      s.wq[i] += LengthPower(l, moments[i], p) * cw;
    }
  }
  return s;
}

Histogram SpectrumHistogram(const TableMachine& m, Length from, Length to) {
  Histogram h;
  for (Length l = from; l <= to; ++l) {
    mpz_class c = m.SpectrumCount(l);
    if (sgn(c) > 0) h.emplace_back(l, std::move(c));
    if (l == to) break;  // guards against wraparound at the maximum Length
  }
  return h;
}

Histogram RecordHistogram(std::span<const HaltRecord> records) {
  std::map<Length, mpz_class> counts;
  for (const HaltRecord& r : records) counts[static_cast<Length>(r.program.size())] += 1;
  return Histogram(counts.begin(), counts.end());
}

// Spectrum cutoff actually needed: the finite domain ends at MaxLength.
Length EffectiveCutoff(const TableMachine& m, Length cutoff) {
  if (m.MaxLength()) return std::min(cutoff, *m.MaxLength());
  return std::min<Length>(cutoff, kMaxProgramBits);
}

void Derive(ThermoRow& row, const Sums& s) {
  row.n = s.n;
  row.Z = s.z;
  row.W.clear();
  try {
    row.F = FreeEnergy(s.z, row.temperature);
    row.E = Energy(s.w1, s.z);
    row.S = Entropy(row.E, s.z, row.temperature);
    row.C = SpecificHeat(s.w2, s.w1, s.z, row.temperature);
  } catch (const Error& e) {
    row.error = e.what();
  }
}

}  // namespace

SeriesState::SeriesState(std::uint64_t machine_hash, mpq_class temperature, mpq_class moment,
                         Precision precision)
    : machine_hash_(machine_hash),
      temperature_(std::move(temperature)),
      moment_(std::move(moment)),
      precision_(precision),
      z_(Zero(precision)),
      w1_(Zero(precision)),
      w2_(Zero(precision)),
      wq_(Zero(precision)) {
  CheckTemperature(temperature_);
  if (sgn(moment_) < 0) throw ConfigError("moment order Q must be nonnegative");
}

void SeriesState::Accumulate(const HaltRecord& record) {
  if (mpz_class(static_cast<unsigned long>(record.index)) != n_ + 1) {
    throw ConfigError("record index " + std::to_string(record.index) + " does not follow n = " +
                      n_.get_str());
  }
  AccumulateLength(static_cast<Length>(record.program.size()), 1);
}

void SeriesState::AccumulateLength(Length l, const mpz_class& count) {
  if (sgn(count) < 0) throw ConfigError("negative program count");
  if (sgn(count) == 0) return;
  const Precision p = precision_;
  const Interval cw = Interval::FromInteger(count, p) * Pow2Frac(l, temperature_, p);
  const Interval len = Integer(l, p);
  z_ += cw;
  w1_ += len * cw;
  w2_ += Square(len) * cw;
  wq_ += LengthPower(l, moment_, p) * cw;
  n_ += count;
}

SeriesState Accumulate(SeriesState state, const HaltRecord& record) {
  state.Accumulate(record);
  return state;
}

Interval FreeEnergy(const Interval& z, const mpq_class& temperature) {
  CheckTemperature(temperature);
  if (z.lo().sign() <= 0) throw DomainError("free energy needs Z > 0");
  return -(Interval::FromRational(temperature, z.precision()) * Log2(z));
}

Interval Energy(const Interval& w1, const Interval& z) {
  if (z.lo().sign() <= 0) throw DomainError("energy needs Z > 0");
  return w1 / z;
}

Interval Entropy(const Interval& e, const Interval& z, const mpq_class& temperature) {
  CheckTemperature(temperature);
  if (z.lo().sign() <= 0) throw DomainError("entropy needs Z > 0");
  return e / Interval::FromRational(temperature, z.precision()) + Log2(z);
}

Interval SpecificHeat(const Interval& w2, const Interval& w1, const Interval& z,
                      const mpq_class& temperature) {
  CheckTemperature(temperature);
  if (z.lo().sign() <= 0) throw DomainError("specific heat needs Z > 0");
  const Precision p = z.precision();
  const Interval mean = w1 / z;
  const Interval variance = w2 / z - Square(mean);
  return Ln2(p) * variance / Interval::FromRational(temperature * temperature, p);
}

Interval TailBound(const TableMachine& machine, const mpq_class& temperature,
                   const mpq_class& moment, Length l_cut, Precision precision) {
  CheckTemperature(temperature);
  if (sgn(moment) < 0) throw ConfigError("moment order Q must be nonnegative");
  const Precision p = precision;
  if (auto max_len = machine.MaxLength()) {
    Interval sum = Zero(p);
    if (l_cut >= *max_len) return sum;
    for (const auto& [l, c] : SpectrumHistogram(machine, l_cut + 1, *max_len)) {
      sum += Interval::FromInteger(c, p) * LengthPower(l, moment, p) * Pow2Frac(l, temperature, p);
    }
    return sum;
  }
  if (temperature >= 1) {
    throw DomainError("tail diverges: infinite domain at T >= 1");
  }
  const auto beta = machine.MajorantExponent();
  if (!beta) throw DomainError("no closed-form majorant for this spectrum");
  const mpq_class alpha = 1 / temperature - *beta;
  if (sgn(alpha) <= 0) throw DomainError("majorant series diverges (beta >= 1/T)");

  const Precision inner{p.bits + 16};
  const Interval decay = Exp2(Interval::FromRational(-alpha, inner));  // 2^-alpha < 1
  const Interval one(Dyadic(1), inner);
  auto term = [&](Length l) {
    return LengthPower(l, moment, inner) *
           Exp2(Interval::FromRational(-alpha * mpq_class(static_cast<unsigned long>(l)), inner));
  };
  const Length first = l_cut + 1;
  if (sgn(moment) == 0) {
    const Interval bound = term(first) / (one - decay);
    return Interval(Dyadic(0), bound.hi().Round(p, Rounding::kUp), p);
  }
  // Term ratios ((l+1)/l)^Q 2^-alpha decrease in l; sum explicitly until the
  // ratio drops below the midpoint of 2^-alpha and 1, then close geometrically.
  const Interval target = (decay + one).Ldexp(-1);
  constexpr Length kMaxExplicit = 1u << 20;
  Interval sum = Zero(inner);
  for (Length l = first;; ++l) {
    if (l - first > kMaxExplicit) throw ResourceError("tail bound needs too many explicit terms");
    const mpq_class step(mpz_class(static_cast<unsigned long>(l) + 1),
                         mpz_class(static_cast<unsigned long>(l)));
    const Interval ratio = Power(Interval::FromRational(step, inner), moment) * decay;
    if (ratio.hi() <= target.lo()) {
      sum += term(l) / (one - ratio);
      break;
    }
    sum += term(l);
  }
  return Interval(Dyadic(0), sum.hi().Round(p, Rounding::kUp), p);
}

ThermoRow RowFromSpectrum(const TableMachine& machine, const mpq_class& temperature,
                          std::span<const mpq_class> moments, Length cutoff, Precision precision,
                          bool with_tail) {
  CheckTemperature(temperature);
  ThermoRow row;
  row.temperature = temperature;
  const Length eff = EffectiveCutoff(machine, cutoff);
  row.cutoff = cutoff;
  Sums s = SumHistogram(SpectrumHistogram(machine, 0, eff), temperature, moments, precision);
  if (!with_tail) {
    // A finite domain summed to its end is still the full sum.
    row.tail_bounded = machine.MaxLength() && eff >= *machine.MaxLength();
  } else {
    try {
      s.z = s.z + TailBound(machine, temperature, 0, eff, precision);
      s.w1 = s.w1 + TailBound(machine, temperature, 1, eff, precision);
      s.w2 = s.w2 + TailBound(machine, temperature, 2, eff, precision);
      for (std::size_t i = 0; i < moments.size(); ++i) {
        s.wq[i] = s.wq[i] + TailBound(machine, temperature, moments[i], eff, precision);
      }
      row.tail_bounded = true;
    } catch (const DomainError&) {
      row.tail_bounded = false;
      // Partial sums only. Recompute in case some tails were already added.
      s = SumHistogram(SpectrumHistogram(machine, 0, eff), temperature, moments, precision);
    }
  }
  Derive(row, s);
  for (std::size_t i = 0; i < moments.size(); ++i) row.W.emplace_back(moments[i], s.wq[i]);
  return row;
}

ThermoRow RowFromRecords(const Machine& machine, std::span<const HaltRecord> records,
                         const mpq_class& temperature, std::span<const mpq_class> moments,
                         Precision precision) {
  CheckTemperature(temperature);
  (void)machine;
  ThermoRow row;
  row.temperature = temperature;
  const Sums s = SumHistogram(RecordHistogram(records), temperature, moments, precision);
  Derive(row, s);
  for (std::size_t i = 0; i < moments.size(); ++i) row.W.emplace_back(moments[i], s.wq[i]);
  return row;
}

std::vector<ThermoRow> Sweep(const Machine& machine, std::span<const mpq_class> temperatures,
                             std::span<const mpq_class> moments, Precision precision,
                             Length cutoff, Schedule schedule) {
  for (const mpq_class& t : temperatures) {
    if (sgn(t) <= 0) throw ConfigError("temperatures must be positive");
  }
  for (const mpq_class& q : moments) {
    if (sgn(q) < 0) throw ConfigError("moment orders must be nonnegative");
  }
  std::vector<ThermoRow> rows;
  rows.reserve(temperatures.size());
  if (machine.is_table()) {
    for (const mpq_class& t : temperatures) {
      rows.push_back(RowFromSpectrum(machine.table(), t, moments, cutoff, precision));
    }
    return rows;
  }
  const std::vector<HaltRecord> records = Dovetail(machine, std::max<Length>(cutoff, 1), schedule);
  for (const mpq_class& t : temperatures) {
    rows.push_back(RowFromRecords(machine, records, t, moments, precision));
  }
  return rows;
}

namespace {

Interval GibbsFromHistogram(const Histogram& hist, const mpq_class& t, Precision p) {
  Interval z = Zero(p);
  std::vector<Interval> w;
  w.reserve(hist.size());
  for (const auto& [l, c] : hist) {
    w.push_back(Pow2Frac(l, t, p));
    z += Interval::FromInteger(c, p) * w.back();
  }
  if (z.lo().sign() <= 0) throw DomainError("entropy needs Z > 0");
  Interval s = Zero(p);
  for (std::size_t i = 0; i < hist.size(); ++i) {
    const Interval r = w[i] / z;
    s += -(Interval::FromInteger(hist[i].second, p) * r * Log2(r));
  }
  return s;
}

}  // namespace

Interval GibbsEntropyFromSpectrum(const TableMachine& machine, const mpq_class& temperature,
                                  Length cutoff, Precision precision) {
  CheckTemperature(temperature);
  return GibbsFromHistogram(SpectrumHistogram(machine, 0, EffectiveCutoff(machine, cutoff)),
                            temperature, precision);
}

Interval GibbsEntropyFromRecords(std::span<const HaltRecord> records,
                                 const mpq_class& temperature, Precision precision) {
  CheckTemperature(temperature);
  return GibbsFromHistogram(RecordHistogram(records), temperature, precision);
}

ZEnclosure CertifiedPartition(const TableMachine& machine, const mpq_class& temperature,
                              Precision precision) {
  CheckTemperature(temperature);
  const Precision p = precision;
  if (auto max_len = machine.MaxLength()) {
    const Sums s = SumHistogram(SpectrumHistogram(machine, 0, *max_len), temperature, {}, p);
    return {s.z, *max_len};
  }
  if (temperature >= 1) throw DomainError("Z diverges or is not certifiable at T >= 1");
  const auto beta = machine.MajorantExponent();
  if (!beta) throw DomainError("no closed-form majorant for this spectrum");
  const double alpha = mpq_class(1 / temperature - *beta).get_d();
  if (!(alpha > 0)) throw DomainError("majorant series diverges (beta >= 1/T)");
  // Tail <= 2^(-alpha (l+1)) / (1 - 2^-alpha); aim for 2^-(P+2).
  const double slack = -std::log2(-std::expm1(-alpha * std::log(2.0)));
  const double need = (static_cast<double>(p.bits) + 2 + slack) / alpha;
  const Length cutoff =
      need >= kMaxProgramBits ? static_cast<Length>(kMaxProgramBits)
                              : std::max<Length>(1, static_cast<Length>(std::ceil(need)));
  const Sums s = SumHistogram(SpectrumHistogram(machine, 0, cutoff), temperature, {}, p);
  return {s.z + TailBound(machine, temperature, 0, cutoff, p), cutoff};
}

TemperatureSolution SolveTemperature(const TableMachine& machine, const mpq_class& q,
                                     Precision precision) {
  if (sgn(q) <= 0) throw UnsolvableError("target Z must be positive");
  if (q >= 1) throw UnsolvableError("target Z must be below 1 (Z(T) < 1 for T < 1)");
  if (machine.MaxLength()) {
    const mpq_class z1 = machine.KraftPartial(*machine.MaxLength());
    if (q >= z1) {
      throw UnsolvableError("target Z " + q.get_str() + " is not below Z(1) = " + z1.get_str());
    }
  }
  Precision p = precision;
  const Precision max_precision{precision.bits * 4};
  const std::int64_t goal = -static_cast<std::int64_t>(precision.bits / 2);

  auto below = [&](const Interval& z) { return Compare(z.hi(), q) < 0; };
  auto above = [&](const Interval& z) { return Compare(z.lo(), q) > 0; };

  TemperatureSolution sol;
  // Lower bracket: T -> 0 gives Z -> 0.
  Dyadic a(0);
  Interval za = Zero(p);
  // Upper bracket: walk toward 1 until Z(b) certifiably exceeds q.
  Dyadic b;
  Interval zb;
  bool found = false;
  for (std::int64_t k = 1; k <= static_cast<std::int64_t>(precision.bits / 2) + 1; ++k) {
    b = Dyadic(1) - Dyadic::Pow2(-k);
    zb = CertifiedPartition(machine, b.ToRational(), p).Z;
    if (above(zb)) {
      found = true;
      break;
    }
    if (below(zb)) {
      a = b;
      za = zb;
    }
  }
  if (!found) {
    throw UnsolvableError("target Z " + q.get_str() + " is not reached for any certified T < 1");
  }

  while ((b - a).sign() > 0 && (b - a).FloorLog2() >= goal) {
    ++sol.bisection_steps;
    const Dyadic m = (a + b).Ldexp(-1);
    const Interval zm = CertifiedPartition(machine, m.ToRational(), p).Z;
    if (below(zm)) {
      a = m;
      za = zm;
      continue;
    }
    if (above(zm)) {
      b = m;
      zb = zm;
      continue;
    }
    if (zm.IsPoint()) {  // Z(m) == q exactly
      a = b = m;
      za = zb = zm;
      break;
    }
    // q sits inside the enclosure of Z(m): try a tight bracket around m.
    const Dyadic delta = Dyadic::Pow2(goal - 2);
    const Dyadic lo = m - delta;
    const Dyadic hi = m + delta;
    if (lo > a && hi < b) {
      const Interval zlo = CertifiedPartition(machine, lo.ToRational(), p).Z;
      const Interval zhi = CertifiedPartition(machine, hi.ToRational(), p).Z;
      if (below(zlo) && above(zhi)) {
        a = lo;
        za = zlo;
        b = hi;
        zb = zhi;
        break;
      }
    }
    if (p < max_precision) {
      p = Precision{p.bits * 2};
      continue;
    }
    break;  // the bracket [a, b] is still certified, only wider than asked
  }
  if (a.sign() == 0) throw UnsolvableError("target Z is too small to bracket T away from 0");
  sol.T = Interval(a, b, precision);
  sol.Z_at_lo = za;
  sol.Z_at_hi = zb;
  sol.Z = za.Hull(zb);
  return sol;
}

}  // namespace algothermo
