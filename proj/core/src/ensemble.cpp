#include "algothermo/ensemble.hpp"

#include <algorithm>
#include <cstdio>

#include "algothermo/errors.hpp"
#include "algothermo/thermo.hpp"

namespace algothermo {
namespace {

const mpz_class& ZeroCount() {
  static const mpz_class zero = 0;
  return zero;
}

mpq_class Pow2Neg(Length l) {
  mpq_class w(1);
  mpq_div_2exp(w.get_mpq_t(), w.get_mpq_t(), l);
  return w;
}

Interval Log2Count(const mpz_class& c, Precision p) {
  if (sgn(c) <= 0) throw DomainError("log2 of a zero count");
  return Log2(Interval::FromInteger(c, p));
}

// |x| for an interval: the enclosure of {|v| : v in x}.
Interval AbsInterval(const Interval& x) {
  if (x.lo().sign() >= 0) return x;
  if (x.hi().sign() <= 0) return -x;
  return Interval(Dyadic(0), Max(-x.lo(), x.hi()), x.precision());
}

Interval MaxDeviation(const std::map<Length, mpq_class>& micro,
                      const std::map<Length, Interval>& canonical, Precision p) {
  Interval best(Dyadic(0), p);
  for (const auto& [l, c] : canonical) {
    auto it = micro.find(l);
    const mpq_class m = it == micro.end() ? mpq_class(0) : it->second;
    const Interval d = AbsInterval(Interval::FromRational(m, p) - c);
    best = Interval(Max(best.lo(), d.lo()), Max(best.hi(), d.hi()), p);
  }
  for (const auto& [l, m] : micro) {
    if (canonical.count(l) == 0) {
      const Interval d = Interval::FromRational(abs(m), p);
      best = Interval(Max(best.lo(), d.lo()), Max(best.hi(), d.hi()), p);
    }
  }
  return best;
}

}  // namespace

Spectrum::Spectrum(std::vector<mpz_class> counts) : counts_(std::move(counts)) {
  while (!counts_.empty() && sgn(counts_.back()) == 0) counts_.pop_back();
  mpq_class kraft = 0;
  for (Length l = 0; l < counts_.size(); ++l) {
    if (sgn(counts_[l]) < 0) throw ConfigError("negative codeword count");
    kraft += counts_[l] * Pow2Neg(l);
  }
  if (kraft > 1) throw ConfigError("spectrum violates the Kraft inequality");
}

Spectrum Spectrum::FromPairs(const std::vector<std::pair<Length, mpz_class>>& pairs) {
  std::vector<mpz_class> counts;
  for (const auto& [l, c] : pairs) {
    if (l > kMaxProgramBits) throw ConfigError("codeword length beyond the program bound");
    if (counts.size() <= l) counts.resize(l + 1, 0);
    counts[l] += c;
  }
  return Spectrum(std::move(counts));
}

Spectrum Spectrum::FromTable(const TableMachine& machine, Length l_max) {
  const Length top = std::min<Length>(
      l_max, machine.MaxLength().value_or(static_cast<Length>(kMaxProgramBits)));
  std::vector<mpz_class> counts;
  counts.reserve(top + 1);
  for (Length l = 0; l <= top; ++l) counts.push_back(machine.SpectrumCount(l));
  return Spectrum(std::move(counts));
}

const mpz_class& Spectrum::count(Length l) const {
  return l < counts_.size() ? counts_[l] : ZeroCount();
}

Length Spectrum::min_length() const {
  for (Length l = 0; l < counts_.size(); ++l) {
    if (sgn(counts_[l]) > 0) return l;
  }
  throw ConfigError("empty spectrum");
}

Length Spectrum::max_length() const {
  if (counts_.empty()) throw ConfigError("empty spectrum");
  return static_cast<Length>(counts_.size()) - 1;
}

EnsembleTable::EnsembleTable(Spectrum spectrum, std::uint32_t n_max, Length l_max,
                             Length delta_l, std::size_t cell_limit)
    : spectrum_(std::move(spectrum)), n_max_(n_max), l_max_(l_max), delta_l_(delta_l) {
  if (n_max_ < 1) throw ConfigError("N_max must be at least 1");
  const Length l_min = spectrum_.min_length();
  if (static_cast<std::uint64_t>(n_max_) * l_min > l_max_) {
    throw ConfigError("N_max * l_min exceeds L_max");
  }
  const std::uint64_t width = static_cast<std::uint64_t>(l_max_) + delta_l_ + 1;
  if ((static_cast<std::uint64_t>(n_max_) + 1) * width > cell_limit) {
    throw ResourceError("ensemble rectangle of " + std::to_string(n_max_ + 1) + " x " +
                        std::to_string(width) + " cells exceeds the configured limit");
  }
  exact_.assign(n_max_ + 1, std::vector<mpz_class>(width, 0));
  exact_[0][0] = 1;
  const auto& c = spectrum_.counts();
  for (std::uint32_t n = 1; n <= n_max_; ++n) {
    for (std::uint64_t L = 0; L < width; ++L) {
      mpz_class sum = 0;
      const std::uint64_t top = std::min<std::uint64_t>(L, c.size() - 1);
      for (std::uint64_t l = 0; l <= top; ++l) {
        if (sgn(c[l]) == 0) continue;
        const mpz_class& rest = exact_[n - 1][L - l];
        if (sgn(rest) != 0) sum += c[l] * rest;
      }
      exact_[n][L] = std::move(sum);
    }
  }
}

void EnsembleTable::CheckN(std::uint32_t N) const {
  if (N > n_max_) {
    throw DomainError("N = " + std::to_string(N) + " is beyond the table (N_max = " +
                      std::to_string(n_max_) + ")");
  }
}

const mpz_class& EnsembleTable::ExactTheta(std::int64_t L, std::uint32_t N) const {
  CheckN(N);
  if (L < 0 || static_cast<std::uint64_t>(L) >= exact_[N].size()) return ZeroCount();
  return exact_[N][L];
}

mpz_class EnsembleTable::Theta(std::int64_t L, std::uint32_t N) const {
  CheckN(N);
  if (L > static_cast<std::int64_t>(l_max_)) {
    throw DomainError("L = " + std::to_string(L) + " is beyond the table (L_max = " +
                      std::to_string(l_max_) + ")");
  }
  mpz_class sum = 0;
  for (std::int64_t x = L; x <= L + static_cast<std::int64_t>(delta_l_); ++x) {
    sum += ExactTheta(x, N);
  }
  return sum;
}

std::string EnsembleTable::Digest() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](const std::string& s) {
    for (unsigned char ch : s) {
      h ^= ch;
      h *= 0x100000001b3ULL;
    }
  };
  for (std::uint32_t n = 0; n <= n_max_; ++n) {
    for (Length L = 0; L <= l_max_; ++L) {
      mix(Theta(L, n).get_str());
      mix(",");
    }
    mix(";");
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

MicroState MicroEntropyTemperature(const EnsembleTable& table, Length L, std::uint32_t N,
                                   Precision precision) {
  if (L < 1 || L + 1 > table.l_max()) {
    throw DomainError("L must have both neighbours inside the table");
  }
  const mpz_class below = table.Theta(L - 1, N);
  const mpz_class at = table.Theta(L, N);
  const mpz_class above = table.Theta(L + 1, N);
  if (sgn(below) == 0 || sgn(at) == 0 || sgn(above) == 0) {
    throw DomainError("theta vanishes at or next to L = " + std::to_string(L) +
                      ", N = " + std::to_string(N));
  }
  MicroState st;
  st.S = Log2Count(at, precision);
  if (above == below) {
    st.inverse_temperature = Interval(Dyadic(0), precision);
    st.infinite_temperature = true;
    return st;
  }
  // log2(above / below) / 2 from one exact quotient.
  st.inverse_temperature =
      Log2(Interval::FromRational(mpq_class(above, below), precision)).Ldexp(-1);
  if (!st.inverse_temperature.ContainsZero()) {
    st.temperature = Interval(Dyadic(1), precision) / st.inverse_temperature;
  }
  return st;
}

FirstCodewordDistribution FirstCodeword(const EnsembleTable& table, Length L, std::uint32_t N) {
  if (N < 2) throw DomainError("the first-codeword law needs N >= 2");
  const mpz_class total = table.Theta(L, N);
  if (sgn(total) == 0) throw DomainError("theta(L, N) is zero");
  FirstCodewordDistribution d;
  const Spectrum& sp = table.spectrum();
  d.mean_length = 0;
  for (Length l = 0; l <= std::min<Length>(L + table.delta_l(), sp.max_length()); ++l) {
    const mpz_class& c = sp.count(l);
    if (sgn(c) == 0) continue;
    const mpz_class rest = table.Theta(static_cast<std::int64_t>(L) - l, N - 1);
    if (sgn(rest) == 0) continue;
    mpq_class per(rest, total);
    per.canonicalize();
    mpq_class mass = per * c;
    d.mean_length += mass * l;
    d.per_codeword.emplace(l, per);
    d.mass.emplace(l, std::move(mass));
  }
  return d;
}

std::map<Length, Interval> CanonicalMasses(const Spectrum& spectrum, const Interval& beta) {
  const Precision p = beta.precision();
  const Length l0 = spectrum.min_length();
  std::map<Length, Interval> weights;
  Interval z(Dyadic(0), p);
  for (Length l = l0; l <= spectrum.max_length(); ++l) {
    const mpz_class& c = spectrum.count(l);
    if (sgn(c) == 0) continue;
    // Shift by l0 so large beta does not underflow the leading terms.
    const Interval shift = Interval::FromInteger(mpz_class(static_cast<unsigned long>(l - l0)), p);
    const Interval w = Interval::FromInteger(c, p) * Exp2(-(beta * shift));
    z += w;
    weights.emplace(l, w);
  }
  for (auto& [l, w] : weights) w = w / z;
  return weights;
}

Interval CanonicalEnergy(const Spectrum& spectrum, const Interval& beta) {
  const Precision p = beta.precision();
  Interval e(Dyadic(0), p);
  for (const auto& [l, m] : CanonicalMasses(spectrum, beta)) {
    e += Interval::FromInteger(mpz_class(static_cast<unsigned long>(l)), p) * m;
  }
  return e;
}

std::map<Length, Interval> CanonicalDistribution(const TableMachine& machine,
                                                 const mpq_class& temperature, Length l_list,
                                                 Precision precision) {
  const Interval z = CertifiedPartition(machine, temperature, precision).Z;
  std::map<Length, Interval> out;
  const Length top = std::min<Length>(
      l_list, machine.MaxLength().value_or(static_cast<Length>(kMaxProgramBits)));
  for (Length l = 0; l <= top; ++l) {
    const mpz_class c = machine.SpectrumCount(l);
    if (sgn(c) == 0) continue;
    out.emplace(l, Interval::FromInteger(c, precision) * Pow2Frac(l, temperature, precision) / z);
  }
  return out;
}

Interval SolveInverseTemperature(const Spectrum& spectrum, const mpq_class& energy,
                                 Precision precision) {
  const Length lo_len = spectrum.min_length();
  const Length hi_len = spectrum.max_length();
  if (energy <= lo_len || energy >= hi_len) {
    throw UnsolvableError("energy " + energy.get_str() + " is outside the open range (" +
                          std::to_string(lo_len) + ", " + std::to_string(hi_len) + ")");
  }
  const Precision p = precision;
  auto at = [&](const Dyadic& b) { return CanonicalEnergy(spectrum, Interval(b, p)); };
  // E(beta) decreases in beta.
  auto too_cold = [&](const Interval& e) { return Compare(e.hi(), energy) < 0; };
  auto too_hot = [&](const Interval& e) { return Compare(e.lo(), energy) > 0; };

  Dyadic a(-1), b(1);  // want E(a) > energy > E(b)
  for (int k = 0; !too_hot(at(a)); ++k) {
    if (k > 40) throw UnsolvableError("energy too close to the top of the range");
    a = a.Ldexp(1);
  }
  for (int k = 0; !too_cold(at(b)); ++k) {
    if (k > 40) throw UnsolvableError("energy too close to the bottom of the range");
    b = b.Ldexp(1);
  }
  const std::int64_t goal = -static_cast<std::int64_t>(precision.bits / 2);
  while ((b - a).FloorLog2() >= goal) {
    const Dyadic m = (a + b).Ldexp(-1);
    const Interval em = at(m);
    if (too_hot(em)) {
      a = m;
    } else if (too_cold(em)) {
      b = m;
    } else if (em.IsPoint()) {
      return Interval(m, p);
    } else {
      const Dyadic delta = Dyadic::Pow2(goal - 2);
      if (m - delta > a && m + delta < b && too_hot(at(m - delta)) && too_cold(at(m + delta))) {
        return Interval(m - delta, m + delta, p);
      }
      break;  // [a, b] still brackets the root
    }
  }
  return Interval(a, b, p);
}

Interval InterpolatedEntropy(const EnsembleTable& table, const mpq_class& x, std::uint32_t N,
                             Precision precision) {
  if (sgn(x) < 0) throw DomainError("negative total length");
  mpz_class fl;
  mpz_fdiv_q(fl.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  const mpq_class frac = x - fl;
  const Interval s0 = Log2Count(table.Theta(fl.get_si(), N), precision);
  if (sgn(frac) == 0) return s0;
  const Interval s1 = Log2Count(table.Theta(fl.get_si() + 1, N), precision);
  const Interval t = Interval::FromRational(frac, precision);
  return s0 + t * (s1 - s0);
}

DeviationReport MicroCanonicalDeviation(const EnsembleTable& table, Length L, std::uint32_t N,
                                        Precision precision) {
  const Precision p = precision;
  DeviationReport r;
  r.L = L;
  r.N = N;
  r.energy = mpq_class(static_cast<unsigned long>(L), static_cast<unsigned long>(N));
  r.energy.canonicalize();
  r.micro = FirstCodeword(table, L, N);
  r.energy_identity = r.micro.mean_length == r.energy;

  const Spectrum& sp = table.spectrum();
  r.beta_energy = SolveInverseTemperature(sp, r.energy, p);
  if (!r.beta_energy.ContainsZero()) {
    r.temperature_energy = Interval(Dyadic(1), p) / r.beta_energy;
  }
  r.canonical_energy = CanonicalMasses(sp, r.beta_energy);
  r.max_deviation_energy = MaxDeviation(r.micro.mass, r.canonical_energy, p);

  r.state = MicroEntropyTemperature(table, L, N, p);
  r.canonical_micro = CanonicalMasses(sp, r.state.inverse_temperature);
  r.max_deviation_micro = MaxDeviation(r.micro.mass, r.canonical_micro, p);

  try {
    // S(E, 1) uses the single-codeword table row.
    r.S_first = InterpolatedEntropy(table, r.micro.mean_length, 1, p);
    if (r.state.temperature) {
      r.free_energy = Interval::FromRational(r.micro.mean_length, p) - *r.state.temperature * *r.S_first;
    }
  } catch (const DomainError&) {
    // c_l vanishes next to E: S(E, 1) is undefined.
  }
  return r;
}

Interval AdditivityResidual(const EnsembleTable& table, Length L, std::uint32_t N,
                            Precision precision) {
  if (N < 2) throw DomainError("additivity needs N >= 2");
  const FirstCodewordDistribution d = FirstCodeword(table, L, N);
  const Interval whole = Log2Count(table.Theta(L, N), precision);
  const Interval first = InterpolatedEntropy(table, d.mean_length, 1, precision);
  const Interval rest = InterpolatedEntropy(table, mpq_class(static_cast<unsigned long>(L)) -
                                                       d.mean_length, N - 1, precision);
  return AbsInterval(whole - first - rest) /
         Interval::FromInteger(mpz_class(static_cast<unsigned long>(N)), precision);
}

}  // namespace algothermo
