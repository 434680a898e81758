#include <gtest/gtest.h>

#include <cmath>

#include "algothermo/channel.hpp"
#include "algothermo/ensemble.hpp"
#include "algothermo/errors.hpp"
#include "algothermo/machine.hpp"
#include "algothermo/machine_io.hpp"
#include "test_util.hpp"

namespace algothermo {
namespace {

using testing_util::Meets;
using testing_util::Q;

constexpr Precision kP{128};

Spectrum Dyadic2Spectrum() { return Spectrum({0, 1, 1}); }

std::vector<mpz_class> Mpz(const std::vector<unsigned long>& c) {
  return std::vector<mpz_class>(c.begin(), c.end());
}

TEST(Spectrum, Validation) {
  EXPECT_THROW(Spectrum({0, 2, 1}), ConfigError);
  EXPECT_THROW(Spectrum({0, -1}), ConfigError);
  EXPECT_THROW(Spectrum({0, 0}).min_length(), ConfigError);
  const Spectrum s = Spectrum::FromPairs({{2, 1}, {1, 1}});
  EXPECT_EQ(s.min_length(), 1u);
  EXPECT_EQ(s.max_length(), 2u);
  const Spectrum h = Spectrum::FromTable(BuiltinMachine("harmonic").table(), 10);
  EXPECT_EQ(h.min_length(), 6u);
  EXPECT_EQ(h.count(7), 2);
}

TEST(Theta, Dyadic2Examples) {
  const EnsembleTable t(Dyadic2Spectrum(), 6, 12);
  EXPECT_EQ(t.Theta(4, 3), 3);
  EXPECT_EQ(t.Theta(3, 3), 1);
  EXPECT_EQ(t.Theta(5, 3), 3);
  EXPECT_EQ(t.Theta(2, 3), 0);
  EXPECT_EQ(t.Theta(7, 3), 0);
  EXPECT_EQ(t.Theta(1, 1), 1);
  EXPECT_EQ(t.Theta(2, 1), 1);
  EXPECT_EQ(t.Theta(4, 3), oracle::BruteTheta({0, 1, 1}, 4, 3));
}

TEST(Theta, BaseCaseAndWindow) {
  const Spectrum s({0, 0, 3, 1, 2});
  for (Length dl : {0u, 1u, 3u}) {
    const EnsembleTable t(s, 3, 12, dl);
    for (Length L = 0; L <= 12; ++L) {
      mpz_class expect = 0;
      for (Length x = L; x <= L + dl; ++x) expect += s.count(x);
      EXPECT_EQ(t.Theta(L, 1), expect);
      mpz_class window = 0;
      for (Length x = L; x <= L + dl; ++x) window += t.ExactTheta(x, 2);
      EXPECT_EQ(t.Theta(L, 2), window);
    }
  }
}

TEST(Theta, RecurrenceAndVanishing) {
  const Spectrum s({0, 1, 1, 0, 2});
  const EnsembleTable t(s, 5, 20);
  for (std::uint32_t n = 1; n <= 5; ++n) {
    for (Length L = 0; L <= 20; ++L) {
      mpz_class sum = 0;
      for (Length l = 0; l <= std::min<Length>(L, 4); ++l) sum += s.count(l) * t.ExactTheta(L - l, n - 1);
      EXPECT_EQ(t.ExactTheta(L, n), sum);
      if (L < n * 1 || L > n * 4) EXPECT_EQ(t.Theta(L, n), 0);
    }
  }
}

TEST(Theta, RandomSpectraMatchCodewordEnumeration) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<unsigned long> c(5, 0);
    mpq_class room = 1;
    for (unsigned l = 1; l <= 4; ++l) {
      const unsigned long cap = mpz_class(room * (1ul << l)).get_ui();
      std::uniform_int_distribution<unsigned long> d(0, std::min<unsigned long>(cap, 3));
      c[l] = d(rng);
      room -= mpq_class(c[l], 1ul << l);
    }
    bool any = false;
    for (unsigned long x : c) any = any || x > 0;
    if (!any) continue;
    const auto codewords = oracle::AllocateCodewords(c);
    const EnsembleTable t(Spectrum(Mpz(c)), 4, 16);
    for (std::uint32_t n = 1; n <= 4; ++n) {
      for (Length L = 0; L <= 16; ++L) {
        EXPECT_EQ(t.Theta(L, n), oracle::BruteThetaCodewords(codewords, L, n));
      }
    }
  }
}

TEST(Theta, Errors) {
  EXPECT_THROW(EnsembleTable(Dyadic2Spectrum(), 5, 4), ConfigError);
  EXPECT_THROW(EnsembleTable(Dyadic2Spectrum(), 1000, 2000, 0, 1000), ResourceError);
  const EnsembleTable t(Dyadic2Spectrum(), 3, 6);
  EXPECT_THROW(t.Theta(7, 3), DomainError);
  EXPECT_THROW(t.Theta(3, 4), DomainError);
}

TEST(Theta, DigestIsDeterministic) {
  const EnsembleTable a(Dyadic2Spectrum(), 10, 20);
  const EnsembleTable b(Dyadic2Spectrum(), 10, 20);
  const EnsembleTable c(Dyadic2Spectrum(), 10, 20, 1);
  EXPECT_EQ(a.Digest(), b.Digest());
  EXPECT_NE(a.Digest(), c.Digest());
  EXPECT_EQ(a.Digest().size(), 16u);
}

TEST(Micro, Dyadic2EntropyAndTemperature) {
  const EnsembleTable t(Dyadic2Spectrum(), 3, 6);
  const MicroState m = MicroEntropyTemperature(t, 4, 3, kP);
  const oracle::Bounds log3 = oracle::Log2(3, 512);
  EXPECT_TRUE(Meets(m.S, log3));
  EXPECT_TRUE(Meets(m.inverse_temperature, {log3.lo / 2, log3.hi / 2}));
  ASSERT_TRUE(m.temperature);
  EXPECT_NEAR(testing_util::Mid(*m.temperature), 1.2618595071429148, 1e-12);
  EXPECT_FALSE(m.infinite_temperature);
}

TEST(Micro, InfiniteTemperatureFlag) {
  const EnsembleTable t(Dyadic2Spectrum(), 2, 6);
  const MicroState m = MicroEntropyTemperature(t, 3, 2, kP);  // theta(2) = theta(4) = 1
  EXPECT_TRUE(m.infinite_temperature);
  EXPECT_FALSE(m.temperature);
  EXPECT_TRUE(m.inverse_temperature.IsPoint());
}

TEST(Micro, BoundaryErrors) {
  const EnsembleTable t(Dyadic2Spectrum(), 3, 6);
  EXPECT_THROW(MicroEntropyTemperature(t, 3, 3, kP), DomainError);
  EXPECT_THROW(MicroEntropyTemperature(t, 6, 3, kP), DomainError);
}

TEST(FirstCodeword, Dyadic2) {
  const EnsembleTable t(Dyadic2Spectrum(), 3, 6);
  const FirstCodewordDistribution d = FirstCodeword(t, 4, 3);
  EXPECT_EQ(d.mass.at(1), Q(2, 3));
  EXPECT_EQ(d.mass.at(2), Q(1, 3));
  EXPECT_EQ(d.mean_length, Q(4, 3));
  const auto brute = oracle::BruteFirstLength({0, 1, 1}, 4, 3);
  EXPECT_EQ(brute.at(1), Q(2, 3));
  EXPECT_EQ(brute.at(2), Q(1, 3));
  EXPECT_THROW(FirstCodeword(t, 4, 1), DomainError);
  EXPECT_THROW(FirstCodeword(t, 2, 3), DomainError);
}

TEST(FirstCodeword, ForcedComposition) {
  const Spectrum s({0, 0, 3, 1, 2});
  const EnsembleTable t(s, 5, 30);
  const FirstCodewordDistribution d = FirstCodeword(t, 10, 5);
  ASSERT_EQ(d.mass.size(), 1u);
  EXPECT_EQ(d.mass.at(2), 1);
}

TEST(FirstCodeword, NormalizationAndEqualConditionalProbability) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<unsigned long> c(5, 0);
    mpq_class room = 1;
    for (unsigned l = 1; l <= 4; ++l) {
      const unsigned long cap = mpz_class(room * (1ul << l)).get_ui();
      std::uniform_int_distribution<unsigned long> dist(0, std::min<unsigned long>(cap, 4));
      c[l] = dist(rng);
      room -= mpq_class(c[l], 1ul << l);
    }
    if (c[1] + c[2] + c[3] + c[4] == 0) continue;
    const EnsembleTable t(Spectrum(Mpz(c)), 5, 20);
    for (std::uint32_t n = 2; n <= 5; ++n) {
      for (Length L = 0; L <= 20; ++L) {
        if (t.Theta(L, n) == 0) continue;
        const FirstCodewordDistribution d = FirstCodeword(t, L, n);
        mpq_class total = 0;
        for (const auto& [l, m] : d.mass) {
          total += m;
          EXPECT_EQ(d.per_codeword.at(l) * c[l], m);
        }
        EXPECT_EQ(total, 1);
        EXPECT_EQ(d.mass.size(), oracle::BruteFirstLength(c, L, n).size());
        for (const auto& [l, m] : oracle::BruteFirstLength(c, L, n)) EXPECT_EQ(d.mass.at(l), m);
      }
    }
  }
}

TEST(Canonical, Dyadic2Masses) {
  const TableMachine& d = BuiltinMachine("dyadic2").table();
  const auto one = CanonicalDistribution(d, 1, 10, kP);
  EXPECT_TRUE(one.at(1).Contains(Q(2, 3)));
  EXPECT_TRUE(one.at(2).Contains(Q(1, 3)));
  const auto half = CanonicalDistribution(d, Q(1, 2), 10, kP);
  EXPECT_TRUE(half.at(1).Contains(Q(4, 5)));
  EXPECT_TRUE(half.at(2).Contains(Q(1, 5)));
}

TEST(Canonical, HarmonicBelowOne) {
  const TableMachine& h = BuiltinMachine("harmonic").table();
  const auto m = CanonicalDistribution(h, Q(1, 2), 12, kP);
  ASSERT_EQ(m.count(6), 1u);
  EXPECT_GT(m.at(6).lo().ToDouble(), 0.5);
  EXPECT_THROW(CanonicalDistribution(h, 1, 12, kP), DomainError);
}

TEST(Canonical, SolveInverseTemperature) {
  const Interval beta = SolveInverseTemperature(Dyadic2Spectrum(), Q(4, 3), kP);
  EXPECT_TRUE(beta.Contains(mpq_class(1)));
  EXPECT_LE(testing_util::Log2Width(beta), -64);
  const Interval hot = SolveInverseTemperature(Dyadic2Spectrum(), Q(3, 2), kP);
  EXPECT_TRUE(hot.Contains(mpq_class(0)));
  EXPECT_THROW(SolveInverseTemperature(Dyadic2Spectrum(), 1, kP), UnsolvableError);
  EXPECT_THROW(SolveInverseTemperature(Dyadic2Spectrum(), 2, kP), UnsolvableError);
}

TEST(Deviation, Dyadic2SmallSystem) {
  const EnsembleTable t(Dyadic2Spectrum(), 3, 6);
  const DeviationReport r = MicroCanonicalDeviation(t, 4, 3, kP);
  EXPECT_TRUE(r.energy_identity);
  EXPECT_TRUE(r.beta_energy.Contains(mpq_class(1)));
  // E(T) = 4/3 at T = 1, where the canonical law is exactly (2/3, 1/3).
  EXPECT_TRUE(r.max_deviation_energy.Contains(mpq_class(0)));
  EXPECT_NEAR(testing_util::Mid(r.max_deviation_micro), 0.0326920705, 1e-9);
  EXPECT_NEAR(testing_util::Mid(r.max_deviation_micro), oracle::TwoLevelMicroDeviation(4, 3), 1e-12);
  ASSERT_TRUE(r.free_energy);
  ASSERT_TRUE(r.S_first);
}

TEST(Deviation, UnsolvableAtMinimumEnergy) {
  const EnsembleTable t(Dyadic2Spectrum(), 4, 10);
  EXPECT_THROW(MicroCanonicalDeviation(t, 4, 4, kP), UnsolvableError);
}

TEST(Deviation, Dyadic2FirstOrderScaling) {
  const EnsembleTable t(Dyadic2Spectrum(), 192, 257);
  std::vector<double> dev;
  for (std::uint32_t n : {48u, 96u, 192u}) {
    const DeviationReport r = MicroCanonicalDeviation(t, 4 * n / 3, n, kP);
    dev.push_back(testing_util::Mid(r.max_deviation_micro));
    EXPECT_NEAR(dev.back(), oracle::TwoLevelMicroDeviation(4 * n / 3, n), 1e-12);
  }
  EXPECT_NEAR(dev[0], 0.00332520644, 1e-10);
  EXPECT_NEAR(dev[1], 0.00169853858, 1e-10);
  EXPECT_NEAR(dev[2], 0.000858556539, 1e-11);
}

TEST(Deviation, ThreeLevelEnergyTemperatureScaling) {
  // c_1 = c_2 = c_3 = 1 at L/N = 5/3: the deviation at the temperature
  // solving E(T) = L/N shrinks like 1/N.
  const EnsembleTable t(Spectrum({0, 1, 1, 1}), 120, 201);
  std::vector<double> dev;
  for (std::uint32_t n : {30u, 60u, 120u}) {
    dev.push_back(testing_util::Mid(MicroCanonicalDeviation(t, 5 * n / 3, n, kP).max_deviation_energy));
  }
  for (int i = 0; i < 2; ++i) {
    EXPECT_GT(dev[i], dev[i + 1]);
    EXPECT_GE(dev[i] / dev[i + 1], 1.3);
    EXPECT_LE(dev[i] / dev[i + 1], 3.0);
  }
}

TEST(Additivity, ResidualPerParticleShrinks) {
  const EnsembleTable t(Dyadic2Spectrum(), 96, 129);
  double prev = INFINITY;
  for (std::uint32_t n : {12u, 24u, 48u, 96u}) {
    const double r = testing_util::Mid(AdditivityResidual(t, 4 * n / 3, n, kP));
    EXPECT_LT(r, prev) << n;
    prev = r;
  }
}

TEST(Interpolation, IntegerAndMidpoint) {
  const EnsembleTable t(Dyadic2Spectrum(), 3, 6);
  EXPECT_TRUE(InterpolatedEntropy(t, 4, 3, kP).Contains(oracle::Log2(3, 256).lo) ||
              Meets(InterpolatedEntropy(t, 4, 3, kP), oracle::Log2(3, 256)));
  // Halfway between theta(4,3) = 3 and theta(5,3) = 3.
  EXPECT_TRUE(Meets(InterpolatedEntropy(t, Q(9, 2), 3, kP), oracle::Log2(3, 256)));
  EXPECT_THROW(InterpolatedEntropy(t, Q(5, 2), 3, kP), DomainError);
}

TEST(DeltaL, EntropyPerParticleInsensitive) {
  const std::uint32_t n = 399;
  const Length L = 532;
  std::vector<double> s;
  for (Length dl : {0u, 1u, 2u}) {
    const EnsembleTable t(Dyadic2Spectrum(), n, L + 1, dl);
    s.push_back(testing_util::Mid(MicroEntropyTemperature(t, L, n, Precision{64}).S) / n);
  }
  EXPECT_LT(std::fabs(s[1] - s[0]) / s[0], 0.01);
  EXPECT_LT(std::fabs(s[2] - s[0]) / s[0], 0.01);
}

double Sigma(double p, std::uint64_t n) { return std::sqrt(p * (1 - p) / static_cast<double>(n)); }

TEST(Channel, Dyadic2FirstLength) {
  const TableMachine& d = BuiltinMachine("dyadic2").table();
  ChannelConfig c;
  c.N = 3;
  c.L = 4;
  c.samples = 200000;
  c.seed = 42;
  const ChannelResult r = SimulateChannel(d, c);
  ASSERT_GT(r.accepted, 1000u);
  const double p1 = static_cast<double>(r.first_length.at(1)) / static_cast<double>(r.accepted);
  EXPECT_LE(std::fabs(p1 - 2.0 / 3.0), 4 * Sigma(2.0 / 3.0, r.accepted));
  const double p10 = static_cast<double>(r.prefix_10) / static_cast<double>(r.samples);
  EXPECT_LE(std::fabs(p10 - 0.25), 3 * Sigma(0.25, r.samples));
  // Kraft sum 3/4: three codewords in a row decode with probability 27/64.
  EXPECT_LE(std::fabs(r.parse_rate() - 27.0 / 64.0), 4 * Sigma(27.0 / 64.0, r.samples));
}

TEST(Channel, WideWindowAcceptsEverything) {
  const TableMachine& d = BuiltinMachine("dyadic2").table();
  ChannelConfig c;
  c.N = 5;
  c.L = 5;
  c.delta_l = 5;
  c.samples = 5000;
  const ChannelResult r = SimulateChannel(d, c);
  EXPECT_EQ(r.acceptance_rate(), 1.0);
  c.L = 100;
  c.delta_l = 0;
  EXPECT_TRUE(SimulateChannel(d, c).zero_acceptance());
}

TEST(Channel, ReproducibleBySeed) {
  const TableMachine& d = BuiltinMachine("dyadic2").table();
  ChannelConfig c;
  c.N = 4;
  c.L = 6;
  c.samples = 70000;
  c.seed = 7;
  const ChannelResult a = SimulateChannel(d, c);
  const ChannelResult b = SimulateChannel(d, c);
  EXPECT_EQ(a.first_length, b.first_length);
  EXPECT_EQ(a.accepted, b.accepted);
  EXPECT_EQ(a.prefix_10, b.prefix_10);
  EXPECT_EQ(a.shards, 2u);
  c.seed = 8;
  EXPECT_NE(SimulateChannel(d, c).first_length, a.first_length);
  std::uint64_t st = 0;
  EXPECT_EQ(SplitMix64(st), 0xe220a8397b1dcdafULL);
}

TEST(Channel, MatchesExactDistributionOnThreeLevels) {
  const Machine m = MachineFromJson(R"({"kind":"table","rule":{"type":"explicit","counts":[[1,1],[2,1],[3,2]]}})");
  const std::uint32_t n = 4;
  const Length L = 8;
  const EnsembleTable t(Spectrum::FromTable(m.table(), 3), n, 12);
  const FirstCodewordDistribution exact = FirstCodeword(t, L, n);
  ChannelConfig c;
  c.N = n;
  c.L = L;
  c.samples = 600000;
  c.seed = 1;
  const ChannelResult r = SimulateChannel(m.table(), c);
  ASSERT_GE(r.accepted, 100000u);
  for (const auto& [l, mass] : exact.mass) {
    const double p = mass.get_d();
    const double emp = static_cast<double>(r.first_length.count(l) ? r.first_length.at(l) : 0) /
                       static_cast<double>(r.accepted);
    EXPECT_LE(std::fabs(emp - p), 4 * Sigma(p, r.accepted)) << "length " << l;
  }
}

TEST(Channel, RejectsInfiniteDomains) {
  ChannelConfig c;
  c.N = 2;
  c.L = 12;
  EXPECT_THROW(SimulateChannel(BuiltinMachine("harmonic").table(), c), ConfigError);
}

}  // namespace
}  // namespace algothermo
