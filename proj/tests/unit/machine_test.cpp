#include <gtest/gtest.h>

#include <set>

#include "algothermo/errors.hpp"
#include "algothermo/machine.hpp"
#include "algothermo/machine_io.hpp"
#include "algothermo/sdvm.hpp"
#include "test_util.hpp"

namespace algothermo {
namespace {

BitString B(const char* s) { return BitString::FromString(s); }

std::vector<std::string> Strings(const std::vector<Program>& ps) {
  std::vector<std::string> out;
  for (const Program& p : ps) out.push_back(p.str());
  return out;
}

std::vector<unsigned long> Counts(const TableMachine& t, Length l_max) {
  std::vector<unsigned long> c;
  for (Length l = 0; l <= l_max; ++l) c.push_back(t.SpectrumCount(l).get_ui());
  return c;
}

TEST(BitString, SentinelHexRoundTrip) {
  EXPECT_EQ(BitString().ToSentinelHex(), "1");
  EXPECT_EQ(B("0").ToSentinelHex(), "2");
  EXPECT_EQ(B("10").ToSentinelHex(), "6");
  for (const char* s : {"", "0", "1", "0001", "1111111", "010101010101"}) {
    EXPECT_EQ(BitString::FromSentinelHex(B(s).ToSentinelHex()), B(s));
  }
  EXPECT_THROW(BitString::FromString("012"), ConfigError);
}

TEST(BitString, PrefixViolationFinder) {
  const std::vector<BitString> ok = {B("0"), B("10"), B("110")};
  EXPECT_FALSE(FindPrefixViolation(ok));
  const std::vector<BitString> bad = {B("10"), B("0"), B("01")};
  const auto v = FindPrefixViolation(bad);
  ASSERT_TRUE(v);
  EXPECT_EQ(v->first, B("0"));
  EXPECT_EQ(v->second, B("01"));
}

TEST(Dyadic2, RunsCodewords) {
  const Machine m = BuiltinMachine("dyadic2");
  const RunResult a = m.Run(B("0"), 10);
  EXPECT_EQ(a.status, RunStatus::kHalted);
  EXPECT_EQ(a.output, B("0"));
  EXPECT_EQ(a.steps, 1u);
  const RunResult b = m.Run(B("10"), 10);
  EXPECT_EQ(b.status, RunStatus::kHalted);
  EXPECT_EQ(b.output, B("1"));
  EXPECT_EQ(m.Run(B("11"), 10).status, RunStatus::kMalformed);
  EXPECT_EQ(m.Run(B(""), 10).status, RunStatus::kMalformed);
  EXPECT_EQ(m.Run(B("1"), 10).status, RunStatus::kMalformed);
  EXPECT_EQ(m.table().SpectrumCount(2), 1);
  EXPECT_EQ(Strings(m.table().AssignCodewords(2)), (std::vector<std::string>{"0", "10"}));
}

TEST(Harmonic, SpectrumCounts) {
  const TableMachine& h = BuiltinMachine("harmonic").table();
  EXPECT_EQ(h.SpectrumCount(6), 1);
  EXPECT_EQ(h.SpectrumCount(3), 0);
  EXPECT_EQ(h.SpectrumCount(0), 0);
  for (Length l = 1; l <= 200; ++l) {
    EXPECT_EQ(h.SpectrumCount(l), oracle::HarmonicCount(l));
  }
  EXPECT_LE(h.KraftPartial(400), mpq_class(65, 100));
  EXPECT_FALSE(h.MaxLength());
  EXPECT_EQ(h.MinLength(), Length{6});
  EXPECT_EQ(*h.MajorantExponent(), 1);
}

TEST(Harmonic, AssignCodewordsToSeven) {
  const TableMachine& h = BuiltinMachine("harmonic").table();
  const auto got = Strings(h.AssignCodewords(7));
  EXPECT_EQ(got, (std::vector<std::string>{"000000", "0000010", "0000011"}));
  EXPECT_EQ(got, oracle::AllocateCodewords(Counts(h, 7)));
}

TEST(Geometric, SpectrumAndKraft) {
  const TableMachine& g = BuiltinMachine("geometric").table();
  for (Length l = 0; l <= 80; ++l) {
    EXPECT_EQ(g.SpectrumCount(l), oracle::GeometricCount(mpq_class(1, 2), 4, l)) << l;
  }
  EXPECT_LE(g.KraftPartial(300), 1);
  EXPECT_FALSE(g.KraftViolation());
  EXPECT_EQ(*g.MajorantExponent(), mpq_class(1, 2));
  EXPECT_EQ(Strings(g.AssignCodewords(10)), oracle::AllocateCodewords(Counts(g, 10)));
}

TEST(Explicit, FullLevel) {
  const TableMachine t("full", ExplicitSpectrum{{{2, 4}}});
  EXPECT_EQ(Strings(t.AssignCodewords(2)), (std::vector<std::string>{"00", "01", "10", "11"}));
}

TEST(Explicit, KraftViolationIsRejected) {
  const TableMachine t("bad", ExplicitSpectrum{{{1, 2}, {2, 1}}});
  EXPECT_EQ(t.KraftViolation(), Length{2});
  EXPECT_THROW(t.AssignCodewords(2), DomainError);
  EXPECT_NO_THROW(t.AssignCodewords(1));
  EXPECT_THROW(MachineFromJson(R"({"kind":"table","rule":{"type":"explicit","counts":[[1,2],[2,1]]}})"),
               ConfigError);
}

// Random Kraft-valid spectra: canonical allocation equals the brute-force
// scan, the result is prefix-free and runs halt exactly on codewords.
TEST(Explicit, RandomSpectraMatchBruteForceAllocation) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 300; ++trial) {
    std::uniform_int_distribution<int> len_dist(1, 9);
    const Length top = len_dist(rng);
    std::vector<std::pair<Length, mpz_class>> counts;
    mpq_class room = 1;
    for (Length l = 0; l <= top; ++l) {
      mpq_class unit(1, 1ul << l);
      mpz_class cap = mpz_class(room / unit);
      if (cap == 0) continue;
      std::uniform_int_distribution<unsigned long> c_dist(0, std::min<unsigned long>(cap.get_ui(), 6));
      const unsigned long c = l == 0 ? 0 : c_dist(rng);
      if (c == 0) continue;
      counts.emplace_back(l, c);
      room -= unit * c;
    }
    if (counts.empty()) continue;
    const TableMachine t("rand", ExplicitSpectrum{counts});
    const auto codes = t.AssignCodewords(top);
    EXPECT_EQ(Strings(codes), oracle::AllocateCodewords(Counts(t, top)));
    EXPECT_FALSE(FindPrefixViolation(codes));
    std::set<std::string> domain;
    for (const Program& p : codes) {
      domain.insert(p.str());
      EXPECT_LE(t.SpectrumCount(p.size()), mpz_class(1) << p.size());
    }
    mpz_class index = 0;
    for (const Program& p : codes) {
      EXPECT_EQ(t.CodewordIndex(p), index);
      const RunResult r = t.Run(p, 1);
      EXPECT_TRUE(r.halted());
      EXPECT_EQ(r.output, BitString::FromInteger(index));
      ++index;
    }
    for (unsigned len = 0; len <= top; ++len) {
      for (unsigned long v = 0; v < (1ul << len); ++v) {
        const BitString s = BitString::FromInteger(v, len);
        EXPECT_EQ(t.Run(s, 3).halted(), domain.count(s.str()) == 1);
      }
    }
  }
}

TEST(Explicit, ExplicitOutputs) {
  const Machine m = MachineFromJson(
      R"({"kind":"table","rule":{"type":"explicit","counts":[[2,2]]},"output_rule":"explicit","outputs":["1","1"]})");
  EXPECT_EQ(m.Run(B("00"), 1).output, B("1"));
  EXPECT_EQ(m.Run(B("01"), 1).output, B("1"));
}

TEST(MachineIo, BuiltinsRoundTripThroughJson) {
  for (const std::string& name : BuiltinMachineNames()) {
    const Machine m = BuiltinMachine(name);
    const Machine back = MachineFromJson(MachineToJson(m));
    EXPECT_EQ(back.IdentityHash(), m.IdentityHash()) << name;
    EXPECT_EQ(MachineToJson(back), MachineToJson(m));
    EXPECT_EQ(LoadMachine(name).IdentityHash(), m.IdentityHash());
  }
  EXPECT_NE(BuiltinMachine("dyadic2").IdentityHash(), BuiltinMachine("harmonic").IdentityHash());
  EXPECT_EQ(BuiltinMachine("dyadic2").IdentityHex().size(), 16u);
}

TEST(MachineIo, RejectsBadSpecs) {
  EXPECT_THROW(MachineFromJson("{"), ConfigError);
  EXPECT_THROW(MachineFromJson(R"({"kind":"quantum"})"), ConfigError);
  EXPECT_THROW(MachineFromJson(R"({"kind":"table","rule":{"type":"geometric","beta":"1","min_length":4}})"),
               ConfigError);
  EXPECT_THROW(MachineFromJson(R"({"kind":"table","rule":{"type":"geometric","beta":"1/2","min_length":1}})"),
               ConfigError);
  EXPECT_THROW(LoadMachine("/nonexistent/spec.json"), ConfigError);
}

TEST(Sdvm, ShortestHaltingProgram) {
  const Machine m = BuiltinMachine("sdvm");
  std::optional<Program> first;
  for (const Program& p : m.CompletePrograms(20, 1 << 22)) {
    if (m.Run(p, 1 << 10).halted()) {
      first = p;
      break;
    }
  }
  ASSERT_TRUE(first);
  EXPECT_EQ(first->str(), "001");
  // Same answer from the reference interpreter.
  for (const std::string& s : oracle::RefCompletePrograms(12)) {
    if (oracle::RefRun(s, 1 << 10).status == 'H') {
      EXPECT_EQ(s, first->str());
      break;
    }
  }
}

TEST(Sdvm, LiteralRepeatAndRun) {
  const BitString lit = sdvm::EncodeLiteral(B("1011"));
  const RunResult a = sdvm::Run(lit, 100);
  ASSERT_TRUE(a.halted());
  EXPECT_EQ(a.output, B("1011"));
  EXPECT_EQ(a.steps, 5u);
  const RunResult rep = sdvm::Run(sdvm::EncodeRepeat(7, B("01")), 100);
  ASSERT_TRUE(rep.halted());
  EXPECT_EQ(rep.output, B("0101010"));
  using sdvm::Instruction;
  using sdvm::Op;
  // R0 += 3; loop: if R0 == 0 halt else R0 -= 1, out 1.
  const std::vector<Instruction> code = {
      {Op::kInc, 0, 0}, {Op::kInc, 0, 0}, {Op::kInc, 0, 0},
      {Op::kJzDec, 0, 6}, {Op::kOut, 1, 0}, {Op::kJmp, 0, 3},
  };
  const BitString prog = sdvm::EncodeRun(code);
  const RunResult r = sdvm::Run(prog, 1000);
  ASSERT_TRUE(r.halted());
  EXPECT_EQ(r.output, B("111"));
  const oracle::RefResult ref = oracle::RefRun(prog.str(), 1000);
  EXPECT_EQ(ref.status, 'H');
  EXPECT_EQ(ref.output, "111");
  EXPECT_EQ(ref.steps, r.steps);
  const BitString spin = sdvm::EncodeRun({{Op::kJmp, 0, 0}});
  EXPECT_EQ(sdvm::Run(spin, 1000).status, RunStatus::kExhausted);
  EXPECT_EQ(sdvm::Run(B("11"), 10).status, RunStatus::kMalformed);
  EXPECT_EQ(sdvm::Run(B("0010"), 10).status, RunStatus::kMalformed);  // trailing bit
}

TEST(Sdvm, GammaCode) {
  EXPECT_EQ(sdvm::EncodeGamma(1), B("1"));
  EXPECT_EQ(sdvm::EncodeGamma(2), B("010"));
  EXPECT_EQ(sdvm::EncodeGamma(5), B("00101"));
}

// Every bit string of length <= 14, at several fuels, against the
// independent reference interpreter.
TEST(Sdvm, AgreesWithReferenceInterpreterExhaustively) {
  for (unsigned len = 0; len <= 14; ++len) {
    for (unsigned long v = 0; v < (1ul << len); ++v) {
      const BitString s = BitString::FromInteger(v, len);
      for (std::uint64_t fuel : {1ull, 2ull, 5ull, 64ull, 4096ull}) {
        const RunResult r = sdvm::Run(s, fuel);
        const oracle::RefResult ref = oracle::RefRun(s.str(), fuel);
        const char status = r.status == RunStatus::kHalted      ? 'H'
                            : r.status == RunStatus::kExhausted ? 'E'
                                                                : 'M';
        ASSERT_EQ(status, ref.status) << s.str() << " fuel " << fuel;
        if (status == 'H') {
          ASSERT_EQ(r.output.str(), ref.output) << s.str();
          ASSERT_EQ(r.steps, ref.steps) << s.str();
          ASSERT_LE(r.steps, fuel);
        }
      }
    }
  }
}

TEST(Sdvm, CompleteProgramsMatchReference) {
  EXPECT_EQ(Strings(sdvm::CompletePrograms(14, 1 << 22)), oracle::RefCompletePrograms(14));
  EXPECT_THROW(sdvm::CompletePrograms(14, 10), ResourceError);
}

TEST(Sdvm, ParseIsSelfDelimiting) {
  const auto programs = sdvm::CompletePrograms(16, 1 << 22);
  EXPECT_FALSE(FindPrefixViolation(programs));
  // Incremental parsing stops exactly at the program end.
  for (const Program& p : programs) {
    sdvm::Parser parser;
    std::size_t i = 0;
    while (parser.status() == sdvm::ParseStatus::kNeedMore) parser.Feed(p[i++]);
    ASSERT_EQ(parser.status(), sdvm::ParseStatus::kComplete);
    ASSERT_EQ(parser.consumed(), p.size());
  }
}

TEST(Sdvm, DeterministicAndMonotoneInFuel) {
  std::mt19937_64 rng(3);
  const auto programs = sdvm::CompletePrograms(18, 1 << 22);
  std::uniform_int_distribution<std::size_t> pick(0, programs.size() - 1);
  for (int i = 0; i < 3000; ++i) {
    const Program& p = programs[pick(rng)];
    const RunResult a = sdvm::Run(p, 300);
    EXPECT_EQ(a, sdvm::Run(p, 300));
    if (!a.halted()) continue;
    for (std::uint64_t more : {301ull, 1000ull, 100000ull}) {
      const RunResult b = sdvm::Run(p, more);
      EXPECT_TRUE(b.halted());
      EXPECT_EQ(b.output, a.output);
      EXPECT_EQ(b.steps, a.steps);
    }
  }
}

}  // namespace
}  // namespace algothermo
