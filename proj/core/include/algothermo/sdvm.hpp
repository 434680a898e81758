#pragma once

// SDVM: a self-delimiting virtual machine over binary programs.
//
// Every program starts with a 2-bit opcode. Integers are written in Elias
// gamma code: for x >= 1, (bit_width(x) - 1) zeros followed by x in binary,
// 2*floor(log2 x) + 1 bits in total.
//
//   00 LIT   gamma(n+1), then n payload bits.         Output: the payload.
//   01 REP   gamma(n+1), gamma(m), then m bits.       Output: first n bits of pattern^inf.
//   10 RUN   gamma(k+1), then k instructions.         Output: bits written by OUT.
//   11       reserved; any program starting 11 is malformed.
//
// RUN instructions drive two unbounded counters R0, R1. With w = bit_width(k)
// (w = 0 for k = 0), jump targets are w-bit numbers; a target >= k halts.
//
//   00 r     INC  R[r] += 1
//   01 r t   JZD  if R[r] == 0 jump to t, else R[r] -= 1
//   10 b     OUT  append bit b to the output
//   11 t     JMP  jump to t
//
// Cost model: LIT and REP take n + 1 steps. RUN charges one step per executed
// instruction plus one for the halt, so every halting run takes >= 1 step.
//
// The parse consumes bits until the program is syntactically complete and
// never looks further, so complete programs form a prefix-free set. Programs
// longer than kMaxProgramBits are rejected.
//
// Literal mode gives H(s) <= |s| + 2 floor(log2(|s|+1)) + 3, hence
// H(s) <= |s| + 2 log2|s| + kLiteralConstant for every nonempty s. Repeat
// mode with a one-bit pattern gives H(b^n) <= 2 log2 n + kRepeatConstant.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "algothermo/bits.hpp"
#include "algothermo/run_result.hpp"

namespace algothermo::sdvm {

inline constexpr int kLiteralConstant = 5;
inline constexpr int kRepeatConstant = 7;
inline constexpr const char* kSemanticsVersion = "sdvm-v1";

enum class Opcode : std::uint8_t { kLiteral = 0, kRepeat = 1, kRun = 2 };
enum class Op : std::uint8_t { kInc = 0, kJzDec = 1, kOut = 2, kJmp = 3 };

struct Instruction {
  Op op = Op::kInc;
  std::uint8_t arg = 0;      // register or output bit
  std::uint64_t target = 0;  // jump target
  friend bool operator==(const Instruction&, const Instruction&) = default;
};

struct Decoded {
  Opcode opcode = Opcode::kLiteral;
  std::uint64_t count = 0;  // n for LIT/REP, k for RUN
  BitString bits;           // LIT payload or REP pattern
  std::vector<Instruction> code;
};

enum class ParseStatus { kNeedMore, kComplete, kInvalid };

// Incremental parser; copyable so that enumeration can branch on each bit.
class Parser {
 public:
  ParseStatus Feed(bool bit);
  ParseStatus status() const { return status_; }
  std::size_t consumed() const { return consumed_; }
  const Decoded& decoded() const { return decoded_; }

 private:
  enum class Phase : std::uint8_t {
    kOpcode,
    kLiteralLength,
    kLiteralPayload,
    kRepeatCount,
    kRepeatPatternLength,
    kRepeatPattern,
    kRunCount,
    kInstrOp,
    kInstrArg,
    kInstrTarget,
  };

  // Gamma decoder state.
  struct Gamma {
    std::uint32_t zeros = 0;
    std::uint32_t remaining = 0;
    bool in_value = false;
    std::uint64_t value = 0;
    // Returns the decoded value when complete; sets *invalid on overflow.
    std::optional<std::uint64_t> Feed(bool bit, bool* invalid);
  };

  void StartGamma(Phase phase);
  void FinishInstruction();
  void Complete() { status_ = ParseStatus::kComplete; }

  ParseStatus status_ = ParseStatus::kNeedMore;
  Phase phase_ = Phase::kOpcode;
  std::size_t consumed_ = 0;
  std::uint32_t pending_bits_ = 0;  // bits still to read in the current field
  std::uint64_t field_ = 0;
  Gamma gamma_;
  std::uint32_t target_width_ = 0;
  Instruction current_;
  Decoded decoded_;
};

// Decodes a whole program. Returns nullopt unless the bits form exactly one
// complete program (no missing and no trailing bits).
std::optional<Decoded> Parse(const BitString& program);

// Executes a decoded program with the given fuel (>= 1).
RunResult Execute(const Decoded& program, std::uint64_t fuel);

// Run = Parse + Execute; malformed programs report kMalformed.
RunResult Run(const Program& program, std::uint64_t fuel);

// Encoders (used by tests, witnesses and the CLI).
BitString EncodeGamma(std::uint64_t x);
BitString EncodeLiteral(const BitString& payload);
BitString EncodeRepeat(std::uint64_t n, const BitString& pattern);
BitString EncodeRun(const std::vector<Instruction>& code);

// Human-readable disassembly.
std::string Disassemble(const Decoded& program);

// All complete programs of length <= max_length in shortlex order. Throws
// ResourceError when more than `limit` programs exist.
std::vector<Program> CompletePrograms(std::size_t max_length, std::size_t limit);

}  // namespace algothermo::sdvm
