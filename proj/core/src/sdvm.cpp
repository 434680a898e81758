#include "algothermo/sdvm.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

#include "algothermo/errors.hpp"

namespace algothermo {

const char* ToString(RunStatus status) {
  switch (status) {
    case RunStatus::kHalted: return "halted";
    case RunStatus::kExhausted: return "exhausted";
    case RunStatus::kMalformed: return "malformed";
  }
  return "unknown";
}

namespace sdvm {
namespace {

// Gamma values are bounded well below 2^40 by the program-length cap.
constexpr std::uint32_t kMaxGammaZeros = 40;

std::uint32_t TargetWidth(std::uint64_t k) {
  return static_cast<std::uint32_t>(std::bit_width(k));
}

}  // namespace

std::optional<std::uint64_t> Parser::Gamma::Feed(bool bit, bool* invalid) {
  if (!in_value) {
    if (!bit) {
      if (++zeros > kMaxGammaZeros) *invalid = true;
      return std::nullopt;
    }
    in_value = true;
    value = 1;
    remaining = zeros;
  } else {
    value = (value << 1) | (bit ? 1U : 0U);
    --remaining;
  }
  if (remaining == 0) return value;
  return std::nullopt;
}

void Parser::StartGamma(Phase phase) {
  phase_ = phase;
  gamma_ = Gamma{};
}

void Parser::FinishInstruction() {
  decoded_.code.push_back(current_);
  current_ = Instruction{};
  if (decoded_.code.size() == decoded_.count) {
    Complete();
  } else {
    phase_ = Phase::kInstrOp;
    pending_bits_ = 2;
    field_ = 0;
  }
}

ParseStatus Parser::Feed(bool bit) {
  if (status_ != ParseStatus::kNeedMore) return status_ = ParseStatus::kInvalid;
  if (++consumed_ > kMaxProgramBits) return status_ = ParseStatus::kInvalid;

  bool invalid = false;
  switch (phase_) {
    case Phase::kOpcode: {
      field_ = (field_ << 1) | (bit ? 1U : 0U);
      if (consumed_ < 2) break;
      switch (field_) {
        case 0: decoded_.opcode = Opcode::kLiteral; StartGamma(Phase::kLiteralLength); break;
        case 1: decoded_.opcode = Opcode::kRepeat; StartGamma(Phase::kRepeatCount); break;
        case 2: decoded_.opcode = Opcode::kRun; StartGamma(Phase::kRunCount); break;
        default: status_ = ParseStatus::kInvalid; break;
      }
      field_ = 0;
      break;
    }
    case Phase::kLiteralLength: {
      if (auto v = gamma_.Feed(bit, &invalid)) {
        decoded_.count = *v - 1;
        if (decoded_.count == 0) {
          Complete();
        } else {
          phase_ = Phase::kLiteralPayload;
        }
      }
      break;
    }
    case Phase::kLiteralPayload:
    case Phase::kRepeatPattern: {
      decoded_.bits.push_back(bit);
      const std::uint64_t want =
          phase_ == Phase::kLiteralPayload ? decoded_.count : field_;
      if (decoded_.bits.size() == want) Complete();
      break;
    }
    case Phase::kRepeatCount: {
      if (auto v = gamma_.Feed(bit, &invalid)) {
        decoded_.count = *v - 1;
        StartGamma(Phase::kRepeatPatternLength);
      }
      break;
    }
    case Phase::kRepeatPatternLength: {
      if (auto v = gamma_.Feed(bit, &invalid)) {
        field_ = *v;  // pattern length m >= 1
        phase_ = Phase::kRepeatPattern;
      }
      break;
    }
    case Phase::kRunCount: {
      if (auto v = gamma_.Feed(bit, &invalid)) {
        decoded_.count = *v - 1;
        target_width_ = TargetWidth(decoded_.count);
        if (decoded_.count == 0) {
          Complete();
        } else {
          phase_ = Phase::kInstrOp;
          pending_bits_ = 2;
          field_ = 0;
        }
      }
      break;
    }
    case Phase::kInstrOp: {
      field_ = (field_ << 1) | (bit ? 1U : 0U);
      if (--pending_bits_ > 0) break;
      current_.op = static_cast<Op>(field_);
      field_ = 0;
      if (current_.op == Op::kJmp) {
        phase_ = Phase::kInstrTarget;
        pending_bits_ = target_width_;
      } else {
        phase_ = Phase::kInstrArg;
      }
      break;
    }
    case Phase::kInstrArg: {
      current_.arg = bit ? 1 : 0;
      if (current_.op == Op::kJzDec) {
        phase_ = Phase::kInstrTarget;
        pending_bits_ = target_width_;
        field_ = 0;
      } else {
        FinishInstruction();
      }
      break;
    }
    case Phase::kInstrTarget: {
      field_ = (field_ << 1) | (bit ? 1U : 0U);
      if (--pending_bits_ == 0) {
        current_.target = field_;
        field_ = 0;
        FinishInstruction();
      }
      break;
    }
  }
  if (invalid) status_ = ParseStatus::kInvalid;
  return status_;
}

std::optional<Decoded> Parse(const BitString& program) {
  Parser parser;
  for (std::size_t i = 0; i < program.size(); ++i) {
    if (parser.Feed(program[i]) != ParseStatus::kNeedMore && i + 1 < program.size()) {
      return std::nullopt;
    }
  }
  if (parser.status() != ParseStatus::kComplete) return std::nullopt;
  return parser.decoded();
}

RunResult Execute(const Decoded& program, std::uint64_t fuel) {
  if (fuel == 0) throw ConfigError("fuel must be at least 1");
  switch (program.opcode) {
    case Opcode::kLiteral: {
      if (program.count + 1 > fuel) return RunResult::Exhausted(fuel);
      return RunResult::Halted(program.bits, program.count + 1, fuel);
    }
    case Opcode::kRepeat: {
      if (program.count + 1 > fuel) return RunResult::Exhausted(fuel);
      BitString out;
      const std::size_t m = program.bits.size();
      for (std::uint64_t i = 0; i < program.count; ++i) out.push_back(program.bits[i % m]);
      return RunResult::Halted(std::move(out), program.count + 1, fuel);
    }
    case Opcode::kRun: {
      const std::uint64_t k = program.code.size();
      std::uint64_t reg[2] = {0, 0};
      std::uint64_t pc = 0;
      std::uint64_t steps = 0;
      BitString out;
      while (true) {
        if (steps == fuel) return RunResult::Exhausted(fuel);
        ++steps;
        if (pc >= k) return RunResult::Halted(std::move(out), steps, fuel);
        const Instruction& in = program.code[pc];
        switch (in.op) {
          case Op::kInc: ++reg[in.arg]; ++pc; break;
          case Op::kJzDec:
            if (reg[in.arg] == 0) {
              pc = in.target;
            } else {
              --reg[in.arg];
              ++pc;
            }
            break;
          case Op::kOut: out.push_back(in.arg != 0); ++pc; break;
          case Op::kJmp: pc = in.target; break;
        }
      }
    }
  }
  return RunResult::Malformed(fuel);
}

RunResult Run(const Program& program, std::uint64_t fuel) {
  if (fuel == 0) throw ConfigError("fuel must be at least 1");
  const auto decoded = Parse(program);
  if (!decoded) return RunResult::Malformed(fuel);
  return Execute(*decoded, fuel);
}

BitString EncodeGamma(std::uint64_t x) {
  if (x == 0) throw DomainError("gamma code needs x >= 1");
  BitString out;
  const int width = std::bit_width(x);
  for (int i = 1; i < width; ++i) out.push_back(false);
  for (int i = width - 1; i >= 0; --i) out.push_back(((x >> i) & 1U) != 0);
  return out;
}

BitString EncodeLiteral(const BitString& payload) {
  BitString out = BitString::FromString("00");
  out.append(EncodeGamma(payload.size() + 1));
  out.append(payload);
  return out;
}

BitString EncodeRepeat(std::uint64_t n, const BitString& pattern) {
  if (pattern.empty()) throw DomainError("repeat pattern must be nonempty");
  BitString out = BitString::FromString("01");
  out.append(EncodeGamma(n + 1));
  out.append(EncodeGamma(pattern.size()));
  out.append(pattern);
  return out;
}

BitString EncodeRun(const std::vector<Instruction>& code) {
  BitString out = BitString::FromString("10");
  out.append(EncodeGamma(code.size() + 1));
  const std::uint32_t w = TargetWidth(code.size());
  auto put_target = [&](std::uint64_t t) {
    if (w < 64 && t >= (std::uint64_t{1} << w)) throw DomainError("jump target does not fit");
    for (int i = static_cast<int>(w) - 1; i >= 0; --i) out.push_back(((t >> i) & 1U) != 0);
  };
  for (const Instruction& in : code) {
    const auto op = static_cast<unsigned>(in.op);
    out.push_back((op & 2U) != 0);
    out.push_back((op & 1U) != 0);
    switch (in.op) {
      case Op::kInc:
      case Op::kOut: out.push_back(in.arg != 0); break;
      case Op::kJzDec: out.push_back(in.arg != 0); put_target(in.target); break;
      case Op::kJmp: put_target(in.target); break;
    }
  }
  return out;
}

std::string Disassemble(const Decoded& program) {
  std::ostringstream out;
  switch (program.opcode) {
    case Opcode::kLiteral: out << "LIT " << program.bits.str(); break;
    case Opcode::kRepeat: out << "REP " << program.count << " " << program.bits.str(); break;
    case Opcode::kRun: {
      out << "RUN";
      for (const Instruction& in : program.code) {
        switch (in.op) {
          case Op::kInc: out << "; INC R" << int{in.arg}; break;
          case Op::kJzDec: out << "; JZD R" << int{in.arg} << " " << in.target; break;
          case Op::kOut: out << "; OUT " << int{in.arg}; break;
          case Op::kJmp: out << "; JMP " << in.target; break;
        }
      }
      break;
    }
  }
  return out.str();
}

std::vector<Program> CompletePrograms(std::size_t max_length, std::size_t limit) {
  std::vector<Program> out;
  struct Frame {
    Parser parser;
    BitString bits;
  };
  std::vector<Frame> stack;
  stack.push_back(Frame{});
  while (!stack.empty()) {
    Frame frame = std::move(stack.back());
    stack.pop_back();
    if (frame.bits.size() >= max_length) continue;
    for (int b = 1; b >= 0; --b) {
      Frame next = frame;
      next.bits.push_back(b != 0);
      const ParseStatus s = next.parser.Feed(b != 0);
      if (s == ParseStatus::kComplete) {
        out.push_back(std::move(next.bits));
        if (out.size() > limit) {
          throw ResourceError("more than " + std::to_string(limit) +
                              " complete programs of length <= " + std::to_string(max_length));
        }
      } else if (s == ParseStatus::kNeedMore) {
        stack.push_back(std::move(next));
      }
    }
  }
  std::sort(out.begin(), out.end(), ShortlexLess{});
  return out;
}

}  // namespace sdvm
}  // namespace algothermo
