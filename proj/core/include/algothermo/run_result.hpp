#pragma once

#include <cstdint>

#include "algothermo/bits.hpp"

namespace algothermo {

enum class RunStatus { kHalted, kExhausted, kMalformed };

const char* ToString(RunStatus status);

struct RunResult {
  RunStatus status = RunStatus::kMalformed;
  BitString output;         // meaningful when halted
  std::uint64_t steps = 0;  // steps used when halted
  std::uint64_t fuel = 0;   // fuel given

  static RunResult Halted(BitString output, std::uint64_t steps, std::uint64_t fuel) {
    return {RunStatus::kHalted, std::move(output), steps, fuel};
  }
  static RunResult Exhausted(std::uint64_t fuel) { return {RunStatus::kExhausted, {}, 0, fuel}; }
  static RunResult Malformed(std::uint64_t fuel) { return {RunStatus::kMalformed, {}, 0, fuel}; }

  bool halted() const { return status == RunStatus::kHalted; }

  friend bool operator==(const RunResult&, const RunResult&) = default;
};

}  // namespace algothermo
