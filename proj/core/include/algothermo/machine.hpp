#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "algothermo/bits.hpp"
#include "algothermo/run_result.hpp"
#include "algothermo/table_machine.hpp"

namespace algothermo {

// The step-executed self-delimiting VM (see sdvm.hpp for the format).
class StepMachine {
 public:
  explicit StepMachine(std::string name = "sdvm") : name_(std::move(name)) {}

  const std::string& name() const { return name_; }
  RunResult Run(const Program& p, std::uint64_t fuel) const;
  std::vector<Program> CompletePrograms(std::size_t max_length, std::size_t limit) const;

 private:
  std::string name_;
};

// A prefix-free machine: either a table machine or a step machine. Immutable
// and safe to share between threads.
class Machine {
 public:
  Machine(TableMachine table) : impl_(std::move(table)) {}  // NOLINT(google-explicit-constructor)
  Machine(StepMachine step) : impl_(std::move(step)) {}     // NOLINT(google-explicit-constructor)

  const std::string& name() const;
  bool is_table() const { return std::holds_alternative<TableMachine>(impl_); }
  const TableMachine& table() const;

  // Deterministic; fuel must be >= 1.
  RunResult Run(const Program& p, std::uint64_t fuel) const;

  // Every syntactically complete program (every codeword, for table
  // machines) of length <= max_length, in shortlex order.
  std::vector<Program> CompletePrograms(std::size_t max_length, std::size_t limit) const;

  // Stable 64-bit FNV-1a hash of the canonical JSON spec.
  std::uint64_t IdentityHash() const;
  std::string IdentityHex() const;

 private:
  std::variant<TableMachine, StepMachine> impl_;
};

// Built-in machines: "dyadic2" (domain {0, 10}), "harmonic", "geometric"
// (beta = 1/2, min_length = 4) and "sdvm".
std::vector<std::string> BuiltinMachineNames();
const Machine& BuiltinMachine(std::string_view name);

}  // namespace algothermo
