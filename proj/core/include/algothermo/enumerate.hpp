#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <unordered_set>
#include <utility>
#include <vector>

#include "algothermo/bits.hpp"
#include "algothermo/machine.hpp"

namespace algothermo {

struct HaltRecord {
  std::uint64_t index = 0;  // 1-based enumeration position
  Program program;
  BitString output;
  std::uint64_t steps = 0;
  std::uint32_t discovered_at = 0;  // dovetail round

  friend bool operator==(const HaltRecord&, const HaltRecord&) = default;
};

struct Schedule {
  // Round r runs programs for min(2^r, fuel_cap) steps.
  std::uint64_t fuel_cap = std::uint64_t{1} << 20;
  // Upper bound on programs executed in one round.
  std::size_t max_programs_per_round = std::size_t{1} << 22;

  std::uint64_t FuelForRound(std::uint32_t round) const;

  friend bool operator==(const Schedule&, const Schedule&) = default;
};

// Resumable dovetailer. Round r runs every complete program of length <= r
// that has not halted yet, in shortlex order, with fuel min(2^r, cap); each
// program that halts is emitted once, in the round it first halts.
class Dovetailer {
 public:
  explicit Dovetailer(const Machine& machine, Schedule schedule = {});

  // Continues from previously produced records, as if rounds
  // 1..completed_rounds had just run.
  Dovetailer(const Machine& machine, Schedule schedule, std::uint32_t completed_rounds,
             std::vector<HaltRecord> records);

  // Runs one more round; returns the records it produced.
  std::span<const HaltRecord> RunRound();
  void RunUntil(std::uint32_t rounds);

  std::uint32_t completed_rounds() const { return completed_rounds_; }
  const std::vector<HaltRecord>& records() const { return records_; }
  const Schedule& schedule() const { return schedule_; }
  const Machine& machine() const { return machine_; }

 private:
  Machine machine_;
  Schedule schedule_;
  std::uint32_t completed_rounds_ = 0;
  std::vector<HaltRecord> records_;
  std::vector<Program> pending_;  // complete programs not yet halted, shortlex order
};

// The first `rounds` rounds of the dovetailed enumeration.
std::vector<HaltRecord> Dovetail(const Machine& machine, std::uint32_t rounds,
                                 Schedule schedule = {});

// nullopt when no program is a proper prefix of another; otherwise a
// violating (prefix, extension) pair.
std::optional<std::pair<Program, Program>> VerifyPrefixFree(std::span<const HaltRecord> records);

// Exact Kraft partial sums sum_{i <= n} 2^-|p_i| for n = 1..records.size().
std::vector<mpq_class> KraftPartialSums(std::span<const HaltRecord> records);

}  // namespace algothermo
