#include "algothermo/enumerate.hpp"

#include <algorithm>

#include "algothermo/errors.hpp"

namespace algothermo {

std::uint64_t Schedule::FuelForRound(std::uint32_t round) const {
  if (round >= 63) return fuel_cap;
  return std::min(std::uint64_t{1} << round, fuel_cap);
}

Dovetailer::Dovetailer(const Machine& machine, Schedule schedule)
    : machine_(machine), schedule_(schedule) {
  if (schedule_.fuel_cap == 0) throw ConfigError("fuel cap must be at least 1");
}

Dovetailer::Dovetailer(const Machine& machine, Schedule schedule, std::uint32_t completed_rounds,
                       std::vector<HaltRecord> records)
    : Dovetailer(machine, schedule) {
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (records[i].index != i + 1) throw ConfigError("checkpoint record indices are not contiguous");
    if (records[i].discovered_at > completed_rounds) {
      throw ConfigError("checkpoint record is newer than its last completed round");
    }
  }
  // Pending = complete programs of length <= completed_rounds minus halted ones.
  std::vector<Program> halted;
  halted.reserve(records.size());
  for (const HaltRecord& r : records) halted.push_back(r.program);
  std::sort(halted.begin(), halted.end(), ShortlexLess{});
  for (Program& p : machine_.CompletePrograms(completed_rounds, schedule_.max_programs_per_round)) {
    if (!std::binary_search(halted.begin(), halted.end(), p, ShortlexLess{})) {
      pending_.push_back(std::move(p));
    }
  }
  completed_rounds_ = completed_rounds;
  records_ = std::move(records);
}

std::span<const HaltRecord> Dovetailer::RunRound() {
  const std::uint32_t round = completed_rounds_ + 1;
  const std::uint64_t fuel = schedule_.FuelForRound(round);

  // Admit the programs of length exactly `round`.
  std::vector<Program> fresh =
      machine_.CompletePrograms(round, schedule_.max_programs_per_round);
  std::erase_if(fresh, [round](const Program& p) { return p.size() != round; });
  if (pending_.size() + fresh.size() > schedule_.max_programs_per_round) {
    throw ResourceError("round " + std::to_string(round) + " would run " +
                        std::to_string(pending_.size() + fresh.size()) +
                        " programs, above the configured bound");
  }
  pending_.insert(pending_.end(), std::make_move_iterator(fresh.begin()),
                  std::make_move_iterator(fresh.end()));

  const std::size_t first_new = records_.size();
  std::vector<Program> still_pending;
  for (Program& p : pending_) {
    RunResult result = machine_.Run(p, fuel);
    if (result.halted()) {
      records_.push_back(HaltRecord{records_.size() + 1, std::move(p), std::move(result.output),
                                    result.steps, round});
    } else {
      still_pending.push_back(std::move(p));
    }
  }
  pending_ = std::move(still_pending);
  completed_rounds_ = round;
  return std::span<const HaltRecord>(records_).subspan(first_new);
}

void Dovetailer::RunUntil(std::uint32_t rounds) {
  while (completed_rounds_ < rounds) RunRound();
}

std::vector<HaltRecord> Dovetail(const Machine& machine, std::uint32_t rounds, Schedule schedule) {
  if (rounds < 1) throw ConfigError("rounds must be at least 1");
  Dovetailer d(machine, schedule);
  d.RunUntil(rounds);
  return d.records();
}

std::optional<std::pair<Program, Program>> VerifyPrefixFree(std::span<const HaltRecord> records) {
  std::vector<Program> programs;
  programs.reserve(records.size());
  for (const HaltRecord& r : records) programs.push_back(r.program);
  return FindPrefixViolation(programs);
}

std::vector<mpq_class> KraftPartialSums(std::span<const HaltRecord> records) {
  std::vector<mpq_class> out;
  out.reserve(records.size());
  mpq_class sum = 0;
  for (const HaltRecord& r : records) {
    mpq_class term(1);
    mpq_div_2exp(term.get_mpq_t(), term.get_mpq_t(), static_cast<mp_bitcnt_t>(r.program.size()));
    sum += term;
    out.push_back(sum);
  }
  return out;
}

}  // namespace algothermo
