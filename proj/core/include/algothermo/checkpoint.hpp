#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "algothermo/enumerate.hpp"

namespace algothermo {

// Checkpoint file, line oriented:
//
//   algothermo-checkpoint v1 machine=<16 hex> fuel_cap=<n> max_programs=<n> last_round=<r>
//   round,length,bits,steps,output_hex
//   ...
//
// Record indices are implicit (line order). output_hex is the sentinel hex
// encoding of BitString::ToSentinelHex.
struct Checkpoint {
  std::uint64_t machine_hash = 0;
  Schedule schedule;
  std::uint32_t last_round = 0;
  std::vector<HaltRecord> records;

  friend bool operator==(const Checkpoint&, const Checkpoint&) = default;
};

Checkpoint MakeCheckpoint(const Dovetailer& dovetailer);

void WriteCheckpoint(std::ostream& out, const Checkpoint& checkpoint);
Checkpoint ReadCheckpoint(std::istream& in);

// Writes to a sibling temp file and renames it over `path`.
void SaveCheckpoint(const std::filesystem::path& path, const Checkpoint& checkpoint);
Checkpoint LoadCheckpoint(const std::filesystem::path& path);

// Rebuilds a dovetailer from a checkpoint; throws ConfigError when the
// machine hash or schedule does not match.
Dovetailer ResumeDovetailer(const Machine& machine, const Checkpoint& checkpoint);

}  // namespace algothermo
