#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "algothermo/table_machine.hpp"

namespace algothermo {

// Fair-coin channel: bits come from std::mt19937_64, one generator per shard
// seeded with successive SplitMix64 outputs of the run seed. Each 64-bit
// draw supplies 64 bits, most significant first. Sample i belongs to shard
// i / shard_size, so results depend only on (seed, samples, shard_size).
inline constexpr const char* kChannelGenerator = "mt19937_64+splitmix64-shards";
inline constexpr const char* kChannelGeneratorVersion = "1";

struct ChannelConfig {
  std::uint32_t N = 1;
  Length L = 0;
  Length delta_l = 0;
  std::uint64_t samples = 1;
  std::uint64_t seed = 0;
  std::uint64_t shard_size = std::uint64_t{1} << 16;
};

struct ChannelResult {
  std::uint64_t samples = 0;
  std::uint64_t parsed = 0;    // streams whose first N codewords decode
  std::uint64_t accepted = 0;  // parsed, with total length in [L, L + delta_l]
  std::map<Length, std::uint64_t> first_length;  // accepted samples by first codeword length
  std::uint64_t prefix_10 = 0;                   // streams starting with bits "10"
  std::uint64_t shards = 0;

  double acceptance_rate() const {
    return parsed == 0 ? 0.0 : static_cast<double>(accepted) / static_cast<double>(parsed);
  }
  double parse_rate() const {
    return samples == 0 ? 0.0 : static_cast<double>(parsed) / static_cast<double>(samples);
  }
  bool zero_acceptance() const { return accepted == 0; }
};

// Needs a finite domain with codewords of at most 62 bits. Throws
// ConfigError otherwise.
ChannelResult SimulateChannel(const TableMachine& machine, const ChannelConfig& config);

// SplitMix64 step, exposed for reproducibility checks.
std::uint64_t SplitMix64(std::uint64_t& state);

}  // namespace algothermo
