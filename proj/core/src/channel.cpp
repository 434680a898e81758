#include "algothermo/channel.hpp"

#include <algorithm>
#include <random>
#include <vector>

#include "algothermo/errors.hpp"

namespace algothermo {
namespace {

constexpr Length kMaxChannelLength = 62;

class BitSource {
 public:
  explicit BitSource(std::mt19937_64& gen) : gen_(gen) {}
  bool Next() {
    if (left_ == 0) {
      word_ = gen_();
      left_ = 64;
    }
    --left_;
    return (word_ >> left_) & 1u;
  }
  // Starts a fresh sample on a word boundary; returns its first 64 bits.
  std::uint64_t Reset() {
    word_ = gen_();
    left_ = 64;
    return word_;
  }

 private:
  std::mt19937_64& gen_;
  std::uint64_t word_ = 0;
  int left_ = 0;
};

struct CanonicalCode {
  std::vector<std::uint64_t> first;  // by length
  std::vector<std::uint64_t> count;
  Length max_length = 0;
};

CanonicalCode BuildCode(const TableMachine& m) {
  if (!m.MaxLength()) throw ConfigError("channel simulation needs a finite domain");
  if (*m.MaxLength() > kMaxChannelLength) {
    throw ConfigError("channel simulation supports codewords of at most 62 bits");
  }
  CanonicalCode code;
  code.max_length = *m.MaxLength();
  for (Length l = 0; l <= code.max_length; ++l) {
    code.first.push_back(m.FirstCode(l).get_ui());
    code.count.push_back(m.SpectrumCount(l).get_ui());
  }
  return code;
}

}  // namespace

std::uint64_t SplitMix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

ChannelResult SimulateChannel(const TableMachine& machine, const ChannelConfig& config) {
  if (config.samples < 1) throw ConfigError("samples must be at least 1");
  if (config.N < 1) throw ConfigError("N must be at least 1");
  if (config.shard_size < 1) throw ConfigError("shard size must be at least 1");
  const CanonicalCode code = BuildCode(machine);
  if (code.count.size() > 0 && code.count[0] > 0) {
    throw ConfigError("channel simulation needs codewords of positive length");
  }
  const std::uint64_t window_hi = static_cast<std::uint64_t>(config.L) + config.delta_l;

  ChannelResult res;
  res.samples = config.samples;
  std::uint64_t seeder = config.seed;
  for (std::uint64_t start = 0; start < config.samples; start += config.shard_size) {
    ++res.shards;
    std::mt19937_64 gen(SplitMix64(seeder));
    BitSource bits(gen);
    const std::uint64_t end = std::min(config.samples, start + config.shard_size);
    for (std::uint64_t s = start; s < end; ++s) {
      if ((bits.Reset() >> 62) == 0b10) ++res.prefix_10;
      std::uint64_t total = 0;
      Length first_len = 0;
      bool ok = true;
      for (std::uint32_t k = 0; k < config.N && ok; ++k) {
        std::uint64_t v = 0;
        Length l = 0;
        while (true) {
          const bool b = bits.Next();
          v = (v << 1) | static_cast<std::uint64_t>(b);
          ++l;
          if (l > code.max_length) {
            ok = false;
            break;
          }
          if (code.count[l] > 0 && v >= code.first[l] && v - code.first[l] < code.count[l]) break;
        }
        if (!ok) break;
        if (k == 0) first_len = l;
        total += l;
      }
      if (!ok) continue;
      ++res.parsed;
      if (total >= config.L && total <= window_hi) {
        ++res.accepted;
        ++res.first_length[first_len];
      }
    }
  }
  return res;
}

}  // namespace algothermo
