#include "algothermo/checkpoint.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "algothermo/errors.hpp"

namespace algothermo {
namespace {

constexpr const char* kMagic = "algothermo-checkpoint";
constexpr const char* kVersion = "v1";

std::vector<std::string> Split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

std::uint64_t ParseU64(const std::string& s, int base = 10) {
  try {
    std::size_t used = 0;
    const auto v = std::stoull(s, &used, base);
    if (used != s.size()) throw ConfigError("");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("bad checkpoint number '" + s + "'");
  }
}

}  // namespace

Checkpoint MakeCheckpoint(const Dovetailer& dovetailer) {
  return Checkpoint{dovetailer.machine().IdentityHash(), dovetailer.schedule(),
                    dovetailer.completed_rounds(), dovetailer.records()};
}

void WriteCheckpoint(std::ostream& out, const Checkpoint& cp) {
  char hash[17];
  std::snprintf(hash, sizeof(hash), "%016llx", static_cast<unsigned long long>(cp.machine_hash));
  out << kMagic << ' ' << kVersion << " machine=" << hash << " fuel_cap=" << cp.schedule.fuel_cap
      << " max_programs=" << cp.schedule.max_programs_per_round
      << " last_round=" << cp.last_round << '\n';
  for (const HaltRecord& r : cp.records) {
    out << r.discovered_at << ',' << r.program.size() << ',' << r.program.str() << ','
        << r.steps << ',' << r.output.ToSentinelHex() << '\n';
  }
}

Checkpoint ReadCheckpoint(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw ConfigError("empty checkpoint");
  std::istringstream hs(header);
  std::string magic, version;
  hs >> magic >> version;
  if (magic != kMagic || version != kVersion) throw ConfigError("not a v1 checkpoint file");
  Checkpoint cp;
  bool seen_hash = false, seen_cap = false, seen_max = false, seen_round = false;
  std::string field;
  while (hs >> field) {
    const auto eq = field.find('=');
    if (eq == std::string::npos) throw ConfigError("bad checkpoint header field '" + field + "'");
    const std::string key = field.substr(0, eq);
    const std::string value = field.substr(eq + 1);
    if (key == "machine") {
      cp.machine_hash = ParseU64(value, 16);
      seen_hash = true;
    } else if (key == "fuel_cap") {
      cp.schedule.fuel_cap = ParseU64(value);
      seen_cap = true;
    } else if (key == "max_programs") {
      cp.schedule.max_programs_per_round = ParseU64(value);
      seen_max = true;
    } else if (key == "last_round") {
      cp.last_round = static_cast<std::uint32_t>(ParseU64(value));
      seen_round = true;
    } else {
      throw ConfigError("unknown checkpoint header field '" + key + "'");
    }
  }
  if (!(seen_hash && seen_cap && seen_max && seen_round)) {
    throw ConfigError("checkpoint header is missing fields");
  }
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto parts = Split(line, ',');
    if (parts.size() != 5) throw ConfigError("bad checkpoint record '" + line + "'");
    HaltRecord r;
    r.index = cp.records.size() + 1;
    r.discovered_at = static_cast<std::uint32_t>(ParseU64(parts[0]));
    r.program = BitString::FromString(parts[2]);
    if (ParseU64(parts[1]) != r.program.size()) {
      throw ConfigError("checkpoint record length does not match its bits");
    }
    r.steps = ParseU64(parts[3]);
    r.output = BitString::FromSentinelHex(parts[4]);
    cp.records.push_back(std::move(r));
  }
  return cp;
}

void SaveCheckpoint(const std::filesystem::path& path, const Checkpoint& checkpoint) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw ConfigError("cannot write checkpoint '" + tmp.string() + "'");
    WriteCheckpoint(out, checkpoint);
    out.flush();
    if (!out) throw ConfigError("failed writing checkpoint '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, path);
}

Checkpoint LoadCheckpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open checkpoint '" + path.string() + "'");
  return ReadCheckpoint(in);
}

Dovetailer ResumeDovetailer(const Machine& machine, const Checkpoint& checkpoint) {
  if (checkpoint.machine_hash != machine.IdentityHash()) {
    throw ConfigError("checkpoint was written for a different machine");
  }
  return Dovetailer(machine, checkpoint.schedule, checkpoint.last_round, checkpoint.records);
}

}  // namespace algothermo
