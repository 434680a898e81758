#include "algothermo/machine.hpp"

#include <cstdio>

#include "algothermo/errors.hpp"
#include "algothermo/machine_io.hpp"
#include "algothermo/sdvm.hpp"

namespace algothermo {

RunResult StepMachine::Run(const Program& p, std::uint64_t fuel) const {
  return sdvm::Run(p, fuel);
}

std::vector<Program> StepMachine::CompletePrograms(std::size_t max_length,
                                                   std::size_t limit) const {
  return sdvm::CompletePrograms(max_length, limit);
}

const std::string& Machine::name() const {
  return std::visit([](const auto& m) -> const std::string& { return m.name(); }, impl_);
}

const TableMachine& Machine::table() const {
  if (const auto* t = std::get_if<TableMachine>(&impl_)) return *t;
  throw ConfigError("machine '" + name() + "' is not a table machine");
}

RunResult Machine::Run(const Program& p, std::uint64_t fuel) const {
  return std::visit([&](const auto& m) { return m.Run(p, fuel); }, impl_);
}

std::vector<Program> Machine::CompletePrograms(std::size_t max_length, std::size_t limit) const {
  if (const auto* t = std::get_if<TableMachine>(&impl_)) {
    const auto l = static_cast<Length>(std::min(max_length, kMaxProgramBits));
    return t->AssignCodewords(l, limit);
  }
  return std::get<StepMachine>(impl_).CompletePrograms(max_length, limit);
}

std::uint64_t Machine::IdentityHash() const {
  const std::string canonical = MachineToJson(*this);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string Machine::IdentityHex() const {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(IdentityHash()));
  return buf;
}

std::vector<std::string> BuiltinMachineNames() {
  return {"dyadic2", "harmonic", "geometric", "sdvm"};
}

const Machine& BuiltinMachine(std::string_view name) {
  if (name == "dyadic2") {
    static const Machine m =
        TableMachine("dyadic2", ExplicitSpectrum{{{1, mpz_class(1)}, {2, mpz_class(1)}}});
    return m;
  }
  if (name == "harmonic") {
    static const Machine m =
        TableMachine("harmonic", HarmonicSpectrum{}, OutputRule::kIndex, {}, Length{40});
    return m;
  }
  if (name == "geometric") {
    static const Machine m = TableMachine("geometric", GeometricSpectrum{mpq_class(1, 2), 4},
                                          OutputRule::kIndex, {}, Length{40});
    return m;
  }
  if (name == "sdvm") {
    static const Machine m = StepMachine("sdvm");
    return m;
  }
  throw ConfigError("unknown built-in machine '" + std::string(name) + "'");
}

}  // namespace algothermo
