#pragma once

#include <filesystem>
#include <string>

#include "algothermo/machine.hpp"

namespace algothermo {

// Machine spec files (JSON):
//
//   {"kind": "table", "name": "dyadic2",
//    "rule": {"type": "explicit", "counts": [[1, 1], [2, 1]]},
//    "output_rule": "index"}
//   {"kind": "table", "rule": {"type": "geometric", "beta": "1/2", "min_length": 4}}
//   {"kind": "table", "rule": {"type": "harmonic"}, "l_max_hint": 40}
//   {"kind": "table", "rule": {"type": "explicit", "counts": [[2, 2]]},
//    "output_rule": "explicit", "outputs": ["1", "1"]}
//   {"kind": "step", "name": "sdvm", "semantics": "sdvm-v1"}
//
// Counts may be JSON integers or decimal strings. Specs whose spectrum
// violates the Kraft inequality are rejected.

Machine MachineFromJson(const std::string& text);
std::string MachineToJson(const Machine& machine);  // canonical, compact

// Loads a spec file, or a built-in machine when `ref` names no file but
// matches a built-in name. Throws ConfigError otherwise.
Machine LoadMachine(const std::string& ref);

}  // namespace algothermo
