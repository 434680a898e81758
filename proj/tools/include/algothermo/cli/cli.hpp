#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "algothermo/errors.hpp"

namespace algothermo::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitResource = 3;
inline constexpr int kExitDomain = 4;
inline constexpr int kExitUnsolvable = 5;

// Default precision comes from this variable when --precision is absent.
inline constexpr const char* kPrecisionEnv = "ALGOTHERMO_PRECISION";

int ExitCode(ErrorKind kind);

// Runs one command line (args exclude the program name). The report goes to
// `out`, or atomically to the --out file. Failures print a single JSON line
// {"error": kind, "message": ...} to `err`.
int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Writes `content` to a sibling temp file, then renames it over `path`.
void WriteAtomically(const std::filesystem::path& path, const std::string& content);

}  // namespace algothermo::cli
