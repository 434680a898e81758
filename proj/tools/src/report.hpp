#pragma once

#include <optional>
#include <string>

#include <gmpxx.h>
#include <nlohmann/json.hpp>

#include "algothermo/enumerate.hpp"
#include "algothermo/interval.hpp"
#include "algothermo/machine.hpp"

namespace algothermo::cli {

using Json = nlohmann::ordered_json;

struct HeaderInfo {
  std::string command;
  const Machine* machine = nullptr;
  std::string machine_ref;
  std::optional<Precision> precision;
  std::optional<std::uint64_t> seed;
  std::optional<Schedule> schedule;
  Json params = Json::object();
};

// Reproducibility header: tool version, machine identity, precision, seed,
// schedule and the effective command parameters.
Json Header(const HeaderInfo& info);

// {"lo": "...", "hi": "..."} with outward-rounded decimals.
Json IntervalJson(const Interval& x);
Json OptionalIntervalJson(const std::optional<Interval>& x);

// Exact decimal for terminating rationals, else 20 significant digits
// rounded toward zero.
std::string RationalDecimal(const mpq_class& q);

// Rational as "a/b" plus its decimal rendering.
Json RationalJson(const mpq_class& q);

std::string Dump(const Json& j);  // pretty, newline terminated

}  // namespace algothermo::cli
