#include "report.hpp"

#include "algothermo/decimal.hpp"
#include "algothermo/machine_io.hpp"
#include "algothermo/rational.hpp"
#include "algothermo/version.hpp"

namespace algothermo::cli {

Json Header(const HeaderInfo& info) {
  Json h;
  h["tool"] = "algothermo";
  h["version"] = kVersion;
  h["command"] = info.command;
  if (info.machine != nullptr) {
    h["machine"] = {{"ref", info.machine_ref},
                    {"name", info.machine->name()},
                    {"hash", info.machine->IdentityHex()},
                    {"spec", Json::parse(MachineToJson(*info.machine))}};
  } else {
    h["machine"] = nullptr;
  }
  h["precision"] = info.precision ? Json(info.precision->bits) : Json(nullptr);
  h["seed"] = info.seed ? Json(*info.seed) : Json(nullptr);
  if (info.schedule) {
    h["schedule"] = {{"fuel_cap", info.schedule->fuel_cap},
                     {"max_programs_per_round", info.schedule->max_programs_per_round}};
  } else {
    h["schedule"] = nullptr;
  }
  h["params"] = info.params;
  return h;
}

Json IntervalJson(const Interval& x) {
  const auto [lo, hi] = RenderInterval(x);
  return {{"lo", lo}, {"hi", hi}};
}

Json OptionalIntervalJson(const std::optional<Interval>& x) {
  return x ? IntervalJson(*x) : Json(nullptr);
}

std::string RationalDecimal(const mpq_class& q) {
  mpz_class den = q.get_den();
  unsigned twos = 0, fives = 0;
  while (mpz_divisible_2exp_p(den.get_mpz_t(), 1)) {
    den /= 2;
    ++twos;
  }
  while (mpz_divisible_ui_p(den.get_mpz_t(), 5)) {
    den /= 5;
    ++fives;
  }
  if (den == 1) {
    // q * 10^k is an integer for k = max(twos, fives).
    const unsigned k = std::max(twos, fives);
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, k);
    const mpz_class scaled = q.get_num() * scale / q.get_den();
    const mpz_class mag = abs(scaled);
    std::string digits = mag.get_str();
    if (k > 0) {
      if (digits.size() <= k) digits.insert(0, k - digits.size() + 1, '0');
      digits.insert(digits.size() - k, ".");
    }
    return (sgn(scaled) < 0 ? "-" : "") + digits;
  }
  return ToDecimal(Dyadic::FromRational(q, Precision{128}, sgn(q) < 0 ? Rounding::kUp : Rounding::kDown),
                   20, sgn(q) < 0 ? Rounding::kUp : Rounding::kDown);
}

Json RationalJson(const mpq_class& q) {
  return {{"exact", FormatRational(q)}, {"decimal", RationalDecimal(q)}};
}

std::string Dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace algothermo::cli
