#include "algothermo/machine_io.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "algothermo/errors.hpp"
#include "algothermo/interval.hpp"
#include "algothermo/rational.hpp"
#include "algothermo/sdvm.hpp"

namespace algothermo {
namespace {

using nlohmann::json;

mpz_class CountFromJson(const json& v) {
  if (v.is_number_unsigned()) return mpz_class(std::to_string(v.get<std::uint64_t>()), 10);
  if (v.is_number_integer()) {
    const auto i = v.get<std::int64_t>();
    if (i < 0) throw ConfigError("negative codeword count");
    return mpz_class(std::to_string(i), 10);
  }
  if (v.is_string()) {
    mpz_class z;
    if (z.set_str(v.get<std::string>(), 10) != 0 || sgn(z) < 0) {
      throw ConfigError("bad codeword count '" + v.get<std::string>() + "'");
    }
    return z;
  }
  throw ConfigError("codeword count must be an integer or decimal string");
}

json CountToJson(const mpz_class& c) {
  if (c.fits_ulong_p()) return json(static_cast<std::uint64_t>(c.get_ui()));
  return json(c.get_str());
}

// Closed-form Kraft check for geometric rules, in interval arithmetic:
// sum_{l >= l0} c_l 2^-l <= sum_{l >= l0} x^l = x^l0 / (1 - x), x = 2^(beta - 1).
void CheckGeometricKraft(const GeometricSpectrum& g) {
  if (sgn(g.beta) < 0 || g.beta >= 1) throw ConfigError("geometric beta must lie in [0, 1)");
  const Precision p{64};
  const Interval x = Exp2(Interval::FromRational(g.beta - 1, p));
  const Interval bound =
      Power(x, mpq_class(g.min_length)) / (Interval(Dyadic(1), p) - x);
  if (bound.hi() > Dyadic(1)) {
    throw ConfigError("geometric spectrum violates the Kraft inequality (closed-form bound " +
                      std::to_string(bound.hi().ToDouble()) + " > 1)");
  }
}

Machine TableFromJson(const json& j) {
  const std::string name = j.value("name", std::string("table"));
  if (!j.contains("rule") || !j["rule"].is_object()) throw ConfigError("table machine needs a rule");
  const json& r = j["rule"];
  const std::string type = r.value("type", std::string());
  SpectrumRule rule;
  if (type == "explicit") {
    ExplicitSpectrum e;
    if (!r.contains("counts") || !r["counts"].is_array()) {
      throw ConfigError("explicit rule needs a counts array of [length, count] pairs");
    }
    for (const json& pair : r["counts"]) {
      if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number_integer()) {
        throw ConfigError("explicit counts entries must be [length, count]");
      }
      const auto l = pair[0].get<std::int64_t>();
      if (l < 0) throw ConfigError("negative codeword length");
      e.counts.emplace_back(static_cast<Length>(l), CountFromJson(pair[1]));
    }
    rule = std::move(e);
  } else if (type == "geometric") {
    GeometricSpectrum g;
    const json& b = r.at("beta");
    g.beta = b.is_string() ? ParseRational(b.get<std::string>())
                           : ParseRational(b.dump());
    g.min_length = r.value("min_length", Length{1});
    CheckGeometricKraft(g);
    rule = g;
  } else if (type == "harmonic") {
    rule = HarmonicSpectrum{};
  } else {
    throw ConfigError("unknown spectrum rule type '" + type + "'");
  }

  OutputRule output_rule = OutputRule::kIndex;
  std::vector<BitString> outputs;
  const std::string out = j.value("output_rule", std::string("index"));
  if (out == "explicit") {
    output_rule = OutputRule::kExplicit;
    for (const json& o : j.at("outputs")) outputs.push_back(BitString::FromString(o.get<std::string>()));
  } else if (out != "index") {
    throw ConfigError("unknown output_rule '" + out + "'");
  }
  std::optional<Length> hint;
  if (j.contains("l_max_hint") && !j["l_max_hint"].is_null()) hint = j["l_max_hint"].get<Length>();

  TableMachine machine(name, std::move(rule), output_rule, std::move(outputs), hint);
  if (const auto v = machine.KraftViolation()) {
    throw ConfigError("spectrum violates the Kraft inequality at length " + std::to_string(*v));
  }
  return machine;
}

}  // namespace

Machine MachineFromJson(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("machine spec is not valid JSON: ") + e.what());
  }
  try {
    const std::string kind = j.value("kind", std::string());
    if (kind == "table") return TableFromJson(j);
    if (kind == "step") {
      const std::string semantics = j.value("semantics", std::string(sdvm::kSemanticsVersion));
      if (semantics != sdvm::kSemanticsVersion) {
        throw ConfigError("unsupported step-machine semantics '" + semantics + "'");
      }
      return StepMachine(j.value("name", std::string("sdvm")));
    }
    throw ConfigError("machine kind must be \"table\" or \"step\"");
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad machine spec: ") + e.what());
  }
}

std::string MachineToJson(const Machine& machine) {
  json j;
  j["name"] = machine.name();
  if (!machine.is_table()) {
    j["kind"] = "step";
    j["semantics"] = sdvm::kSemanticsVersion;
    return j.dump();
  }
  const TableMachine& t = machine.table();
  j["kind"] = "table";
  json rule;
  std::visit(
      [&rule](const auto& r) {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, ExplicitSpectrum>) {
          rule["type"] = "explicit";
          json counts = json::array();
          for (const auto& [l, c] : r.counts) counts.push_back(json::array({l, CountToJson(c)}));
          rule["counts"] = counts;
        } else if constexpr (std::is_same_v<T, GeometricSpectrum>) {
          rule["type"] = "geometric";
          rule["beta"] = FormatRational(r.beta);
          rule["min_length"] = r.min_length;
        } else {
          rule["type"] = "harmonic";
        }
      },
      t.rule());
  j["rule"] = rule;
  if (t.output_rule() == OutputRule::kExplicit) {
    j["output_rule"] = "explicit";
    json outs = json::array();
    for (const BitString& o : t.explicit_outputs()) outs.push_back(o.str());
    j["outputs"] = outs;
  } else {
    j["output_rule"] = "index";
  }
  if (t.l_max_hint()) j["l_max_hint"] = *t.l_max_hint();
  return j.dump();
}

Machine LoadMachine(const std::string& ref) {
  std::error_code ec;
  if (std::filesystem::is_regular_file(ref, ec)) {
    std::ifstream in(ref);
    if (!in) throw ConfigError("cannot open machine spec '" + ref + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return MachineFromJson(buf.str());
  }
  for (const std::string& name : BuiltinMachineNames()) {
    if (name == ref) return BuiltinMachine(name);
  }
  throw ConfigError("no machine spec file or built-in machine named '" + ref + "'");
}

}  // namespace algothermo
