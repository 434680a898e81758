#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <new>
#include <sstream>
#include <unistd.h>

#include "CLI11.hpp"
#include "algothermo/channel.hpp"
#include "algothermo/checkpoint.hpp"
#include "algothermo/cli/cli.hpp"
#include "algothermo/complexity.hpp"
#include "algothermo/decimal.hpp"
#include "algothermo/ensemble.hpp"
#include "algothermo/machine_io.hpp"
#include "algothermo/rational.hpp"
#include "algothermo/sdvm.hpp"
#include "algothermo/thermo.hpp"
#include "algothermo/version.hpp"
#include "report.hpp"

namespace algothermo::cli {
namespace {

struct Common {
  std::string machine;
  std::size_t precision = 128;
  std::string out;
};

struct ScheduleFlags {
  std::string fuel_cap;
  std::string max_programs;

  Schedule Get() const {
    Schedule s;
    if (!fuel_cap.empty()) s.fuel_cap = ParseCount(fuel_cap);
    if (!max_programs.empty()) s.max_programs_per_round = ParseCount(max_programs);
    if (s.fuel_cap < 1) throw ConfigError("--fuel-cap must be at least 1");
    if (s.max_programs_per_round < 1) throw ConfigError("--max-programs must be at least 1");
    return s;
  }
};

std::size_t DefaultPrecision() {
  const char* env = std::getenv(kPrecisionEnv);
  if (env == nullptr || *env == '\0') return 128;
  const unsigned long long p = ParseCount(env);
  if (p < 16 || p > 65536) {
    throw ConfigError(std::string(kPrecisionEnv) + " must lie in 16..65536");
  }
  return static_cast<std::size_t>(p);
}

Precision CheckedPrecision(std::size_t bits) {
  if (bits < 16 || bits > 65536) throw ConfigError("--precision must lie in 16..65536");
  return Precision{bits};
}

void AddCommon(CLI::App* sub, Common& c, bool needs_machine) {
  auto* m = sub->add_option("--machine", c.machine, "machine spec file or built-in name");
  if (needs_machine) m->required();
  sub->add_option("--precision", c.precision, "working precision in bits");
  sub->add_option("--out", c.out, "write the report to this file (atomically)");
}

void AddSchedule(CLI::App* sub, ScheduleFlags& s) {
  sub->add_option("--fuel-cap", s.fuel_cap, "per-program fuel cap for dovetailing");
  sub->add_option("--max-programs", s.max_programs, "program budget per dovetail round");
}

std::string Bool(bool b) { return b ? "true" : "false"; }

Length ToLength(unsigned long long v, const char* flag) {
  if (v > kMaxProgramBits) {
    throw ConfigError(std::string(flag) + " exceeds the maximum program length " +
                      std::to_string(kMaxProgramBits));
  }
  return static_cast<Length>(v);
}

const TableMachine& RequireTable(const Machine& m, const char* command) {
  if (!m.is_table()) throw ConfigError(std::string(command) + " needs a table machine");
  return m.table();
}

Json RecordJson(const HaltRecord& r) {
  return {{"index", r.index},
          {"round", r.discovered_at},
          {"length", r.program.size()},
          {"bits", r.program.str()},
          {"steps", r.steps},
          {"output", r.output.str()}};
}

// machines -----------------------------------------------------------------

std::string Machines(const Common& c) {
  std::vector<std::pair<std::string, Machine>> list;
  if (c.machine.empty()) {
    for (const std::string& name : BuiltinMachineNames()) list.emplace_back(name, BuiltinMachine(name));
  } else {
    list.emplace_back(c.machine, LoadMachine(c.machine));
  }
  Json out;
  out["header"] = Header({"machines", nullptr, "", std::nullopt, std::nullopt, std::nullopt,
                          {{"machine", c.machine.empty() ? Json(nullptr) : Json(c.machine)}}});
  Json arr = Json::array();
  for (const auto& [ref, m] : list) {
    Json e;
    e["ref"] = ref;
    e["name"] = m.name();
    e["kind"] = m.is_table() ? "table" : "step";
    e["hash"] = m.IdentityHex();
    e["spec"] = Json::parse(MachineToJson(m));
    if (m.is_table()) {
      const TableMachine& t = m.table();
      const Length shown = std::min<Length>(t.MaxLength().value_or(24), 24);
      Json spectrum = Json::array();
      for (Length l = 0; l <= shown; ++l) {
        const mpz_class count = t.SpectrumCount(l);
        if (sgn(count) > 0) spectrum.push_back({{"length", l}, {"count", count.get_str()}});
      }
      e["spectrum"] = spectrum;
      e["spectrum_through"] = shown;
      e["kraft_partial"] = RationalJson(t.KraftPartial(shown));
      e["max_length"] = t.MaxLength() ? Json(*t.MaxLength()) : Json(nullptr);
    } else {
      e["semantics"] = sdvm::kSemanticsVersion;
      e["literal_constant"] = sdvm::kLiteralConstant;
    }
    arr.push_back(std::move(e));
  }
  out["machines"] = arr;
  return Dump(out);
}

// enumerate ----------------------------------------------------------------

struct EnumerateFlags {
  unsigned rounds = 0;
  std::string checkpoint;
  bool no_records = false;
};

std::string Enumerate(const Common& c, const ScheduleFlags& sf, const EnumerateFlags& f) {
  if (f.rounds < 1) throw ConfigError("--rounds must be at least 1");
  const Machine m = LoadMachine(c.machine);
  Schedule schedule = sf.Get();
  std::optional<Dovetailer> d;
  std::uint32_t resumed_from = 0;
  if (!f.checkpoint.empty() && std::filesystem::exists(f.checkpoint)) {
    const Checkpoint cp = LoadCheckpoint(f.checkpoint);
    if ((!sf.fuel_cap.empty() || !sf.max_programs.empty()) && !(cp.schedule == schedule)) {
      throw ConfigError("schedule flags differ from the checkpoint's schedule");
    }
    schedule = cp.schedule;
    d.emplace(ResumeDovetailer(m, cp));
    resumed_from = cp.last_round;
  } else {
    d.emplace(m, schedule);
  }
  while (d->completed_rounds() < f.rounds) {
    d->RunRound();
    if (!f.checkpoint.empty()) SaveCheckpoint(f.checkpoint, MakeCheckpoint(*d));
  }
  const auto& records = d->records();
  const auto kraft = KraftPartialSums(records);
  const auto violation = VerifyPrefixFree(records);

  Json out;
  out["header"] = Header({"enumerate", &m, c.machine, std::nullopt, std::nullopt, schedule,
                          {{"rounds", f.rounds},
                           {"checkpoint", f.checkpoint.empty() ? Json(nullptr) : Json(f.checkpoint)}}});
  out["resumed_from_round"] = resumed_from;
  out["completed_rounds"] = d->completed_rounds();
  out["count"] = records.size();
  out["kraft_sum"] = RationalJson(kraft.empty() ? mpq_class(0) : kraft.back());
  out["prefix_free"] = !violation.has_value();
  if (violation) {
    out["prefix_violation"] = {violation->first.str(), violation->second.str()};
  }
  if (!f.no_records) {
    Json arr = Json::array();
    for (const HaltRecord& r : records) arr.push_back(RecordJson(r));
    out["records"] = arr;
  }
  return Dump(out);
}

// sweep ----------------------------------------------------------------------

struct SweepFlags {
  std::string t_grid;
  std::string q_grid;
  unsigned cutoff = 40;
};

std::string Sweep(const Common& c, const ScheduleFlags& sf, const SweepFlags& f) {
  const Machine m = LoadMachine(c.machine);
  const Precision p = CheckedPrecision(c.precision);
  const Schedule schedule = sf.Get();
  const std::vector<mpq_class> temps = ParseGrid(f.t_grid);
  std::vector<mpq_class> moments;
  if (!f.q_grid.empty()) moments = ParseGrid(f.q_grid);
  for (const mpq_class& q : moments) {
    if (sgn(q) < 0) throw ConfigError("moments Q must be nonnegative");
  }
  const Length cutoff = ToLength(f.cutoff, "--cutoff");
  const std::vector<ThermoRow> rows = algothermo::Sweep(m, temps, moments, p, cutoff, schedule);

  Json t_list = Json::array(), q_list = Json::array();
  for (const auto& t : temps) t_list.push_back(FormatRational(t));
  for (const auto& q : moments) q_list.push_back(FormatRational(q));
  const Json header = Header({"sweep", &m, c.machine, p, std::nullopt,
                              m.is_table() ? std::optional<Schedule>() : schedule,
                              {{"t_grid", t_list}, {"q_grid", q_list}, {"cutoff", cutoff}}});
  std::ostringstream csv;
  csv << "# " << header.dump() << "\n";
  csv << "T,n,Z_lo,Z_hi,F_lo,F_hi,E_lo,E_hi,S_lo,S_hi,C_lo,C_hi,tail_bounded";
  for (const auto& q : moments) {
    const std::string tag = FormatRational(q);
    csv << ",W_" << tag << "_lo,W_" << tag << "_hi";
  }
  csv << "\n";
  std::vector<std::string> errors;
  for (const ThermoRow& r : rows) {
    csv << RationalDecimal(r.temperature) << "," << r.n.get_str();
    const auto [zlo, zhi] = RenderInterval(r.Z);
    csv << "," << zlo << "," << zhi;
    for (const Interval* x : {&r.F, &r.E, &r.S, &r.C}) {
      if (r.error) {
        csv << ",,";
      } else {
        const auto [lo, hi] = RenderInterval(*x);
        csv << "," << lo << "," << hi;
      }
    }
    csv << "," << Bool(r.tail_bounded);
    for (std::size_t i = 0; i < moments.size(); ++i) {
      if (r.error || i >= r.W.size()) {
        csv << ",,";
      } else {
        const auto [lo, hi] = RenderInterval(r.W[i].second);
        csv << "," << lo << "," << hi;
      }
    }
    csv << "\n";
    if (r.error) errors.push_back("# error T=" + FormatRational(r.temperature) + ": " + *r.error);
  }
  for (const std::string& e : errors) csv << e << "\n";
  return csv.str();
}

// solve-temp -----------------------------------------------------------------

std::string SolveTemp(const Common& c, const std::string& target) {
  const Machine m = LoadMachine(c.machine);
  const TableMachine& t = RequireTable(m, "solve-temp");
  const Precision p = CheckedPrecision(c.precision);
  const mpq_class q = ParseRational(target);
  const TemperatureSolution s = SolveTemperature(t, q, p);
  Json out;
  out["header"] = Header({"solve-temp", &m, c.machine, p, std::nullopt, std::nullopt,
                          {{"target", FormatRational(q)}}});
  out["target"] = RationalJson(q);
  out["T"] = IntervalJson(s.T);
  out["T_width_log2"] = s.T.IsPoint() ? Json(nullptr) : Json(s.T.Width().FloorLog2());
  out["Z"] = IntervalJson(s.Z);
  out["Z_at_T_lo"] = IntervalJson(s.Z_at_lo);
  out["Z_at_T_hi"] = IntervalJson(s.Z_at_hi);
  out["bisection_steps"] = s.bisection_steps;
  return Dump(out);
}

// probe-divergence -----------------------------------------------------------

struct ProbeFlags {
  std::string temperature;
  std::string weight = "1";
  unsigned max_cutoff = 64;
  std::string threshold;
  bool normalized = false;
  bool stop = false;
};

std::string Probe(const Common& c, const ScheduleFlags& sf, const ProbeFlags& f) {
  const Machine m = LoadMachine(c.machine);
  ProbeOptions o;
  o.precision = CheckedPrecision(c.precision);
  o.schedule = sf.Get();
  o.max_cutoff = ToLength(f.max_cutoff, "--max-cutoff");
  o.normalized = f.normalized;
  o.stop_at_threshold = f.stop;
  if (!f.threshold.empty()) o.threshold = ParseRational(f.threshold);
  const mpq_class temp = ParseRational(f.temperature);
  const Weight w = ParseWeight(f.weight);
  const ProbeResult r = DivergenceProbe(m, temp, w, o);

  Json out;
  out["header"] = Header({"probe-divergence", &m, c.machine, o.precision, std::nullopt,
                          m.is_table() ? std::optional<Schedule>() : o.schedule,
                          {{"temperature", FormatRational(temp)},
                           {"weight", w.Name()},
                           {"max_cutoff", o.max_cutoff},
                           {"threshold", o.threshold ? Json(FormatRational(*o.threshold)) : Json(nullptr)},
                           {"normalized", o.normalized},
                           {"stop_at_threshold", o.stop_at_threshold}}});
  out["saturated"] = r.saturated;
  out["first_exceeding"] = r.first_exceeding ? Json(*r.first_exceeding) : Json(nullptr);
  Json rows = Json::array();
  for (const ProbeRow& row : r.rows) {
    rows.push_back({{"cutoff", row.cutoff},
                    {"n", row.n.get_str()},
                    {"sum", IntervalJson(row.sum)},
                    {"Z", IntervalJson(row.z)},
                    {"normalized", OptionalIntervalJson(row.normalized)}});
  }
  out["rows"] = rows;
  return Dump(out);
}

// complexity -----------------------------------------------------------------

struct ComplexityFlags {
  std::string target_hex;
  std::string target_bits;
  unsigned lmax = 20;
  std::string fuel = "10000";
  std::string budget;
  std::string profile;
};

Json ComplexityJson(const Machine& m, const ComplexityResult& r) {
  Json j;
  j["exact"] = r.exact;
  j["H"] = r.exact ? Json(r.value) : Json(nullptr);
  j["lower_bound"] = r.value;
  if (r.witness) {
    const RunResult check = m.Run(*r.witness, std::max<std::uint64_t>(r.fuel, 1));
    j["witness"] = r.witness->str();
    j["witness_steps"] = r.witness_steps;
    j["witness_verified"] = check.halted() && check.output == r.target;
  } else {
    j["witness"] = nullptr;
  }
  j["fuel_conditional"] = r.fuel_conditional;
  j["beyond_domain"] = r.beyond_domain;
  return j;
}

std::string Complexity(const Common& c, const ComplexityFlags& f) {
  const Machine m = LoadMachine(c.machine);
  const Precision p = CheckedPrecision(c.precision);
  if (f.target_hex.empty() == f.target_bits.empty()) {
    throw ConfigError("give exactly one of --target-hex and --target-bits");
  }
  const BitString s = f.target_hex.empty() ? BitString::FromString(f.target_bits)
                                           : BitString::FromSentinelHex(f.target_hex);
  const Length lmax = ToLength(f.lmax, "--lmax");
  const std::uint64_t fuel = ParseCount(f.fuel);
  const std::size_t budget = f.budget.empty() ? kDefaultSearchBudget : ParseCount(f.budget);

  const ComplexityResult h = ProgramSizeComplexity(m, s, lmax, fuel, budget);
  const ProbabilityResult pr = AlgorithmicProbability(m, s, lmax, fuel, p, budget);

  Json out;
  out["header"] = Header({"complexity", &m, c.machine, p, std::nullopt, std::nullopt,
                          {{"target_hex", s.ToSentinelHex()},
                           {"lmax", lmax},
                           {"fuel", fuel},
                           {"budget", budget},
                           {"profile", f.profile.empty() ? Json(nullptr) : Json(f.profile)}}});
  out["target"] = {{"bits", s.str()}, {"hex", s.ToSentinelHex()}, {"length", s.size()}};
  out["complexity"] = ComplexityJson(m, h);
  out["probability"] = {{"found", RationalJson(pr.found)},
                        {"bounds", IntervalJson(pr.bounds)},
                        {"exact", pr.exact},
                        {"programs", pr.programs}};
  if (h.exact) {
    mpq_class w(1);
    mpq_div_2exp(w.get_mpq_t(), w.get_mpq_t(), h.value);
    out["shortest_weight_below_probability"] = w <= pr.found;
  }
  if (!m.is_table() && !s.empty()) {
    out["literal_bound"] = {{"constant", sdvm::kLiteralConstant},
                            {"value", static_cast<double>(s.size()) +
                                          2 * std::log2(static_cast<double>(s.size())) +
                                          sdvm::kLiteralConstant}};
  }
  if (!f.profile.empty()) {
    std::vector<std::size_t> grid;
    for (const mpq_class& n : ParseGrid(f.profile)) {
      if (n.get_den() != 1 || sgn(n) <= 0) throw ConfigError("--profile needs positive integers");
      grid.push_back(n.get_num().get_ui());
    }
    Json rows = Json::array();
    for (const ProfileRow& row : CompressionProfile(m, s, grid, lmax, fuel, budget)) {
      rows.push_back({{"n", row.n},
                      {"complexity", ComplexityJson(m, row.complexity)},
                      {"ratio_lo", RationalJson(row.ratio_lo)},
                      {"ratio_hi", row.ratio_hi ? RationalJson(*row.ratio_hi) : Json(nullptr)}});
    }
    out["profile"] = rows;
  }
  return Dump(out);
}

// ensemble -------------------------------------------------------------------

struct EnsembleFlags {
  unsigned n = 0;
  unsigned l = 0;
  unsigned delta_l = 0;
  std::string mc_samples = "0";
  std::uint64_t seed = 42;
  std::string shard_size;
  std::string cell_limit;
};

Json MassTable(const std::map<Length, Interval>& masses) {
  Json arr = Json::array();
  for (const auto& [l, m] : masses) arr.push_back({{"length", l}, {"mass", IntervalJson(m)}});
  return arr;
}

std::string Ensemble(const Common& c, const EnsembleFlags& f, std::vector<std::string>& warnings) {
  const Machine m = LoadMachine(c.machine);
  const TableMachine& t = RequireTable(m, "ensemble");
  const Precision p = CheckedPrecision(c.precision);
  if (f.n < 2) throw ConfigError("--N must be at least 2");
  const Length L = ToLength(f.l, "--L");
  const Length dl = ToLength(f.delta_l, "--deltaL");
  const std::uint64_t samples = ParseCount(f.mc_samples);
  ChannelConfig cc;
  cc.N = f.n;
  cc.L = L;
  cc.delta_l = dl;
  cc.samples = samples;
  cc.seed = f.seed;
  if (!f.shard_size.empty()) cc.shard_size = ParseCount(f.shard_size);
  const std::size_t cell_limit =
      f.cell_limit.empty() ? std::size_t{1} << 24 : static_cast<std::size_t>(ParseCount(f.cell_limit));

  const Spectrum spectrum = Spectrum::FromTable(t, L + 1 + dl);
  const EnsembleTable table(spectrum, f.n, L + 1, dl, cell_limit);
  const DeviationReport dev = MicroCanonicalDeviation(table, L, f.n, p);

  Json out;
  Json params = {{"N", f.n}, {"L", L}, {"deltaL", dl}, {"mc_samples", samples}};
  if (samples > 0) params["shard_size"] = cc.shard_size;
  out["header"] = Header({"ensemble", &m, c.machine, p, f.seed, std::nullopt, params});
  out["theta"] = {{"n_max", table.n_max()},
                  {"l_max", table.l_max()},
                  {"delta_l", table.delta_l()},
                  {"digest", table.Digest()},
                  {"value", table.Theta(L, f.n).get_str()}};
  out["S"] = IntervalJson(dev.state.S);
  out["inverse_temperature"] = IntervalJson(dev.state.inverse_temperature);
  out["T"] = OptionalIntervalJson(dev.state.temperature);
  out["infinite_temperature"] = dev.state.infinite_temperature;
  Json r = Json::array();
  for (const auto& [l, mass] : dev.micro.mass) {
    r.push_back({{"length", l},
                 {"codewords", spectrum.count(l).get_str()},
                 {"mass", RationalJson(mass)},
                 {"per_codeword", RationalJson(dev.micro.per_codeword.at(l))}});
  }
  out["R"] = r;
  out["mean_length"] = RationalJson(dev.micro.mean_length);
  out["energy_identity"] = dev.energy_identity;
  out["canonical"] = {{"beta", IntervalJson(dev.beta_energy)},
                      {"T", OptionalIntervalJson(dev.temperature_energy)},
                      {"masses", MassTable(dev.canonical_energy)},
                      {"max_deviation", IntervalJson(dev.max_deviation_energy)}};
  out["canonical_micro"] = {{"masses", MassTable(dev.canonical_micro)},
                            {"max_deviation", IntervalJson(dev.max_deviation_micro)}};
  out["S_first"] = OptionalIntervalJson(dev.S_first);
  out["free_energy"] = OptionalIntervalJson(dev.free_energy);
  out["additivity_residual"] = IntervalJson(AdditivityResidual(table, L, f.n, p));
  if (samples > 0) {
    const ChannelResult ch = SimulateChannel(t, cc);
    Json first = Json::array();
    for (const auto& [l, count] : ch.first_length) {
      first.push_back({{"length", l},
                       {"count", count},
                       {"fraction", static_cast<double>(count) / static_cast<double>(ch.accepted)}});
    }
    out["monte_carlo"] = {{"generator", kChannelGenerator},
                          {"generator_version", kChannelGeneratorVersion},
                          {"seed", f.seed},
                          {"samples", ch.samples},
                          {"shard_size", cc.shard_size},
                          {"shards", ch.shards},
                          {"parsed", ch.parsed},
                          {"accepted", ch.accepted},
                          {"acceptance_rate", ch.acceptance_rate()},
                          {"zero_acceptance", ch.zero_acceptance()},
                          {"prefix_10", ch.prefix_10},
                          {"first_length", first}};
    if (ch.zero_acceptance()) {
      warnings.push_back("zero acceptance: no sample fell in the length window");
    }
  } else {
    out["monte_carlo"] = nullptr;
  }
  out["warnings"] = warnings;
  return Dump(out);
}

// entropy-partial ------------------------------------------------------------

struct EntropyFlags {
  unsigned cutoff = 16;
  std::string weighting = "probability";
  std::string fuel = "65536";
};

std::string EntropyPartial(const Common& c, const EntropyFlags& f) {
  const Machine m = LoadMachine(c.machine);
  const Precision p = CheckedPrecision(c.precision);
  EntropyWeighting w;
  if (f.weighting == "probability") {
    w = EntropyWeighting::kProbability;
  } else if (f.weighting == "shortest") {
    w = EntropyWeighting::kShortest;
  } else {
    throw ConfigError("--weighting must be 'probability' or 'shortest'");
  }
  const std::uint64_t fuel = ParseCount(f.fuel);
  if (fuel < 1) throw ConfigError("--fuel must be at least 1");
  const Length cutoff = ToLength(f.cutoff, "--cutoff");
  const auto rows = ShannonPartial(m, w, cutoff, p, fuel);
  Json out;
  out["header"] = Header({"entropy-partial", &m, c.machine, p, std::nullopt, std::nullopt,
                          {{"cutoff", cutoff}, {"weighting", f.weighting}, {"fuel", fuel}}});
  Json arr = Json::array();
  for (const EntropyPartialRow& r : rows) {
    arr.push_back({{"cutoff", r.cutoff},
                   {"outputs", r.outputs.get_str()},
                   {"partial", IntervalJson(r.partial)},
                   {"lower_bound", ToDecimal(r.partial.lo(), 20, Rounding::kDown)}});
  }
  out["rows"] = arr;
  return Dump(out);
}

void PrintError(std::ostream& err, const std::string& kind, const std::string& message) {
  err << Json{{"error", kind}, {"message", message}}.dump() << "\n";
}

}  // namespace

int ExitCode(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kConfig:
      return kExitConfig;
    case ErrorKind::kResource:
      return kExitResource;
    case ErrorKind::kDomain:
      return kExitDomain;
    case ErrorKind::kUnsolvable:
      return kExitUnsolvable;
  }
  return kExitInternal;
}

void WriteAtomically(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw ConfigError("cannot write " + tmp.string());
    f << content;
    f.flush();
    if (!f) throw ResourceError("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw ConfigError("cannot rename onto " + path.string() + ": " + ec.message());
  }
}

int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Algorithmic thermodynamics at desk scale", "algothermo"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  Common common;
  ScheduleFlags sched;
  EnumerateFlags ef;
  SweepFlags sf;
  std::string target;
  ProbeFlags pf;
  ComplexityFlags cf;
  EnsembleFlags nf;
  EntropyFlags hf;
  std::function<std::string()> action;
  std::vector<std::string> warnings;

  try {
    common.precision = DefaultPrecision();
  } catch (const Error& e) {
    PrintError(err, ToString(e.kind()), e.what());
    return ExitCode(e.kind());
  }

  auto* machines = app.add_subcommand("machines", "list built-in machines or describe one spec");
  AddCommon(machines, common, false);
  machines->callback([&] { action = [&] { return Machines(common); }; });

  auto* enumerate = app.add_subcommand("enumerate", "dovetailed enumeration of halting programs");
  AddCommon(enumerate, common, true);
  AddSchedule(enumerate, sched);
  enumerate->add_option("--rounds", ef.rounds, "dovetail rounds")->required();
  enumerate->add_option("--checkpoint", ef.checkpoint, "checkpoint file (resumed when present)");
  enumerate->add_flag("--no-records", ef.no_records, "omit the record listing");
  enumerate->callback([&] { action = [&] { return Enumerate(common, sched, ef); }; });

  auto* sweep = app.add_subcommand("sweep", "thermodynamic quantities over a temperature grid (CSV)");
  AddCommon(sweep, common, true);
  AddSchedule(sweep, sched);
  sweep->add_option("--t-grid", sf.t_grid, "temperatures: a,b,c or start:stop:step")->required();
  sweep->add_option("--q-grid", sf.q_grid, "moments Q for W(Q, T) columns");
  sweep->add_option("--cutoff", sf.cutoff, "spectrum cutoff length, or dovetail rounds");
  sweep->callback([&] { action = [&] { return Sweep(common, sched, sf); }; });

  auto* solve = app.add_subcommand("solve-temp", "find T with Z(T) equal to a rational target");
  AddCommon(solve, common, true);
  solve->add_option("--target", target, "target value of Z")->required();
  solve->callback([&] { action = [&] { return SolveTemp(common, target); }; });

  auto* probe = app.add_subcommand("probe-divergence", "partial sums of f(|p|) 2^(-|p|/T)");
  AddCommon(probe, common, true);
  AddSchedule(probe, sched);
  probe->add_option("--temperature,-T", pf.temperature, "temperature")->required();
  probe->add_option("--weight", pf.weight, "1, l, l2 or l^Q");
  probe->add_option("--max-cutoff", pf.max_cutoff, "largest length (or round) probed");
  probe->add_option("--threshold", pf.threshold, "report the first cutoff whose lower bound exceeds this");
  probe->add_flag("--normalized", pf.normalized, "divide the sum by Z");
  probe->add_flag("--stop-at-threshold", pf.stop, "stop once the threshold is exceeded");
  probe->callback([&] { action = [&] { return Probe(common, sched, pf); }; });

  auto* complexity = app.add_subcommand("complexity", "program-size complexity and probability");
  AddCommon(complexity, common, true);
  complexity->add_option("--target-hex", cf.target_hex, "target as sentinel hex ('1' + bits)");
  complexity->add_option("--target-bits", cf.target_bits, "target as a 0/1 string");
  complexity->add_option("--lmax", cf.lmax, "longest program searched");
  complexity->add_option("--fuel", cf.fuel, "steps per program");
  complexity->add_option("--budget", cf.budget, "maximum programs run");
  complexity->add_option("--profile", cf.profile, "prefix lengths n for H(s_1..n)/n");
  complexity->callback([&] { action = [&] { return Complexity(common, cf); }; });

  auto* ensemble = app.add_subcommand("ensemble", "microcanonical ensemble and channel simulation");
  AddCommon(ensemble, common, true);
  ensemble->add_option("--N", nf.n, "number of codewords")->required();
  ensemble->add_option("--L", nf.l, "total length")->required();
  ensemble->add_option("--deltaL", nf.delta_l, "window width");
  ensemble->add_option("--mc-samples", nf.mc_samples, "channel samples (0 skips the simulation)");
  ensemble->add_option("--seed", nf.seed, "channel seed");
  ensemble->add_option("--shard-size", nf.shard_size, "samples per generator shard");
  ensemble->add_option("--cell-limit", nf.cell_limit, "largest theta table");
  ensemble->callback([&] { action = [&] { return Ensemble(common, nf, warnings); }; });

  auto* entropy = app.add_subcommand("entropy-partial", "partial Shannon entropy of the output law");
  AddCommon(entropy, common, true);
  entropy->add_option("--cutoff", hf.cutoff, "longest program length");
  entropy->add_option("--weighting", hf.weighting, "probability or shortest");
  entropy->add_option("--fuel", hf.fuel, "steps per program");
  entropy->callback([&] { action = [&] { return EntropyPartial(common, hf); }; });

  std::vector<std::string> argv;
  argv.emplace_back("algothermo");
  argv.insert(argv.end(), args.begin(), args.end());
  std::vector<const char*> cargv;
  for (const std::string& a : argv) cargv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(cargv.size()), cargv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    PrintError(err, "config", e.what());
    return kExitConfig;
  }

  try {
    const std::string report = action();
    for (const std::string& w : warnings) err << Json{{"warning", w}}.dump() << "\n";
    if (common.out.empty()) {
      out << report;
    } else {
      WriteAtomically(common.out, report);
    }
    return kExitOk;
  } catch (const Error& e) {
    PrintError(err, ToString(e.kind()), e.what());
    return ExitCode(e.kind());
  } catch (const std::bad_alloc&) {
    PrintError(err, "resource", "out of memory");
    return kExitResource;
  } catch (const std::exception& e) {
    PrintError(err, "internal", e.what());
    return kExitInternal;
  }
}

}  // namespace algothermo::cli
