#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "algothermo/cli/cli.hpp"
#include "algothermo/machine.hpp"

namespace algothermo::cli {
namespace {

using nlohmann::json;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome Call(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = Run(args, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path TempPath(const std::string& name) {
  return std::filesystem::temp_directory_path() /
         ("algothermo_cli_" + std::to_string(::getpid()) + "_" + name);
}

std::string Slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::vector<std::string> Lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::vector<std::string> Cells(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

TEST(Cli, SweepDyadic2Rows) {
  const Outcome o = Call({"sweep", "--machine", "dyadic2", "--t-grid", "0.25,0.5", "--precision", "128"});
  ASSERT_EQ(o.code, 0) << o.err;
  const auto lines = Lines(o.out);
  ASSERT_EQ(lines.size(), 4u);
  EXPECT_EQ(lines[0].rfind("# {", 0), 0u);
  const json header = json::parse(lines[0].substr(2));
  EXPECT_EQ(header["machine"]["hash"], BuiltinMachine("dyadic2").IdentityHex());
  EXPECT_EQ(header["precision"], 128);
  EXPECT_EQ(lines[1], "T,n,Z_lo,Z_hi,F_lo,F_hi,E_lo,E_hi,S_lo,S_hi,C_lo,C_hi,tail_bounded");
  const auto r1 = Cells(lines[2]);
  const auto r2 = Cells(lines[3]);
  ASSERT_EQ(r1.size(), 13u);
  EXPECT_EQ(r1[0], "0.25");
  EXPECT_EQ(r1[2], "0.06640625");
  EXPECT_EQ(r1[3], "0.06640625");
  EXPECT_EQ(r2[2], "0.3125");
  EXPECT_EQ(r1[12], "true");
}

TEST(Cli, SweepMomentColumnsAndFailedRows) {
  const Outcome o = Call({"sweep", "--machine", "harmonic", "--t-grid", "1/2,1", "--q-grid", "1,3/2",
                          "--cutoff", "3"});
  ASSERT_EQ(o.code, 0) << o.err;
  const auto lines = Lines(o.out);
  EXPECT_NE(lines[1].find(",tail_bounded,W_1_lo,W_1_hi,W_3/2_lo,W_3/2_hi"), std::string::npos);
  const auto row = Cells(lines[3]);
  ASSERT_EQ(row.size(), 17u);
  EXPECT_EQ(row[0], "1");
  EXPECT_TRUE(row[4].empty());
  EXPECT_TRUE(row[16].empty());
  EXPECT_EQ(lines.back().rfind("# error T=1", 0), 0u);
}

TEST(Cli, SweepFullDomainWithMoments) {
  const Outcome o = Call({"sweep", "--machine", "dyadic2", "--t-grid", "0.5", "--q-grid", "1"});
  ASSERT_EQ(o.code, 0) << o.err;
  const auto row = Cells(Lines(o.out)[2]);
  ASSERT_EQ(row.size(), 15u);
  EXPECT_EQ(row[13], "0.375");  // W(1, 1/2) = 1/4 + 2/16
  EXPECT_EQ(row[14], "0.375");
}

TEST(Cli, SolveTemp) {
  const Outcome o = Call({"solve-temp", "--machine", "dyadic2", "--target", "0.3125"});
  ASSERT_EQ(o.code, 0) << o.err;
  const json j = json::parse(o.out);
  EXPECT_LE(std::stod(j["T"]["lo"].get<std::string>()), 0.5);
  EXPECT_GE(std::stod(j["T"]["hi"].get<std::string>()), 0.5);
  EXPECT_LE(j["T_width_log2"].get<int>(), -40);
}

TEST(Cli, EnsembleReport) {
  const Outcome o = Call({"ensemble", "--machine", "dyadic2", "--N", "3", "--L", "4"});
  ASSERT_EQ(o.code, 0) << o.err;
  const json j = json::parse(o.out);
  ASSERT_EQ(j["R"].size(), 2u);
  EXPECT_EQ(j["R"][0]["length"], 1);
  EXPECT_EQ(j["R"][0]["mass"]["exact"], "2/3");
  EXPECT_EQ(j["R"][1]["mass"]["exact"], "1/3");
  EXPECT_EQ(j["theta"]["value"], "3");
  EXPECT_EQ(j["theta"]["digest"].get<std::string>().size(), 16u);
  EXPECT_TRUE(j["energy_identity"]);
  EXPECT_TRUE(j["monte_carlo"].is_null());
  EXPECT_EQ(j["header"]["seed"], 42);
}

TEST(Cli, EnsembleMonteCarloIsByteIdentical) {
  const auto a = TempPath("a.json");
  const auto b = TempPath("b.json");
  const std::vector<std::string> base = {"ensemble", "--machine", "dyadic2", "--N", "3", "--L", "4",
                                         "--mc-samples", "2e4", "--seed", "9"};
  auto args_a = base;
  args_a.insert(args_a.end(), {"--out", a.string()});
  auto args_b = base;
  args_b.insert(args_b.end(), {"--out", b.string()});
  ASSERT_EQ(Call(args_a).code, 0);
  ASSERT_EQ(Call(args_b).code, 0);
  const std::string ta = Slurp(a);
  EXPECT_EQ(ta, Slurp(b));
  const json j = json::parse(ta);
  EXPECT_EQ(j["monte_carlo"]["generator"], "mt19937_64+splitmix64-shards");
  EXPECT_EQ(j["monte_carlo"]["samples"], 20000);
  for (const auto& entry : std::filesystem::directory_iterator(a.parent_path())) {
    EXPECT_EQ(entry.path().filename().string().find(a.filename().string() + ".tmp"), std::string::npos);
  }
  std::filesystem::remove(a);
  std::filesystem::remove(b);
}

TEST(Cli, EnsembleZeroAcceptanceWarns) {
  const Outcome o = Call({"ensemble", "--machine", "dyadic2", "--N", "2", "--L", "3", "--mc-samples", "50",
                          "--seed", "1", "--shard-size", "7"});
  ASSERT_EQ(o.code, 0) << o.err;
  const json j = json::parse(o.out);
  EXPECT_EQ(j["monte_carlo"]["shards"], 8);
  if (j["monte_carlo"]["zero_acceptance"].get<bool>()) {
    EXPECT_NE(o.err.find("warning"), std::string::npos);
  }
  const Outcome far = Call({"ensemble", "--machine", "dyadic2", "--N", "40", "--L", "41", "--mc-samples",
                            "100"});
  ASSERT_EQ(far.code, 0) << far.err;
  EXPECT_TRUE(json::parse(far.out)["monte_carlo"]["zero_acceptance"]);
  EXPECT_NE(far.err.find("zero acceptance"), std::string::npos);
}

TEST(Cli, EnumerateCheckpointResume) {
  const auto cp = TempPath("cp.txt");
  std::filesystem::remove(cp);
  const Outcome first = Call({"enumerate", "--machine", "sdvm", "--rounds", "6", "--checkpoint", cp.string()});
  ASSERT_EQ(first.code, 0) << first.err;
  const std::string text = Slurp(cp);
  EXPECT_EQ(text.rfind("algothermo-checkpoint v1 machine=" + BuiltinMachine("sdvm").IdentityHex(), 0), 0u);
  EXPECT_NE(text.find("\n3,3,001,1,1\n"), std::string::npos);
  const Outcome resumed = Call({"enumerate", "--machine", "sdvm", "--rounds", "11", "--checkpoint", cp.string()});
  ASSERT_EQ(resumed.code, 0) << resumed.err;
  const Outcome straight = Call({"enumerate", "--machine", "sdvm", "--rounds", "11"});
  const json jr = json::parse(resumed.out);
  const json js = json::parse(straight.out);
  EXPECT_EQ(jr["resumed_from_round"], 6);
  EXPECT_EQ(jr["records"], js["records"]);
  EXPECT_EQ(jr["kraft_sum"], js["kraft_sum"]);
  EXPECT_TRUE(jr["prefix_free"]);
  const Outcome wrong = Call({"enumerate", "--machine", "dyadic2", "--rounds", "12", "--checkpoint", cp.string()});
  EXPECT_EQ(wrong.code, kExitConfig);
  std::filesystem::remove(cp);
}

TEST(Cli, ProbeAndEntropyPartial) {
  const Outcome p = Call({"probe-divergence", "--machine", "harmonic", "-T", "3/2", "--threshold", "1",
                          "--stop-at-threshold"});
  ASSERT_EQ(p.code, 0) << p.err;
  const json jp = json::parse(p.out);
  EXPECT_EQ(jp["first_exceeding"], 16);
  EXPECT_EQ(jp["rows"].back()["cutoff"], 16);
  const Outcome h = Call({"entropy-partial", "--machine", "dyadic2", "--cutoff", "4"});
  ASSERT_EQ(h.code, 0) << h.err;
  const json jh = json::parse(h.out);
  EXPECT_EQ(jh["rows"].back()["partial"]["lo"], "1");
}

TEST(Cli, ComplexityWitness) {
  const Outcome o = Call({"complexity", "--machine", "sdvm", "--target-hex", "5", "--lmax", "12", "--fuel",
                          "100"});  // "01"
  ASSERT_EQ(o.code, 0) << o.err;
  const json j = json::parse(o.out);
  EXPECT_EQ(j["target"]["bits"], "01");
  EXPECT_TRUE(j["complexity"]["exact"]);
  EXPECT_TRUE(j["complexity"]["witness_verified"]);
  EXPECT_TRUE(j["shortest_weight_below_probability"]);
  const Outcome d = Call({"complexity", "--machine", "dyadic2", "--target-bits", "1", "--lmax", "4",
                          "--profile", "1"});
  ASSERT_EQ(d.code, 0) << d.err;
  const json jd = json::parse(d.out);
  EXPECT_EQ(jd["complexity"]["H"], 2);
  EXPECT_EQ(jd["complexity"]["witness"], "10");
  EXPECT_EQ(jd["profile"][0]["ratio_lo"]["exact"], "2");
}

TEST(Cli, MachinesAndSpecFiles) {
  const Outcome all = Call({"machines"});
  ASSERT_EQ(all.code, 0);
  EXPECT_EQ(json::parse(all.out)["machines"].size(), 4u);
  const auto spec = TempPath("spec.json");
  {
    std::ofstream f(spec);
    f << R"({"kind":"table","name":"three","rule":{"type":"explicit","counts":[[1,1],[2,1],[3,1]]}})";
  }
  const Outcome one = Call({"machines", "--machine", spec.string()});
  ASSERT_EQ(one.code, 0) << one.err;
  const json j = json::parse(one.out);
  EXPECT_EQ(j["machines"][0]["name"], "three");
  EXPECT_EQ(j["machines"][0]["kraft_partial"]["exact"], "7/8");
  const Outcome sweep = Call({"sweep", "--machine", spec.string(), "--t-grid", "1"});
  ASSERT_EQ(sweep.code, 0);
  EXPECT_EQ(Cells(Lines(sweep.out)[2])[2], "0.875");
  std::filesystem::remove(spec);
}

TEST(Cli, ExitCodes) {
  auto single_line_error = [](const Outcome& o, const std::string& kind) {
    const auto lines = Lines(o.err);
    ASSERT_EQ(lines.size(), 1u) << o.err;
    const json j = json::parse(lines[0]);
    EXPECT_EQ(j["error"], kind);
    EXPECT_TRUE(j["message"].is_string());
  };
  const Outcome missing = Call({"sweep", "--machine", "nope", "--t-grid", "1"});
  EXPECT_EQ(missing.code, kExitConfig);
  single_line_error(missing, "config");
  const Outcome bad_flag = Call({"sweep", "--bogus"});
  EXPECT_EQ(bad_flag.code, kExitConfig);
  single_line_error(bad_flag, "config");
  EXPECT_EQ(Call({}).code, kExitConfig);
  const Outcome big = Call({"ensemble", "--machine", "dyadic2", "--N", "300", "--L", "400", "--cell-limit", "100"});
  EXPECT_EQ(big.code, kExitResource);
  single_line_error(big, "resource");
  // Lengths {1, 3}: theta(3, 2) = theta(5, 2) = 0, so dS/dL is undefined at L = 4.
  const auto gap = TempPath("gap.json");
  {
    std::ofstream f(gap);
    f << R"({"kind":"table","rule":{"type":"explicit","counts":[[1,1],[3,1]]}})";
  }
  const Outcome domain = Call({"ensemble", "--machine", gap.string(), "--N", "2", "--L", "4"});
  std::filesystem::remove(gap);
  EXPECT_EQ(domain.code, kExitDomain);
  single_line_error(domain, "numeric-domain");
  const Outcome unsolvable = Call({"ensemble", "--machine", "dyadic2", "--N", "3", "--L", "3"});
  EXPECT_EQ(unsolvable.code, kExitUnsolvable);
  single_line_error(unsolvable, "unsolvable");
  EXPECT_EQ(Call({"solve-temp", "--machine", "dyadic2", "--target", "0.9"}).code, kExitUnsolvable);
  EXPECT_EQ(Call({"solve-temp", "--machine", "sdvm", "--target", "0.1"}).code, kExitConfig);
  EXPECT_EQ(Call({"--help"}).code, kExitOk);
}

TEST(Cli, PrecisionFromEnvironment) {
  ::setenv(kPrecisionEnv, "64", 1);
  const Outcome o = Call({"sweep", "--machine", "dyadic2", "--t-grid", "1/3"});
  const Outcome flag = Call({"sweep", "--machine", "dyadic2", "--t-grid", "1/3", "--precision", "96"});
  ::setenv(kPrecisionEnv, "junk", 1);
  const Outcome bad = Call({"machines"});
  ::unsetenv(kPrecisionEnv);
  ASSERT_EQ(o.code, 0);
  EXPECT_EQ(json::parse(Lines(o.out)[0].substr(2))["precision"], 64);
  EXPECT_EQ(json::parse(Lines(flag.out)[0].substr(2))["precision"], 96);
  EXPECT_EQ(bad.code, kExitConfig);
}

}  // namespace
}  // namespace algothermo::cli
