#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "usc_rabi/csv.hpp"

using usc_rabi::read_text_file;
using usc_rabi::write_text_file;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code = -1;
  std::string out;
  std::string err;
};

fs::path fresh_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("usc_rabi_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

Outcome run_cli(const std::string& args, const fs::path& dir, const std::string& env = {}) {
  const fs::path out = dir / "stdout.txt", err = dir / "stderr.txt";
  const std::string cmd = env + (env.empty() ? "" : " ") + "\"" + USC_RABI_CLI + "\" " + args +
                          " > \"" + out.string() + "\" 2> \"" + err.string() + "\"";
  const int status = std::system(cmd.c_str());
  Outcome o;
  o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  o.out = read_text_file(out.string());
  o.err = read_text_file(err.string());
  return o;
}

std::string write_scenario(const fs::path& dir, const std::string& text) {
  const fs::path p = dir / "case.scenario";
  write_text_file(p.string(), text);
  return "\"" + p.string() + "\"";
}

const char* kEffective =
    "kind = \"effective_compare\"\n"
    "[effective]\n"
    "theta_over_pi = 0.25\n"
    "g_over_omega_q = [0.01, 0.03]\n"
    "n_max = 8\n";

}  // namespace

TEST(Cli, MisspelledKeyIsParseErrorQuotingTheLine) {
  const fs::path dir = fresh_dir("parse");
  const std::string f = write_scenario(dir,
                                       "kind = \"rabi_dynamics\"\n"
                                       "[pulse]\n"
                                       "ampltude = 0.087\n");
  const Outcome o = run_cli("run " + f + " --out \"" + (dir / "out").string() + "\"", dir);
  EXPECT_EQ(o.code, 2);
  EXPECT_NE(o.err.find("line 3"), std::string::npos) << o.err;
  EXPECT_NE(o.err.find("ampltude = 0.087"), std::string::npos) << o.err;
}

TEST(Cli, UnknownSubcommandIsParseError) {
  const fs::path dir = fresh_dir("usage");
  EXPECT_EQ(run_cli("frobnicate", dir).code, 2);
}

TEST(Cli, OutOfRangeIsValidationError) {
  const fs::path dir = fresh_dir("validation");
  const std::string f = write_scenario(dir,
                                       "kind = \"spectrum_sweep\"\n"
                                       "[system]\n"
                                       "n_max = 6\n"
                                       "kappa_over_omega1 = -1\n"
                                       "[sweep]\n"
                                       "omega_q_lo_ghz = 7.8\n"
                                       "omega_q_hi_ghz = 8.15\n");
  const Outcome o = run_cli("run " + f, dir);
  EXPECT_EQ(o.code, 3) << o.err;
  EXPECT_NE(o.err.find("\"class\":\"validation\""), std::string::npos) << o.err;
}

TEST(Cli, BoundaryMinimumIsNumericError) {
  const fs::path dir = fresh_dir("numeric");
  const std::string f = write_scenario(dir,
                                       "kind = \"rabi_dynamics\"\n"
                                       "[system]\n"
                                       "n_max = 8\n"
                                       "[resonance]\n"
                                       "photons = 2\n"
                                       "omega_q_lo_ghz = 8.5\n"
                                       "omega_q_hi_ghz = 8.8\n");
  const Outcome o = run_cli("run " + f + " --out \"" + (dir / "out").string() + "\"", dir);
  EXPECT_EQ(o.code, 4) << o.err;
}

TEST(Cli, FailedGateIsInvariantBreachWithArtifacts) {
  const fs::path dir = fresh_dir("breach");
  const std::string f = write_scenario(dir, std::string(kEffective) +
                                                "[convergence]\n"
                                                "tolerance = 1e-300\n");
  const fs::path out = dir / "out";
  const Outcome o = run_cli("run " + f + " --out \"" + out.string() + "\"", dir);
  EXPECT_EQ(o.code, 5) << o.err;
  EXPECT_TRUE(fs::exists(out / "comparison.csv"));
  ASSERT_TRUE(fs::exists(out / "manifest.json"));
  const auto m = nlohmann::json::parse(read_text_file((out / "manifest.json").string()));
  EXPECT_FALSE(m["convergence"]["passed"]);
}

TEST(Cli, SelftestPasses) {
  const fs::path dir = fresh_dir("selftest");
  const Outcome o = run_cli("selftest", dir);
  EXPECT_EQ(o.code, 0) << o.out << o.err;
  EXPECT_NE(o.out.find("selftest passed"), std::string::npos);
  EXPECT_EQ(o.out.find("FAIL"), std::string::npos);
}

TEST(Cli, RunsAreByteIdenticalAcrossThreadCounts) {
  const fs::path dir = fresh_dir("determinism");
  const std::string f = write_scenario(dir, kEffective);
  const fs::path a = dir / "a", b = dir / "b";
  ASSERT_EQ(run_cli("run " + f + " --out \"" + a.string() + "\"", dir, "USC_RABI_THREADS=1").code,
            0);
  ASSERT_EQ(run_cli("run " + f + " --out \"" + b.string() + "\"", dir, "USC_RABI_THREADS=4").code,
            0);
  EXPECT_EQ(read_text_file((a / "comparison.csv").string()),
            read_text_file((b / "comparison.csv").string()));
}

TEST(Cli, ManifestReproducesRun) {
  const fs::path dir = fresh_dir("manifest");
  const std::string f = write_scenario(dir, kEffective);
  const fs::path a = dir / "a", b = dir / "b";
  ASSERT_EQ(run_cli("run " + f + " --out \"" + a.string() + "\" --nmax 10", dir).code, 0);
  const Outcome o = run_cli(
      "run \"" + (a / "manifest.json").string() + "\" --out \"" + b.string() + "\"", dir);
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_EQ(read_text_file((a / "comparison.csv").string()),
            read_text_file((b / "comparison.csv").string()));
  const auto m = nlohmann::json::parse(read_text_file((b / "manifest.json").string()));
  EXPECT_EQ(m["nmax_override"], 10);
}

TEST(Cli, ConvergePassesAndFailsAtTinyCutoff) {
  const fs::path dir = fresh_dir("converge");
  const std::string f = write_scenario(dir, kEffective);
  const Outcome good = run_cli("converge " + f, dir);
  EXPECT_EQ(good.code, 0) << good.out << good.err;
  EXPECT_NE(good.out.find("PASS"), std::string::npos);
  const Outcome bad = run_cli("converge " + f + " --nmax 2", dir);
  EXPECT_EQ(bad.code, 5) << bad.out << bad.err;
  EXPECT_NE(bad.out.find("FAIL"), std::string::npos);
}

TEST(Cli, BadThreadCountIsValidationError) {
  const fs::path dir = fresh_dir("threads");
  const std::string f = write_scenario(dir, kEffective);
  const Outcome o = run_cli("run " + f + " --out \"" + (dir / "out").string() + "\"", dir,
                            "USC_RABI_THREADS=lots");
  EXPECT_EQ(o.code, 3) << o.err;
}

TEST(Cli, MissingFileFails) {
  const fs::path dir = fresh_dir("missing");
  const Outcome o = run_cli("run \"" + (dir / "nope.scenario").string() + "\"", dir);
  EXPECT_NE(o.code, 0);
  EXPECT_NE(o.err.find("nope.scenario"), std::string::npos) << o.err;
}
