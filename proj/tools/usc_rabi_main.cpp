#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "usc_rabi/csv.hpp"
#include "usc_rabi/errors.hpp"
#include "usc_rabi/parallel.hpp"
#include "usc_rabi/runner.hpp"
#include "usc_rabi/selftest.hpp"

using namespace usc_rabi;

namespace {

enum Exit { kOk = 0, kFailure = 1, kParse = 2, kValidation = 3, kNumeric = 4, kInvariant = 5 };

int report_error(const char* cls, int code, const std::string& msg, int line = 0,
                 const std::string& text = {}) {
  std::cerr << "usc-rabi: " << cls << " error: " << msg << "\n";
  nlohmann::ordered_json j;
  j["status"] = "error";
  j["class"] = cls;
  j["exit_code"] = code;
  j["message"] = msg;
  if (line > 0) {
    j["line"] = line;
    j["text"] = text;
  }
  std::cerr << j.dump() << "\n";
  return code;
}

template <typename F>
int guarded(F&& f) {
  try {
    return f();
  } catch (const ParseError& e) {
    return report_error("parse", kParse, e.what(), e.line(), e.text());
  } catch (const ValidationError& e) {
    return report_error("validation", kValidation, e.what());
  } catch (const std::invalid_argument& e) {
    return report_error("validation", kValidation, e.what());
  } catch (const NumericError& e) {
    return report_error("numeric", kNumeric, e.what());
  } catch (const InvariantBreach& e) {
    return report_error("invariant", kInvariant, e.what());
  } catch (const std::exception& e) {
    return report_error("runtime", kFailure, e.what());
  }
}

std::string short_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

void print_convergence(const ConvergenceReport& c) {
  std::cout << "convergence n_max " << c.n_max << " vs " << c.n_max_check << "\n";
  for (const auto& [name, d] : c.drifts) {
    std::cout << "  " << name << " drift " << short_num(d) << "\n";
  }
  std::cout << "  max drift " << short_num(c.max_drift) << " (tolerance "
            << short_num(c.tolerance) << ") " << (c.passed ? "PASS" : "FAIL") << "\n";
}

int cmd_run(const std::string& file, const std::string& out, std::optional<int> nmax) {
  const RunInput in = load_run_input(file);
  RunOptions opt;
  opt.out_dir = out;
  opt.n_max = nmax ? nmax : in.n_max;
  opt.threads = thread_count();
  const RunResult res = run_scenario(in.scenario, opt);
  std::cout << res.kind << " finished in " << short_num(res.wall_time_s) << " s\n";
  for (const std::string& a : res.artifacts) std::cout << "  wrote " << out << "/" << a << "\n";
  std::cout << "  wrote " << out << "/manifest.json\n";
  if (res.convergence) print_convergence(*res.convergence);
  if (!res.ok()) {
    for (const std::string& b : res.breaches) std::cerr << "breach: " << b << "\n";
    return report_error("invariant", kInvariant,
                        std::to_string(res.breaches.size()) + " check(s) breached");
  }
  return kOk;
}

int cmd_selftest() {
  const std::vector<OracleResult> rs = run_selftest();
  for (const OracleResult& r : rs) {
    std::cout << (r.pass ? "PASS " : "FAIL ") << r.name << " deviation " << short_num(r.deviation)
              << " tolerance " << short_num(r.tolerance);
    if (!r.detail.empty()) std::cout << "  [" << r.detail << "]";
    std::cout << "\n";
  }
  const bool ok = all_pass(rs);
  std::cout << (ok ? "selftest passed" : "selftest FAILED") << "\n";
  return ok ? kOk : kInvariant;
}

int cmd_converge(const std::string& file, std::optional<int> nmax) {
  const RunInput in = load_run_input(file);
  const ConvergenceReport c = converge(in.scenario, nmax ? nmax : in.n_max, thread_count());
  print_convergence(c);
  return c.passed ? kOk : kInvariant;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"usc-rabi: multiphoton vacuum Rabi oscillations in ultrastrong-coupling circuit QED"};
  app.require_subcommand(1);

  std::string run_file, run_out = ".";
  std::optional<int> run_nmax;
  CLI::App* run = app.add_subcommand("run", "Run a scenario file (or a manifest.json)");
  run->add_option("file", run_file, "Scenario file")->required();
  run->add_option("--out", run_out, "Output directory");
  run->add_option("--nmax", run_nmax, "Override the Fock cutoff")->check(CLI::Range(1, 80));

  app.add_subcommand("selftest", "Run the analytic oracle suite");

  std::string conv_file;
  std::optional<int> conv_nmax;
  CLI::App* conv = app.add_subcommand("converge", "Truncation convergence check at n_max and n_max+5");
  conv->add_option("file", conv_file, "Scenario file")->required();
  conv->add_option("--nmax", conv_nmax, "Override the Fock cutoff")->check(CLI::Range(1, 80));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kParse;
  }

  if (*run) return guarded([&] { return cmd_run(run_file, run_out, run_nmax); });
  if (app.got_subcommand("selftest")) return guarded([&] { return cmd_selftest(); });
  return guarded([&] { return cmd_converge(conv_file, conv_nmax); });
}
