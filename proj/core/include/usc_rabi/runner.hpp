#pragma once

// Scenario execution: dispatch on kind, write artifacts and manifest.json,
// and the truncation convergence gate.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "usc_rabi/scenario.hpp"

namespace usc_rabi {

struct RunOptions {
  std::string out_dir = ".";
  std::optional<int> n_max;  ///< overrides the scenario's Fock cutoff
  int threads = 0;           ///< 0: USC_RABI_THREADS or hardware concurrency
};

struct ConvergenceReport {
  int n_max = 0;
  int n_max_check = 0;
  double tolerance = 1e-6;
  std::vector<std::pair<std::string, double>> drifts;  ///< per headline observable
  double max_drift = 0.0;
  bool passed = false;
};

struct RunResult {
  std::string kind;
  std::vector<std::string> artifacts;  ///< file names inside out_dir
  std::vector<std::string> breaches;   ///< invariant and gate failures
  std::optional<ConvergenceReport> convergence;
  double wall_time_s = 0.0;

  bool ok() const { return breaches.empty(); }
};

/// Runs the scenario and writes its artifacts plus manifest.json into
/// opt.out_dir (created if needed). Breaches are reported, not thrown, so the
/// artifacts exist even when the run fails its checks.
RunResult run_scenario(Scenario s, const RunOptions& opt);

/// Reruns the headline observables at n_max and n_max_check with identical
/// controls (resonance, pulse, schedule) found at the larger cutoff for the
/// dynamics kinds, and at the scenario cutoff otherwise.
ConvergenceReport converge(Scenario s, std::optional<int> n_max = std::nullopt, int threads = 0);

/// A scenario file, or a manifest.json written by run_scenario. The manifest
/// carries the scenario text and the cutoff override of the original run.
struct RunInput {
  Scenario scenario;
  std::optional<int> n_max;
  bool from_manifest = false;
};

RunInput load_run_input(const std::string& path);

}  // namespace usc_rabi
