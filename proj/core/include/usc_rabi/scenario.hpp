#pragma once

// Typed scenario files. Keys carry their units in the name (`_ghz`,
// `_over_omega1`, `_omega1` for times in 1/omega_1); unknown keys and type
// mismatches are ParseErrors, out-of-range values are ValidationErrors.

#include <optional>
#include <string>
#include <vector>

#include "usc_rabi/experiments.hpp"
#include "usc_rabi/model.hpp"
#include "usc_rabi/protocols.hpp"
#include "usc_rabi/sweeps.hpp"

namespace usc_rabi {

enum class ScenarioKind {
  spectrum_sweep,
  rabi_dynamics,
  dephasing_study,
  effective_compare,
  ghz_protocol,
  convergence_check
};

std::string to_string(ScenarioKind k);
/// Throws ParseError on an unknown name.
ScenarioKind scenario_kind_from_string(const std::string& s);

struct SpectrumScenario {
  double omega_q_lo_ghz = 0.0;
  double omega_q_hi_ghz = 0.0;
  std::vector<ModelTag> models = {ModelTag::full, ModelTag::jc};
  SweepOptions options;
};

struct ResonanceSearch {
  int photons = 2;
  double omega_q_lo_ghz = 0.0;
  double omega_q_hi_ghz = 0.0;
};

struct DynamicsScenario {
  ResonanceSearch resonance;
  PulseSettings pulse;
  RunLength run;
};

struct DephasingScenario {
  double gamma_phi_over_gamma = 300.0;
};

struct EffectiveScenario {
  double theta = 0.0;
  std::vector<double> g_over_omega_q;
  double omega_r_lo = 0.45;  ///< units of omega_q
  double omega_r_hi = 0.55;
};

struct GhzScenario {
  GhzConfig config;
  bool dissipation = false;
};

struct ConvergenceSettings {
  bool gate = true;
  int n_max_check = 0;  ///< 0: n_max + 5 (n_max + 4 for the GHZ model)
  double tolerance = 1e-6;
};

struct Scenario {
  ScenarioKind kind = ScenarioKind::rabi_dynamics;
  /// What a convergence_check scenario checks; equals kind otherwise.
  ScenarioKind target = ScenarioKind::rabi_dynamics;
  std::string name;
  SystemConfig system;
  SpectrumScenario spectrum;
  DynamicsScenario dynamics;
  DephasingScenario dephasing;
  EffectiveScenario effective;
  GhzScenario ghz;
  ConvergenceSettings convergence;
  std::string source;  ///< the file text as parsed

  int n_max() const;
  /// n_max used by the truncation gate.
  int n_max_check() const;
};

Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::string& path);

/// Replaces the Fock cutoff of whichever model the scenario runs.
void override_n_max(Scenario& s, int n_max);

/// Range checks; throws ValidationError. parse_scenario already calls it.
void validate(const Scenario& s);

}  // namespace usc_rabi
