#include "usc_rabi/scenario.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "usc_rabi/config_file.hpp"
#include "usc_rabi/errors.hpp"

namespace usc_rabi {

namespace {

struct KindName {
  ScenarioKind kind;
  const char* name;
};

constexpr KindName kKinds[] = {
    {ScenarioKind::spectrum_sweep, "spectrum_sweep"},
    {ScenarioKind::rabi_dynamics, "rabi_dynamics"},
    {ScenarioKind::dephasing_study, "dephasing_study"},
    {ScenarioKind::effective_compare, "effective_compare"},
    {ScenarioKind::ghz_protocol, "ghz_protocol"},
    {ScenarioKind::convergence_check, "convergence_check"},
};

template <typename F>
auto as_validation(F&& f) {
  try {
    return f();
  } catch (const std::invalid_argument& e) {
    throw ValidationError(e.what());
  }
}

void read_system(ConfigReader& r, SystemConfig& s) {
  r.allow_table("system");
  s.qubit.delta_ghz = r.number("system.delta_ghz", s.qubit.delta_ghz);
  s.qubit.ip2_na = r.number("system.ip2_na", s.qubit.ip2_na);
  s.qubit.flux_offset = r.number("system.flux_offset_phi0", s.qubit.flux_offset);
  s.resonator.omega1_ghz = r.number("system.omega1_ghz", s.resonator.omega1_ghz);
  const std::string geom = r.string("system.geometry", to_string(s.resonator.geometry));
  s.resonator.geometry = as_validation([&] { return geometry_from_string(geom); });
  s.resonator.n_max = r.integer("system.n_max", s.resonator.n_max);
  s.coupling.g1 = r.number("system.g1_over_omega1", s.coupling.g1);
  s.coupling.rwa = r.boolean("system.rwa", s.coupling.rwa);
  s.dissipation.kappa = r.number("system.kappa_over_omega1", 0.0);
  s.dissipation.gamma = r.number("system.gamma_over_omega1", 0.0);
  s.dissipation.gamma_phi = r.number("system.gamma_phi_over_omega1", 0.0);
}

void read_sweep(ConfigReader& r, SpectrumScenario& sp) {
  r.allow_table("sweep");
  sp.omega_q_lo_ghz = r.number("sweep.omega_q_lo_ghz");
  sp.omega_q_hi_ghz = r.number("sweep.omega_q_hi_ghz");
  sp.options.points = r.integer("sweep.points", sp.options.points);
  sp.options.n_levels = r.integer("sweep.n_levels", sp.options.n_levels);
  sp.options.densify = r.integer("sweep.densify", sp.options.densify);
  sp.options.crossing_gap = r.number("sweep.crossing_gap_over_omega1", sp.options.crossing_gap);
  const std::vector<std::string> models = r.strings("sweep.models", {"full", "jc"});
  sp.models.clear();
  for (const std::string& m : models) {
    sp.models.push_back(as_validation([&] { return model_tag_from_string(m); }));
  }
}

void read_dynamics(ConfigReader& r, DynamicsScenario& d) {
  r.allow_table("resonance");
  d.resonance.photons = r.integer("resonance.photons", d.resonance.photons);
  d.resonance.omega_q_lo_ghz = r.number("resonance.omega_q_lo_ghz");
  d.resonance.omega_q_hi_ghz = r.number("resonance.omega_q_hi_ghz");

  r.allow_table("pulse");
  d.pulse.area_over_pi = r.number("pulse.area_over_pi", d.pulse.area_over_pi);
  d.pulse.tau = r.number("pulse.tau_omega1", d.pulse.tau);
  d.pulse.calibrate = r.boolean("pulse.calibrate", d.pulse.calibrate);
  d.pulse.tau_scan = r.numbers("pulse.tau_scan_omega1", d.pulse.tau_scan);
  d.pulse.t0_over_tau = r.number("pulse.t0_over_tau", d.pulse.t0_over_tau);

  r.allow_table("run");
  d.run.duration_periods = r.number("run.duration_periods", d.run.duration_periods);
  d.run.samples = r.integer("run.samples", d.run.samples);
}

void read_effective(ConfigReader& r, Scenario& s) {
  r.allow_table("effective");
  s.effective.theta = r.number("effective.theta_over_pi") * std::numbers::pi;
  s.effective.g_over_omega_q = r.numbers("effective.g_over_omega_q");
  s.effective.omega_r_lo = r.number("effective.omega_r_lo_over_omega_q", s.effective.omega_r_lo);
  s.effective.omega_r_hi = r.number("effective.omega_r_hi_over_omega_q", s.effective.omega_r_hi);
  s.system.resonator.n_max = r.integer("effective.n_max", s.system.resonator.n_max);
}

void read_ghz(ConfigReader& r, GhzScenario& g) {
  GhzConfig& c = g.config;
  const std::string t = "protocol.ghz";
  r.allow_table("protocol");
  r.allow_table(t);
  c.resonator.omega1_ghz = r.number(t + ".omega1_ghz", c.resonator.omega1_ghz);
  c.resonator.n_max = r.integer(t + ".n_max", c.resonator.n_max);
  c.pulse_tau = r.number(t + ".pulse_tau_omega1", c.pulse_tau);
  c.samples_per_segment = r.integer(t + ".samples_per_segment", c.samples_per_segment);
  g.dissipation = r.boolean(t + ".dissipation", g.dissipation);
  c.dissipation.kappa = r.number(t + ".kappa_over_omega1", 0.0);
  c.dissipation.gamma = r.number(t + ".gamma_over_omega1", 0.0);
  c.dissipation.gamma_phi = r.number(t + ".gamma_phi_over_omega1", 0.0);
  for (int q = 0; q < 3; ++q) {
    const std::string qt = t + ".qubit" + std::to_string(q + 1);
    GhzQubit& gq = c.qubits[q];
    r.allow_table(qt);
    gq.qubit.delta_ghz = r.number(qt + ".delta_ghz", gq.qubit.delta_ghz);
    gq.qubit.ip2_na = r.number(qt + ".ip2_na", gq.qubit.ip2_na);
    gq.g = r.number(qt + ".g_over_omega1", gq.g);
    gq.idle_ghz = r.number(qt + ".idle_ghz", gq.idle_ghz);
    const double w1 = c.resonator.omega1_ghz;
    gq.search_lo = r.number(qt + ".resonance_lo_ghz", gq.search_lo * w1) / w1;
    gq.search_hi = r.number(qt + ".resonance_hi_ghz", gq.search_hi * w1) / w1;
  }
}

void read_target(ConfigReader& r, Scenario& s) {
  switch (s.target) {
    case ScenarioKind::spectrum_sweep:
      read_system(r, s.system);
      read_sweep(r, s.spectrum);
      break;
    case ScenarioKind::rabi_dynamics:
      read_system(r, s.system);
      read_dynamics(r, s.dynamics);
      break;
    case ScenarioKind::dephasing_study:
      read_system(r, s.system);
      read_dynamics(r, s.dynamics);
      r.allow_table("dephasing");
      s.dephasing.gamma_phi_over_gamma =
          r.number("dephasing.gamma_phi_over_gamma", s.dephasing.gamma_phi_over_gamma);
      break;
    case ScenarioKind::effective_compare:
      read_effective(r, s);
      break;
    case ScenarioKind::ghz_protocol:
      read_ghz(r, s.ghz);
      break;
    case ScenarioKind::convergence_check:
      throw ParseError("convergence.target cannot be convergence_check");
  }
}

void require(bool ok, const std::string& what) {
  if (!ok) throw ValidationError(what);
}

void validate_system(const SystemConfig& s) {
  require(s.qubit.delta_ghz > 0.0, "system.delta_ghz must be > 0");
  require(s.qubit.ip2_na > 0.0, "system.ip2_na must be > 0");
  require(s.resonator.omega1_ghz > 0.0, "system.omega1_ghz must be > 0");
  require(s.resonator.n_max >= 1 && s.resonator.n_max <= 80, "system.n_max must be in [1, 80]");
  require(s.coupling.g1 >= 0.0 && s.coupling.g1 <= 2.0, "system.g1_over_omega1 must be in [0, 2]");
  require(s.dissipation.kappa >= 0.0, "system.kappa_over_omega1 must be >= 0");
  require(s.dissipation.gamma >= 0.0, "system.gamma_over_omega1 must be >= 0");
  require(s.dissipation.gamma_phi >= 0.0, "system.gamma_phi_over_omega1 must be >= 0");
}

void validate_window(double lo, double hi, const QubitParams& q, const std::string& where) {
  require(hi > lo, where + ": upper bound must exceed lower bound");
  require(lo >= q.delta_ghz, where + ": qubit frequency cannot go below delta_ghz");
}

}  // namespace

std::string to_string(ScenarioKind k) {
  for (const KindName& kn : kKinds) {
    if (kn.kind == k) return kn.name;
  }
  return "?";
}

ScenarioKind scenario_kind_from_string(const std::string& s) {
  for (const KindName& kn : kKinds) {
    if (s == kn.name) return kn.kind;
  }
  throw ParseError("unknown scenario kind '" + s + "'");
}

int Scenario::n_max() const {
  return target == ScenarioKind::ghz_protocol ? ghz.config.resonator.n_max
                                              : system.resonator.n_max;
}

int Scenario::n_max_check() const {
  if (convergence.n_max_check > 0) return convergence.n_max_check;
  return n_max() + (target == ScenarioKind::ghz_protocol ? 4 : 5);
}

void override_n_max(Scenario& s, int n_max) {
  if (s.target == ScenarioKind::ghz_protocol) {
    s.ghz.config.resonator.n_max = n_max;
  } else {
    s.system.resonator.n_max = n_max;
  }
}

void validate(const Scenario& s) {
  switch (s.target) {
    case ScenarioKind::spectrum_sweep: {
      validate_system(s.system);
      const SpectrumScenario& sp = s.spectrum;
      validate_window(sp.omega_q_lo_ghz, sp.omega_q_hi_ghz, s.system.qubit, "sweep");
      require(sp.options.points >= 2, "sweep.points must be >= 2");
      require(sp.options.n_levels >= 1 && sp.options.n_levels <= 2 * (s.system.resonator.n_max + 1) - 1,
              "sweep.n_levels must be in [1, dim - 1]");
      require(sp.options.densify >= 1, "sweep.densify must be >= 1");
      require(sp.options.crossing_gap > 0.0, "sweep.crossing_gap_over_omega1 must be > 0");
      require(!sp.models.empty(), "sweep.models must not be empty");
      break;
    }
    case ScenarioKind::rabi_dynamics:
    case ScenarioKind::dephasing_study: {
      validate_system(s.system);
      const DynamicsScenario& d = s.dynamics;
      validate_window(d.resonance.omega_q_lo_ghz, d.resonance.omega_q_hi_ghz, s.system.qubit,
                      "resonance");
      require(d.resonance.photons >= 1 && d.resonance.photons <= 5,
              "resonance.photons must be in [1, 5]");
      require(d.pulse.area_over_pi > 0.0, "pulse.area_over_pi must be > 0");
      require(d.pulse.tau > 0.0, "pulse.tau_omega1 must be > 0");
      require(d.pulse.t0_over_tau >= 0.0, "pulse.t0_over_tau must be >= 0");
      require(!d.pulse.tau_scan.empty(), "pulse.tau_scan_omega1 must not be empty");
      for (double t : d.pulse.tau_scan) require(t > 0.0, "pulse.tau_scan_omega1 entries must be > 0");
      require(d.run.duration_periods > 0.0, "run.duration_periods must be > 0");
      require(d.run.samples >= 2, "run.samples must be >= 2");
      if (s.target == ScenarioKind::dephasing_study) {
        require(s.dephasing.gamma_phi_over_gamma >= 0.0,
                "dephasing.gamma_phi_over_gamma must be >= 0");
        require(s.system.dissipation.gamma > 0.0,
                "dephasing study needs system.gamma_over_omega1 > 0");
      }
      break;
    }
    case ScenarioKind::effective_compare: {
      const EffectiveScenario& e = s.effective;
      require(e.theta > 0.0 && e.theta < std::numbers::pi / 2,
              "effective.theta_over_pi must be in (0, 0.5)");
      require(!e.g_over_omega_q.empty(), "effective.g_over_omega_q must not be empty");
      for (double g : e.g_over_omega_q) {
        require(g > 0.0 && g <= 0.3, "effective.g_over_omega_q entries must be in (0, 0.3]");
      }
      require(e.omega_r_lo > 0.0 && e.omega_r_hi > e.omega_r_lo,
              "effective: need 0 < omega_r_lo < omega_r_hi");
      require(s.system.resonator.n_max >= 2 && s.system.resonator.n_max <= 80,
              "effective.n_max must be in [2, 80]");
      break;
    }
    case ScenarioKind::ghz_protocol:
      validate(s.ghz.config);
      break;
    case ScenarioKind::convergence_check:
      throw ValidationError("convergence target missing");
  }
  require(s.convergence.tolerance > 0.0, "convergence.tolerance must be > 0");
  require(s.convergence.n_max_check == 0 || s.convergence.n_max_check > s.n_max(),
          "convergence.n_max_check must exceed the scenario cutoff");
}

Scenario parse_scenario(const std::string& text) {
  const ConfigDocument doc = ConfigDocument::parse(text);
  ConfigReader r(doc);
  Scenario s;
  s.source = text;
  if (!r.has("kind")) throw ParseError("missing required key 'kind'");
  s.kind = scenario_kind_from_string(r.string("kind"));
  s.name = r.string("name", "");
  r.allow_table("convergence");
  if (s.kind == ScenarioKind::convergence_check) {
    if (!r.has("convergence.target")) throw ParseError("missing required key 'convergence.target'");
    s.target = scenario_kind_from_string(r.string("convergence.target"));
  } else {
    s.target = s.kind;
  }
  read_target(r, s);
  s.convergence.gate = r.boolean("convergence.gate", s.convergence.gate);
  s.convergence.n_max_check = r.integer("convergence.n_max_check", 0);
  s.convergence.tolerance = r.number("convergence.tolerance", s.convergence.tolerance);
  r.finish();
  validate(s);
  return s;
}

Scenario load_scenario(const std::string& path) {
  const ConfigDocument doc = ConfigDocument::parse_file(path);
  return parse_scenario(doc.source());
}

}  // namespace usc_rabi
