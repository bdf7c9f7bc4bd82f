#include "usc_rabi/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "usc_rabi/config_file.hpp"
#include "usc_rabi/csv.hpp"
#include "usc_rabi/dressed.hpp"
#include "usc_rabi/errors.hpp"
#include "usc_rabi/experiments.hpp"
#include "usc_rabi/parallel.hpp"

namespace usc_rabi {

namespace {

using Json = nlohmann::ordered_json;
namespace fs = std::filesystem;

constexpr const char* kManifestSchema = "usc-rabi/manifest/1";
constexpr int kGateLevels = 8;

Json invariants_json(const InvariantReport& r) {
  Json j;
  j["ok"] = r.ok();
  j["breaches"] = r.breaches();
  j["max_trace_error"] = r.max_trace_error;
  j["max_hermiticity_error"] = r.max_hermiticity_error;
  j["min_eigenvalue"] = r.min_eigenvalue;
  j["max_purity"] = r.max_purity;
  j["min_photon_number"] = r.min_photon_number;
  j["min_g2"] = r.min_g2;
  j["min_g3"] = r.min_g3;
  j["max_richardson_error"] = r.max_richardson_error;
  j["steps"] = r.steps;
  j["dt_omega1"] = r.dt;
  return j;
}

Json system_json(const SystemConfig& c) {
  Json j;
  j["delta_ghz"] = c.qubit.delta_ghz;
  j["ip2_na"] = c.qubit.ip2_na;
  j["flux_offset_phi0"] = c.qubit.flux_offset;
  j["omega_q_ghz"] = qubit_frequency_ghz(c.qubit);
  j["theta"] = mixing_angle(c.qubit);
  j["omega1_ghz"] = c.resonator.omega1_ghz;
  j["geometry"] = to_string(c.resonator.geometry);
  j["n_max"] = c.resonator.n_max;
  j["g1_over_omega1"] = c.coupling.g1;
  j["rwa"] = c.coupling.rwa;
  j["kappa_over_omega1"] = c.dissipation.kappa;
  j["gamma_over_omega1"] = c.dissipation.gamma;
  j["gamma_phi_over_omega1"] = c.dissipation.gamma_phi;
  return j;
}

Json units_json(double omega1_ghz, double ip2_na) {
  Json j;
  j["hbar"] = 1;
  j["frequency_unit"] = "omega1";
  j["time_unit"] = "1/omega1";
  j["omega1_ghz"] = omega1_ghz;
  j["ghz_to_natural"] = 1.0 / omega1_ghz;
  j["flux_frequency_scale_ghz_per_phi0"] = flux_frequency_scale_ghz(ip2_na);
  return j;
}

Json convergence_json(const ConvergenceReport& c) {
  Json j;
  j["n_max"] = c.n_max;
  j["n_max_check"] = c.n_max_check;
  j["tolerance"] = c.tolerance;
  j["max_drift"] = c.max_drift;
  j["passed"] = c.passed;
  Json d = Json::object();
  for (const auto& [name, v] : c.drifts) d[name] = v;
  j["drifts"] = d;
  return j;
}

void finish_report(ConvergenceReport& c) {
  c.max_drift = 0.0;
  for (const auto& [name, v] : c.drifts) {
    c.max_drift = std::max(c.max_drift, std::isfinite(v) ? v : INFINITY);
  }
  c.passed = c.max_drift <= c.tolerance;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
    d = std::max(d, std::abs(a[i] - b[i]));
  }
  return d;
}

const char* const kHeadline[] = {"photon_number", "qubit_excitation", "g2", "g3"};

void add_series_drifts(ConvergenceReport& c, const std::string& prefix, const TimeSeries& lo,
                       const TimeSeries& hi) {
  for (const char* name : kHeadline) {
    c.drifts.emplace_back(prefix + name, max_abs_diff(lo.channel(name), hi.channel(name)));
  }
}

SystemConfig with_n_max(SystemConfig c, int n) {
  c.resonator.n_max = n;
  return c;
}

// ---- spectrum ---------------------------------------------------------------

int gate_levels(const Scenario& s) { return std::min(kGateLevels, s.spectrum.options.n_levels); }

void spectrum_drift(ConvergenceReport& c, const Scenario& s, const SpectrumSweep& sw, int threads) {
  const int levels = gate_levels(s);
  const SpectrumSweep hi = spectrum_at(with_n_max(s.system, c.n_max_check), sw.omega_q, sw.model,
                                       levels, threads);
  double d = 0.0;
  for (int p = 0; p < sw.points(); ++p) {
    for (int i = 0; i < levels; ++i) {
      d = std::max(d, std::abs(sw.transitions(p, i) - hi.transitions(p, i)));
    }
  }
  c.drifts.emplace_back("transitions_" + to_string(sw.model), d);
}

Json run_spectrum(const Scenario& s, const fs::path& out, RunResult& res,
                  ConvergenceReport* gate, int threads) {
  const SystemConfig& cfg = s.system;
  CsvTable csv({"omega_q_GHz", "level", "transition_GHz", "model", "character"});
  Json summary = Json::array();
  for (ModelTag m : s.spectrum.models) {
    const SpectrumSweep sw =
        sweep_spectrum(cfg, cfg.ghz_to_natural(s.spectrum.omega_q_lo_ghz),
                       cfg.ghz_to_natural(s.spectrum.omega_q_hi_ghz), m, s.spectrum.options);
    for (int p = 0; p < sw.points(); ++p) {
      for (int i = 0; i < sw.levels(); ++i) {
        csv.add_row({format_number(cfg.natural_to_ghz(sw.omega_q[p])), std::to_string(i + 1),
                     format_number(cfg.natural_to_ghz(sw.transitions(p, i))), to_string(m),
                     sw.character[p][i]});
      }
    }
    Json js;
    js["model"] = to_string(m);
    js["points"] = sw.points();
    js["levels"] = sw.levels();
    summary.push_back(js);
    if (gate) spectrum_drift(*gate, s, sw, threads);
  }
  csv.write((out / "spectrum.csv").string());
  res.artifacts.push_back("spectrum.csv");
  return summary;
}

// ---- dynamics ---------------------------------------------------------------

std::vector<std::string> dynamics_header(const TimeSeries& ts) {
  std::vector<std::string> h = {"t_omega1"};
  h.insert(h.end(), ts.names.begin(), ts.names.end());
  return h;
}

void write_series(const TimeSeries& ts, const fs::path& path) {
  CsvTable csv(dynamics_header(ts));
  std::vector<double> row(ts.names.size() + 1);
  for (std::size_t i = 0; i < ts.times.size(); ++i) {
    row[0] = ts.times[i];
    for (std::size_t k = 0; k < ts.names.size(); ++k) row[k + 1] = ts.values[k][i];
    csv.add_row(row);
  }
  csv.write(path.string());
}

Json sample_json(const DynamicsSummary::Sample& s) {
  return Json{{"t_omega1", s.t}, {"value", s.value}, {"g2", s.g2}, {"g3", s.g3}};
}

Json summary_json(const DynamicsSummary& d) {
  Json j;
  j["first_photon_peak"] = d.first_photon_peak ? sample_json(*d.first_photon_peak) : Json();
  Json q = Json::array();
  for (const auto& m : d.qubit_maxima) q.push_back(sample_json(m));
  j["qubit_maxima"] = q;
  j["photon_peaks"] = d.photon_peaks.size();
  j["g2_peak"] = d.g2_peak;
  j["g3_peak"] = d.g3_peak;
  j["period_omega1"] = d.period ? Json(*d.period) : Json();
  j["discernible_cycles"] = d.discernible_cycles;
  return j;
}

Json resonance_json(const SystemConfig& cfg, const ResonancePoint& r) {
  const SystemConfig tuned = tuned_config(cfg, r.omega_q);
  Json j;
  j["photons"] = r.photons;
  j["omega_q_ghz"] = cfg.natural_to_ghz(r.omega_q);
  j["omega_q_over_omega1"] = r.omega_q;
  j["flux_offset_phi0"] = tuned.qubit.flux_offset;
  j["theta"] = mixing_angle(tuned.qubit);
  j["splitting_over_omega1"] = r.splitting.gap;
  j["omega_eff_over_omega1"] = 0.5 * r.splitting.gap;
  j["levels"] = {r.splitting.lower, r.splitting.upper};
  j["drive_freq_over_omega1"] = r.drive_freq;
  j["population_period_omega1"] = r.population_period;
  return j;
}

Json pulse_json(const PulseSpec& p, const PulseSettings& ps,
                const std::vector<CalibrationPoint>& cal) {
  Json j;
  j["area_over_pi"] = ps.area_over_pi;
  j["tau_omega1"] = p.tau;
  j["calibrated"] = ps.calibrate;
  j["t0_omega1"] = p.t0;
  j["center_freq_over_omega1"] = p.center_freq;
  Json c = Json::array();
  for (const CalibrationPoint& pt : cal) {
    c.push_back({{"tau_omega1", pt.tau}, {"first_qubit_peak", pt.first_qubit_peak}});
  }
  j["calibration"] = c;
  return j;
}

ResonancePoint resonance_for(const Scenario& s, const SystemConfig& cfg) {
  const ResonanceSearch& rs = s.dynamics.resonance;
  return find_resonance(cfg, rs.photons, cfg.ghz_to_natural(rs.omega_q_lo_ghz),
                        cfg.ghz_to_natural(rs.omega_q_hi_ghz));
}

void require_fock_room(const Scenario& s) {
  if (s.dynamics.resonance.photons > s.system.resonator.n_max) {
    throw ValidationError("resonance.photons exceeds the Fock cutoff n_max = " +
                          std::to_string(s.system.resonator.n_max));
  }
}

SystemConfig dephased(const SystemConfig& c, double ratio) {
  SystemConfig d = c;
  d.dissipation.gamma_phi = ratio * c.dissipation.gamma;
  return d;
}

void collect(RunResult& res, const std::string& where, const InvariantReport& r) {
  for (const std::string& b : r.breaches()) res.breaches.push_back(where + ": " + b);
}

Json run_dynamics(const Scenario& s, const fs::path& out, RunResult& res,
                  ConvergenceReport* gate, Json& manifest, int threads) {
  require_fock_room(s);
  const ResonancePoint r = resonance_for(s, s.system);
  const RabiRun run = run_rabi_experiment(s.system, r, s.dynamics.pulse, s.dynamics.run, threads);
  manifest["pulse"] = pulse_json(run.pulse, s.dynamics.pulse, run.calibration);
  manifest["invariants"] = invariants_json(run.series.invariants);
  collect(res, "dynamics", run.series.invariants);

  Json results;
  results["resonance"] = resonance_json(s.system, r);
  results["summary"] = summary_json(run.summary);

  if (s.target == ScenarioKind::rabi_dynamics) {
    write_series(run.series, out / "dynamics.csv");
    res.artifacts.push_back("dynamics.csv");
    if (gate) {
      const TimeSeries hi =
          run_driven(with_n_max(run.config, gate->n_max_check), run.pulse, run.series.times);
      add_series_drifts(*gate, "", run.series, hi);
    }
    return results;
  }

  const SystemConfig dcfg = dephased(run.config, s.dephasing.gamma_phi_over_gamma);
  const TimeSeries ds = run_driven(dcfg, run.pulse, run.series.times);
  const DynamicsSummary dsum = summarize(ds);
  collect(res, "dephased dynamics", ds.invariants);
  InvariantReport both = run.series.invariants;
  both.merge(ds.invariants);
  manifest["invariants"] = invariants_json(both);

  write_series(ds, out / "dynamics.csv");
  write_series(run.series, out / "dynamics_reference.csv");
  res.artifacts.push_back("dynamics.csv");
  res.artifacts.push_back("dynamics_reference.csv");

  results["reference"] = results["summary"];
  results.erase("summary");
  results["gamma_phi_over_omega1"] = dcfg.dissipation.gamma_phi;
  results["dephased"] = summary_json(dsum);
  if (run.summary.period && dsum.period) {
    results["period_ratio"] = *dsum.period / *run.summary.period;
  } else {
    results["period_ratio"] = Json();
  }
  if (gate) {
    const TimeSeries hi_ref =
        run_driven(with_n_max(run.config, gate->n_max_check), run.pulse, run.series.times);
    const TimeSeries hi_deph =
        run_driven(with_n_max(dcfg, gate->n_max_check), run.pulse, run.series.times);
    add_series_drifts(*gate, "reference_", run.series, hi_ref);
    add_series_drifts(*gate, "dephased_", ds, hi_deph);
  }
  return results;
}

// ---- effective --------------------------------------------------------------

std::vector<ComparisonRow> comparison_rows(const Scenario& s, int n_max, int threads) {
  const EffectiveScenario& e = s.effective;
  return splitting_comparison(e.g_over_omega_q, e.theta, n_max, e.omega_r_lo, e.omega_r_hi,
                              threads);
}

void comparison_drift(ConvergenceReport& c, const Scenario& s,
                      const std::vector<ComparisonRow>& rows, int threads) {
  const std::vector<ComparisonRow> hi = comparison_rows(s, c.n_max_check, threads);
  double d = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) d = std::max(d, std::abs(rows[i].numeric - hi[i].numeric));
  c.drifts.emplace_back("splitting_over_omega_q", d);
}

Json run_effective(const Scenario& s, const fs::path& out, RunResult& res,
                   ConvergenceReport* gate, int threads) {
  const std::vector<ComparisonRow> rows = comparison_rows(s, s.system.resonator.n_max, threads);
  CsvTable csv({"g_over_omega_q", "analytic_over_omega_q", "numeric_over_omega_q",
                "relative_deviation", "omega_r_star_over_omega_q"});
  bool monotone = true;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const ComparisonRow& r = rows[i];
    csv.add_row(std::vector<double>{r.g_over_omega_q, r.analytic, r.numeric, r.relative_deviation,
                                    r.omega_r_star});
    if (i > 0 && std::abs(r.relative_deviation) < std::abs(rows[i - 1].relative_deviation)) {
      monotone = false;
    }
  }
  csv.write((out / "comparison.csv").string());
  res.artifacts.push_back("comparison.csv");
  if (gate) comparison_drift(*gate, s, rows, threads);
  Json j;
  j["theta"] = s.effective.theta;
  j["rows"] = rows.size();
  j["deviation_monotone_in_g"] = monotone;
  return j;
}

// ---- ghz --------------------------------------------------------------------

Json schedule_json(const GhzConfig& cfg, const Schedule& sch, const ProtocolResult& pr) {
  Json segs = Json::array();
  for (std::size_t i = 0; i < sch.segments.size(); ++i) {
    const Segment& seg = sch.segments[i];
    Json j;
    j["name"] = seg.name;
    j["duration_omega1"] = seg.duration;
    Json w = Json::array();
    for (double x : seg.omega_q) w.push_back(x * cfg.resonator.omega1_ghz);
    j["omega_q_ghz"] = w;
    j["rotation"] = seg.rotation;
    j["splitting_over_omega1"] = seg.splitting;
    if (seg.drive) {
      j["drive"] = {{"qubit", seg.drive->qubit + 1},
                    {"area", seg.drive->pulse.area},
                    {"center_freq_over_omega1", seg.drive->pulse.center_freq},
                    {"tau_omega1", seg.drive->pulse.tau},
                    {"t0_omega1", seg.drive->pulse.t0}};
    } else {
      j["drive"] = Json();
    }
    if (i < pr.snapshots.size()) {
      const SegmentSnapshot& sn = pr.snapshots[i];
      j["t_end_omega1"] = sn.t_end;
      j["fidelity"] = sn.fidelity;
      j["fidelity_phase_max"] = sn.fidelity_phase_max;
      j["vacuum_population"] = sn.vacuum_population;
      j["purity"] = sn.purity;
    }
    segs.push_back(j);
  }
  return segs;
}

GhzConfig ghz_run_config(const Scenario& s) {
  GhzConfig c = s.ghz.config;
  if (!s.ghz.dissipation) c.dissipation = Dissipation{};
  return c;
}

void ghz_drift(ConvergenceReport& c, const Scenario& s, const Schedule& sch,
               const ProtocolResult& lo) {
  GhzConfig hi_cfg = ghz_run_config(s);
  hi_cfg.resonator.n_max = c.n_max_check;
  const ProtocolResult hi = run_protocol(hi_cfg, sch, s.ghz.dissipation);
  c.drifts.emplace_back("fidelity", std::abs(lo.fidelity - hi.fidelity));
  c.drifts.emplace_back("fidelity_phase_max",
                        std::abs(lo.fidelity_phase_max - hi.fidelity_phase_max));
  c.drifts.emplace_back("vacuum_after_entangling",
                        std::abs(lo.vacuum_after_entangling - hi.vacuum_after_entangling));
}

Json run_ghz(const Scenario& s, const fs::path& out, RunResult& res, ConvergenceReport* gate,
             Json& manifest) {
  const GhzConfig cfg = ghz_run_config(s);
  const Schedule sch = ghz_schedule(cfg);
  const ProtocolResult pr = run_protocol(cfg, sch, s.ghz.dissipation);
  collect(res, "protocol", pr.invariants);
  manifest["invariants"] = invariants_json(pr.invariants);

  Json j;
  j["n_max"] = cfg.resonator.n_max;
  j["dissipation"] = s.ghz.dissipation;
  j["target"] = "(|ggg,0> + |eee,0>)/sqrt2";
  j["fidelity"] = pr.fidelity;
  j["fidelity_phase_max"] = pr.fidelity_phase_max;
  j["vacuum_after_entangling"] = pr.vacuum_after_entangling;
  j["segments"] = schedule_json(cfg, sch, pr);
  j["invariants"] = invariants_json(pr.invariants);
  std::ofstream f((out / "protocol.json").string(), std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write protocol.json");
  f << j.dump(2) << '\n';
  res.artifacts.push_back("protocol.json");
  if (gate) ghz_drift(*gate, s, sch, pr);

  Json summary;
  summary["fidelity"] = pr.fidelity;
  summary["fidelity_phase_max"] = pr.fidelity_phase_max;
  summary["vacuum_after_entangling"] = pr.vacuum_after_entangling;
  return summary;
}

Json config_snapshot(const Scenario& s) {
  if (s.target == ScenarioKind::ghz_protocol) {
    const GhzConfig& c = s.ghz.config;
    Json j;
    j["omega1_ghz"] = c.resonator.omega1_ghz;
    j["n_max"] = c.resonator.n_max;
    j["pulse_tau_omega1"] = c.pulse_tau;
    j["samples_per_segment"] = c.samples_per_segment;
    j["dissipation"] = s.ghz.dissipation;
    j["kappa_over_omega1"] = c.dissipation.kappa;
    j["gamma_over_omega1"] = c.dissipation.gamma;
    j["gamma_phi_over_omega1"] = c.dissipation.gamma_phi;
    Json qs = Json::array();
    for (const GhzQubit& q : c.qubits) {
      qs.push_back({{"delta_ghz", q.qubit.delta_ghz},
                    {"ip2_na", q.qubit.ip2_na},
                    {"g_over_omega1", q.g},
                    {"idle_ghz", q.idle_ghz},
                    {"resonance_lo_ghz", q.search_lo * c.resonator.omega1_ghz},
                    {"resonance_hi_ghz", q.search_hi * c.resonator.omega1_ghz}});
    }
    j["qubits"] = qs;
    return j;
  }
  if (s.target == ScenarioKind::effective_compare) {
    Json j;
    j["theta"] = s.effective.theta;
    j["g_over_omega_q"] = s.effective.g_over_omega_q;
    j["omega_r_lo_over_omega_q"] = s.effective.omega_r_lo;
    j["omega_r_hi_over_omega_q"] = s.effective.omega_r_hi;
    j["n_max"] = s.system.resonator.n_max;
    return j;
  }
  return system_json(s.system);
}

double omega1_of(const Scenario& s) {
  return s.target == ScenarioKind::ghz_protocol ? s.ghz.config.resonator.omega1_ghz
                                                : s.system.resonator.omega1_ghz;
}

void write_convergence_csv(const ConvergenceReport& c, const fs::path& path) {
  CsvTable csv({"observable", "n_max", "n_max_check", "drift", "tolerance", "passed"});
  for (const auto& [name, d] : c.drifts) {
    csv.add_row({name, std::to_string(c.n_max), std::to_string(c.n_max_check), format_number(d),
                 format_number(c.tolerance), d <= c.tolerance ? "true" : "false"});
  }
  csv.write(path.string());
}

ConvergenceReport new_report(const Scenario& s) {
  ConvergenceReport c;
  c.n_max = s.n_max();
  c.n_max_check = s.n_max_check();
  c.tolerance = s.convergence.tolerance;
  if (c.n_max_check <= c.n_max) {
    throw ValidationError("convergence.n_max_check must exceed n_max = " + std::to_string(c.n_max));
  }
  return c;
}

}  // namespace

ConvergenceReport converge(Scenario s, std::optional<int> n_max, int threads) {
  if (n_max) override_n_max(s, *n_max);
  ConvergenceReport c = new_report(s);
  switch (s.target) {
    case ScenarioKind::spectrum_sweep: {
      const SystemConfig& cfg = s.system;
      const std::vector<double> grid =
          linspace(cfg.ghz_to_natural(s.spectrum.omega_q_lo_ghz),
                   cfg.ghz_to_natural(s.spectrum.omega_q_hi_ghz),
                   static_cast<std::size_t>(s.spectrum.options.points));
      for (ModelTag m : s.spectrum.models) {
        spectrum_drift(c, s, spectrum_at(cfg, grid, m, gate_levels(s), threads), threads);
      }
      break;
    }
    case ScenarioKind::rabi_dynamics:
    case ScenarioKind::dephasing_study: {
      const SystemConfig hi_cfg = with_n_max(s.system, c.n_max_check);
      const ResonancePoint r = resonance_for(s, hi_cfg);
      const SystemConfig tuned_hi = tuned_config(hi_cfg, r.omega_q);
      double tau = s.dynamics.pulse.tau;
      if (s.dynamics.pulse.calibrate) {
        tau = best_tau(calibrate_tau(tuned_hi, r, s.dynamics.pulse, threads));
      }
      const PulseSpec pulse = make_pulse(s.dynamics.pulse, r, tau);
      const double t_end = pulse.t0 + s.dynamics.run.duration_periods * r.population_period;
      const std::vector<double> grid =
          linspace(0.0, t_end, static_cast<std::size_t>(s.dynamics.run.samples));
      const SystemConfig tuned_lo = with_n_max(tuned_hi, c.n_max);
      if (s.target == ScenarioKind::rabi_dynamics) {
        add_series_drifts(c, "", run_driven(tuned_lo, pulse, grid),
                          run_driven(tuned_hi, pulse, grid));
      } else {
        const double ratio = s.dephasing.gamma_phi_over_gamma;
        add_series_drifts(c, "reference_", run_driven(tuned_lo, pulse, grid),
                          run_driven(tuned_hi, pulse, grid));
        add_series_drifts(c, "dephased_", run_driven(dephased(tuned_lo, ratio), pulse, grid),
                          run_driven(dephased(tuned_hi, ratio), pulse, grid));
      }
      break;
    }
    case ScenarioKind::effective_compare:
      comparison_drift(c, s, comparison_rows(s, c.n_max, threads), threads);
      break;
    case ScenarioKind::ghz_protocol: {
      const GhzConfig cfg = ghz_run_config(s);
      const Schedule sch = ghz_schedule(cfg);
      ghz_drift(c, s, sch, run_protocol(cfg, sch, s.ghz.dissipation));
      break;
    }
    case ScenarioKind::convergence_check:
      throw ValidationError("convergence target missing");
  }
  finish_report(c);
  return c;
}

RunResult run_scenario(Scenario s, const RunOptions& opt) {
  const auto start = std::chrono::steady_clock::now();
  if (opt.n_max) {
    override_n_max(s, *opt.n_max);
    validate(s);
  }
  const int threads = opt.threads > 0 ? opt.threads : thread_count();
  const fs::path out(opt.out_dir);
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw std::runtime_error("cannot create output directory '" + opt.out_dir + "'");

  RunResult res;
  res.kind = to_string(s.kind);
  Json manifest;
  manifest["schema"] = kManifestSchema;
  manifest["kind"] = res.kind;
  manifest["name"] = s.name;
  manifest["scenario_source"] = s.source;
  manifest["nmax_override"] = opt.n_max ? Json(*opt.n_max) : Json();
  manifest["threads"] = threads;
  manifest["units"] = units_json(omega1_of(s), s.system.qubit.ip2_na);
  manifest["config"] = config_snapshot(s);
  manifest["truncation"] = {{"n_max", s.n_max()}, {"n_max_check", s.n_max_check()}};

  if (s.kind == ScenarioKind::convergence_check) {
    const ConvergenceReport c = converge(s, std::nullopt, threads);
    write_convergence_csv(c, out / "convergence.csv");
    res.artifacts.push_back("convergence.csv");
    res.convergence = c;
    manifest["results"] = convergence_json(c);
  } else {
    std::optional<ConvergenceReport> gate;
    if (s.convergence.gate) gate = new_report(s);
    ConvergenceReport* g = gate ? &*gate : nullptr;
    Json results;
    switch (s.kind) {
      case ScenarioKind::spectrum_sweep:
        results = run_spectrum(s, out, res, g, threads);
        break;
      case ScenarioKind::rabi_dynamics:
      case ScenarioKind::dephasing_study:
        results = run_dynamics(s, out, res, g, manifest, threads);
        break;
      case ScenarioKind::effective_compare:
        results = run_effective(s, out, res, g, threads);
        break;
      case ScenarioKind::ghz_protocol:
        results = run_ghz(s, out, res, g, manifest);
        break;
      case ScenarioKind::convergence_check:
        break;
    }
    manifest["results"] = results;
    if (gate) {
      finish_report(*gate);
      res.convergence = gate;
    }
  }

  if (res.convergence) {
    manifest["convergence"] = convergence_json(*res.convergence);
    if (!res.convergence->passed) {
      res.breaches.push_back("truncation drift " + format_number(res.convergence->max_drift) +
                             " exceeds " + format_number(res.convergence->tolerance) +
                             " (n_max " + std::to_string(res.convergence->n_max) + " vs " +
                             std::to_string(res.convergence->n_max_check) + ")");
    }
  } else {
    manifest["convergence"] = Json();
  }
  if (!manifest.contains("invariants")) manifest["invariants"] = Json();
  manifest["breaches"] = res.breaches;
  manifest["artifacts"] = res.artifacts;
  res.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  manifest["wall_time_s"] = res.wall_time_s;

  std::ofstream f((out / "manifest.json").string(), std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write manifest.json");
  f << manifest.dump(2) << '\n';
  return res;
}

RunInput load_run_input(const std::string& path) {
  std::string text;
  try {
    text = read_text_file(path);
  } catch (const std::runtime_error&) {
    throw ParseError("cannot open scenario file '" + path + "'");
  }
  const std::size_t first = text.find_first_not_of(" \t\r\n");
  RunInput in;
  if (first != std::string::npos && text[first] == '{') {
    Json m;
    try {
      m = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(std::string("manifest is not valid JSON: ") + e.what());
    }
    if (!m.is_object() || m.value("schema", "") != kManifestSchema ||
        !m.contains("scenario_source") || !m["scenario_source"].is_string()) {
      throw ParseError("'" + path + "' is not a usc-rabi manifest");
    }
    in.scenario = parse_scenario(m["scenario_source"].get<std::string>());
    if (m.contains("nmax_override") && m["nmax_override"].is_number_integer()) {
      in.n_max = m["nmax_override"].get<int>();
    }
    in.from_manifest = true;
  } else {
    in.scenario = parse_scenario(text);
  }
  return in;
}

}  // namespace usc_rabi
