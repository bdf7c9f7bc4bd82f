#include "usc_rabi/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "usc_rabi/dressed.hpp"
#include "usc_rabi/errors.hpp"
#include "usc_rabi/parallel.hpp"
#include "usc_rabi/peaks.hpp"

namespace usc_rabi {

SystemConfig tuned_config(const SystemConfig& cfg, double omega_q) {
  SystemConfig c = cfg;
  c.qubit = tuned_to(cfg.qubit, cfg.natural_to_ghz(omega_q));
  return c;
}

ResonancePoint find_resonance(const SystemConfig& cfg, int photons, double lo, double hi) {
  ResonancePoint r;
  r.photons = photons;
  r.splitting = minimum_splitting(cfg, photons, lo, hi);
  r.omega_q = r.splitting.x_star;
  const DressedBasis b = dressed_basis(hamiltonian_at(cfg, r.omega_q));
  r.drive_freq = 0.5 * (b.transition(r.splitting.lower) + b.transition(r.splitting.upper));
  if (!(r.splitting.gap > 0.0)) throw NumericError("find_resonance: zero splitting");
  r.population_period = 2.0 * std::numbers::pi / r.splitting.gap;
  return r;
}

PulseSpec make_pulse(const PulseSettings& ps, const ResonancePoint& r, double tau) {
  PulseSpec p;
  p.area = ps.area_over_pi * std::numbers::pi;
  p.center_freq = r.drive_freq;
  p.tau = tau;
  p.t0 = ps.t0_over_tau * tau;
  return p;
}

TimeSeries run_driven(const SystemConfig& tuned, const PulseSpec& pulse,
                      const std::vector<double>& t_grid) {
  EvolutionProblem p;
  p.basis = dressed_basis(build_rabi_hamiltonian(tuned));
  p.jumps = jump_set(p.basis, tuned.dissipation);
  p.drive = Drive{pulse, 0};
  p.rho0 = ground_state_density(p.basis);
  p.t_grid = t_grid;
  return evolve(p);
}

std::vector<CalibrationPoint> calibrate_tau(const SystemConfig& tuned, const ResonancePoint& r,
                                            const PulseSettings& ps, int threads) {
  if (ps.tau_scan.empty()) throw ValidationError("calibrate_tau: empty tau scan");
  std::vector<CalibrationPoint> out(ps.tau_scan.size());
  parallel_for(
      out.size(),
      [&](std::size_t i) {
        const double tau = ps.tau_scan[i];
        const PulseSpec pulse = make_pulse(ps, r, tau);
        const double t_end = pulse.t0 + 3.0 * tau + 0.25 * r.population_period;
        const std::size_t n = static_cast<std::size_t>(std::ceil(t_end / 0.25)) + 1;
        const TimeSeries s = run_driven(tuned, pulse, linspace(0.0, t_end, n));
        const std::vector<double>& q = s.channel("qubit_excitation");
        out[i] = {tau, *std::max_element(q.begin(), q.end())};
      },
      threads);
  return out;
}

double best_tau(const std::vector<CalibrationPoint>& scan) {
  const auto it = std::max_element(scan.begin(), scan.end(), [](const auto& a, const auto& b) {
    return a.first_qubit_peak < b.first_qubit_peak;
  });
  return it->tau;
}

DynamicsSummary summarize(const TimeSeries& s) {
  DynamicsSummary d;
  const std::vector<double>& t = s.times;
  const std::vector<double>& ph = s.channel("photon_number");
  const std::vector<double>& q = s.channel("qubit_excitation");
  const std::vector<double>& g2 = s.channel("g2");
  const std::vector<double>& g3 = s.channel("g3");
  auto at = [&](std::size_t i, const std::vector<double>& v) {
    return DynamicsSummary::Sample{t[i], v[i], g2[i], g3[i]};
  };
  for (const Peak& p : prominent_peaks(ph, 0.25)) d.photon_peaks.push_back(at(p.index, ph));
  if (!d.photon_peaks.empty()) d.first_photon_peak = d.photon_peaks.front();
  for (const Peak& p : prominent_peaks(q, 0.25)) d.qubit_maxima.push_back(at(p.index, q));
  d.g2_peak = *std::max_element(g2.begin(), g2.end());
  d.g3_peak = *std::max_element(g3.begin(), g3.end());
  if (d.photon_peaks.size() >= 3) d.period = rabi_period_estimate(t, ph, 0.25);
  d.discernible_cycles = static_cast<int>(prominent_peaks(ph, 0.10).size());
  return d;
}

RabiRun run_rabi_experiment(const SystemConfig& cfg, const ResonancePoint& r,
                            const PulseSettings& ps, const RunLength& len, int threads) {
  if (len.samples < 2) throw ValidationError("run: need at least 2 samples");
  if (!(len.duration_periods > 0.0)) throw ValidationError("run: duration must be > 0");
  RabiRun run;
  run.config = tuned_config(cfg, r.omega_q);
  run.resonance = r;
  double tau = ps.tau;
  if (ps.calibrate) {
    run.calibration = calibrate_tau(run.config, r, ps, threads);
    tau = best_tau(run.calibration);
  }
  run.pulse = make_pulse(ps, r, tau);
  const double t_end = run.pulse.t0 + len.duration_periods * r.population_period;
  run.series = run_driven(run.config, run.pulse,
                          linspace(0.0, t_end, static_cast<std::size_t>(len.samples)));
  run.summary = summarize(run.series);
  return run;
}

double dynamics_drift(const RabiRun& run, int n_max) {
  SystemConfig c = run.config;
  c.resonator.n_max = n_max;
  const TimeSeries other = run_driven(c, run.pulse, run.series.times);
  double drift = 0.0;
  for (const char* name : {"photon_number", "qubit_excitation", "g2", "g3"}) {
    const std::vector<double>& a = run.series.channel(name);
    const std::vector<double>& b = other.channel(name);
    for (std::size_t i = 0; i < a.size(); ++i) drift = std::max(drift, std::abs(a[i] - b[i]));
  }
  return drift;
}

}  // namespace usc_rabi
