#pragma once

// Figure-level workflows shared by the scenario runner and the acceptance
// suite: tune to a multiphoton resonance, calibrate the pulse, run and
// summarize the driven dynamics.

#include <optional>
#include <string>
#include <vector>

#include "usc_rabi/dynamics.hpp"
#include "usc_rabi/effective.hpp"
#include "usc_rabi/model.hpp"

namespace usc_rabi {

/// Qubit tuned to the minimum of the |e,0> <-> |g,photons> splitting.
struct ResonancePoint {
  int photons = 2;
  double omega_q = 0.0;          ///< natural units
  SplittingResult splitting;
  double drive_freq = 0.0;       ///< midpoint of the two split transitions
  double population_period = 0.0;  ///< 2 pi / splitting
};

ResonancePoint find_resonance(const SystemConfig& cfg, int photons, double lo, double hi);

/// cfg with its flux offset set so the qubit sits at omega_q (natural units).
SystemConfig tuned_config(const SystemConfig& cfg, double omega_q);

struct PulseSettings {
  double area_over_pi = 1.0;
  double tau = 3.0;  ///< used as is when calibrate is false
  bool calibrate = true;
  std::vector<double> tau_scan = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  double t0_over_tau = 5.0;
};

struct CalibrationPoint {
  double tau = 0.0;
  double first_qubit_peak = 0.0;
};

struct RunLength {
  double duration_periods = 4.0;  ///< after t0, in population periods
  int samples = 2000;
};

struct DynamicsSummary {
  struct Sample {
    double t = 0.0;
    double value = 0.0;
    double g2 = 0.0;
    double g3 = 0.0;
  };
  std::optional<Sample> first_photon_peak;
  std::vector<Sample> photon_peaks;
  std::vector<Sample> qubit_maxima;  ///< value = qubit excitation, g2/g3 at that time
  double g2_peak = 0.0;
  double g3_peak = 0.0;
  std::optional<double> period;      ///< from prominent photon-number peaks
  int discernible_cycles = 0;        ///< photon peaks with prominence >= 10% of range
};

DynamicsSummary summarize(const TimeSeries& s);

struct RabiRun {
  SystemConfig config;  ///< tuned to resonance
  ResonancePoint resonance;
  PulseSpec pulse;
  std::vector<CalibrationPoint> calibration;
  TimeSeries series;
  DynamicsSummary summary;
};

PulseSpec make_pulse(const PulseSettings& ps, const ResonancePoint& r, double tau);

/// Driven run from the dressed ground state.
TimeSeries run_driven(const SystemConfig& tuned, const PulseSpec& pulse,
                      const std::vector<double>& t_grid);

/// Scans tau to maximize the first qubit-population peak, i.e. the maximum
/// of qubit_excitation before t0 + 3 tau + T/4.
std::vector<CalibrationPoint> calibrate_tau(const SystemConfig& tuned, const ResonancePoint& r,
                                            const PulseSettings& ps, int threads = 0);
double best_tau(const std::vector<CalibrationPoint>& scan);

RabiRun run_rabi_experiment(const SystemConfig& cfg, const ResonancePoint& r,
                            const PulseSettings& ps, const RunLength& len, int threads = 0);

/// Reruns the given experiment with the same tuning, pulse and grid at a
/// different Fock cutoff; returns the max absolute drift of the photon,
/// qubit, G2 and G3 channels.
double dynamics_drift(const RabiRun& run, int n_max);

}  // namespace usc_rabi
