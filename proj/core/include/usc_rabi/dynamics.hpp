#pragma once

// Driven-dissipative evolution under the dressed-basis master equation
//   drho/dt = -i[H0 + E(t) cos(wt) sx, rho] + sum_jk G_jk D[|j><k|] rho + D[sum_j Phi_j |j><j|] rho
// with zero-delay photodetection observables built from X+ and C+.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "usc_rabi/dressed.hpp"
#include "usc_rabi/linops.hpp"
#include "usc_rabi/model.hpp"

namespace usc_rabi {

/// Fixed-step RK4 contract: dt <= 2 pi / (steps_per_cycle * omega_span),
/// with a step-doubling error estimate every `richardson_every` steps.
struct StepControl {
  double steps_per_cycle = 50.0;
  int richardson_every = 100;
  double richardson_tol = 1e-7;
  long long max_steps = 4'000'000'000LL;
};

/// Pulse acting through sigma_x of one qubit.
struct Drive {
  PulseSpec pulse;
  std::size_t qubit = 0;
};

struct EvolutionProblem {
  DressedBasis basis;
  JumpSet jumps;
  std::optional<Drive> drive;
  Matrix rho0;                  ///< bare basis
  std::vector<double> t_grid;   ///< strictly increasing sample times
  StepControl step;
};

/// Worst values seen over all samples of a run.
struct InvariantReport {
  double max_trace_error = 0.0;
  double max_hermiticity_error = 0.0;
  double min_eigenvalue = 1.0;
  double max_purity = 0.0;
  double min_photon_number = 0.0;
  double min_g2 = 0.0;
  double min_g3 = 0.0;
  double max_richardson_error = 0.0;
  long long steps = 0;
  double dt = 0.0;

  /// Human-readable list of violated tolerances; empty when all hold.
  std::vector<std::string> breaches() const;
  bool ok() const { return breaches().empty(); }
  void merge(const InvariantReport& other);
};

/// Named real channels on a common time grid.
struct TimeSeries {
  std::vector<double> times;
  std::vector<std::string> names;
  std::vector<std::vector<double>> values;
  InvariantReport invariants;
  std::map<std::string, std::string> metadata;
  Matrix final_rho;  ///< bare basis, at times.back()

  bool has(const std::string& name) const;
  const std::vector<double>& channel(const std::string& name) const;
  std::vector<double>& channel(const std::string& name);
  void add_channel(const std::string& name, std::vector<double> v);
};

/// Zero-delay observables of one state.
struct ChannelSample {
  double photon_number = 0.0;       ///< <X- X+>
  double qubit_excitation = 0.0;    ///< <C- C+>
  double g2 = 0.0;                  ///< <X- X- X+ X+>
  double g3 = 0.0;                  ///< <X- X- X- X+ X+ X+>
  double output_flux = 0.0;         ///< kappa <X- X+>
  double bare_photon_number = 0.0;  ///< <a^dag a>, includes virtual photons
};

ChannelSample observable_channels(const Matrix& rho_bare, const DressedBasis& b,
                                  double kappa = 0.0);

/// Channel names written by evolve, in column order.
const std::vector<std::string>& channel_names();

/// Master-equation right-hand side evaluated directly in the bare basis.
/// Slow; kept as the reference the integrator is tested against.
Matrix lindblad_rhs(const Matrix& rho_bare, double t, const EvolutionProblem& p);

/// Same derivative written elementwise in the dressed basis (lab frame).
Matrix lindblad_rhs_dressed(const Matrix& rho_dressed, double t, const EvolutionProblem& p);

/// Throws ValidationError on malformed problems and NumericError when the
/// step-doubling error estimate exceeds the tolerance. Invariant breaches
/// are recorded in the report, not thrown.
TimeSeries evolve(const EvolutionProblem& p);

/// |0><0| for the dressed ground state, in the bare basis.
Matrix ground_state_density(const DressedBasis& b);

/// Sample times t0, t0 + dt, ..., t1 (n >= 2 points).
std::vector<double> linspace(double t0, double t1, std::size_t n);

/// Mean spacing of consecutive prominent peaks of a channel. Needs at least
/// three peaks; throws NumericError otherwise.
double rabi_period_estimate(const TimeSeries& s, const std::string& channel,
                            double prominence_fraction = 0.25);
double rabi_period_estimate(const std::vector<double>& times, const std::vector<double>& y,
                            double prominence_fraction = 0.25);

}  // namespace usc_rabi
