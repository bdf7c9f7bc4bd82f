#pragma once

// Physical parameters -> Hamiltonians, in natural units: hbar = 1 and the
// fundamental resonator angular frequency omega_1 = 1. Ordinary frequencies
// in GHz are converted at the boundary by dividing by omega_1 / 2pi.

#include <string>

#include "usc_rabi/linops.hpp"

namespace usc_rabi {

/// Flux qubit in its eigenbasis. Frequencies are ordinary (h = 1) in GHz.
struct QubitParams {
  double delta_ghz = 2.25;     ///< gap Delta/h at zero flux offset
  double ip2_na = 630.0;       ///< persistent-current parameter 2 I_p
  double flux_offset = 0.0;    ///< delta Phi_x in units of the flux quantum
};

/// Frequency per flux quantum of the persistent-current term, 2 I_p Phi_0 / h, in GHz.
double flux_frequency_scale_ghz(double ip2_na);
/// omega_q / 2pi = sqrt(Delta^2 + (2 I_p dPhi Phi_0 / h)^2), in GHz.
double qubit_frequency_ghz(const QubitParams& q);
/// theta with cos(theta) = Delta / omega_q.
double mixing_angle(const QubitParams& q);
/// Non-negative flux offset that tunes the qubit to omega_q_ghz (>= Delta).
double flux_for_frequency(const QubitParams& q, double omega_q_ghz);
QubitParams tuned_to(QubitParams q, double omega_q_ghz);

enum class Geometry { half_wave, quarter_wave };

std::string to_string(Geometry g);
Geometry geometry_from_string(const std::string& s);

struct ResonatorSpec {
  Geometry geometry = Geometry::half_wave;
  double omega1_ghz = 4.0;  ///< omega_1 / 2pi
  int n_max = 16;           ///< Fock cutoff of the fundamental mode
};

/// Mode frequency in units of omega_1: m (half wave) or 2m - 1 (quarter wave).
double mode_frequency(const ResonatorSpec& r, int m);
double mode_frequency_ghz(const ResonatorSpec& r, int m);

struct CouplingSpec {
  double g1 = 0.15;   ///< qubit / fundamental-mode coupling in units of omega_1
  bool rwa = false;   ///< drop counter-rotating and sigma_z coupling terms
};

struct Dissipation {
  double kappa = 0.0;      ///< resonator loss, units of omega_1
  double gamma = 0.0;      ///< qubit relaxation, units of omega_1
  double gamma_phi = 0.0;  ///< qubit pure dephasing, units of omega_1
};

/// Single qubit coupled to the fundamental mode of one resonator.
struct SystemConfig {
  QubitParams qubit;
  ResonatorSpec resonator;
  CouplingSpec coupling;
  Dissipation dissipation;

  double ghz_to_natural(double ghz) const { return ghz / resonator.omega1_ghz; }
  double natural_to_ghz(double w) const { return w * resonator.omega1_ghz; }
  /// Qubit angular frequency in units of omega_1.
  double omega_q() const { return ghz_to_natural(qubit_frequency_ghz(qubit)); }
  SpaceLayout layout() const { return SpaceLayout({2, resonator.n_max + 1}); }
};

/// Gaussian drive E(t) cos(omega t) sigma_x with
/// E(t) = area * exp(-(t - t0)^2 / (2 tau^2)) / (tau sqrt(2 pi)).
struct PulseSpec {
  double area = 0.0;
  double center_freq = 0.0;  ///< angular, units of omega_1
  double t0 = 0.0;
  double tau = 3.0;

  double envelope(double t) const;
  double peak() const;
  double value(double t) const;  ///< E(t) cos(omega t)
};

/// Validates a PulseSpec (tau > 0, area >= 0); throws std::invalid_argument.
void validate(const PulseSpec& p);

/// Extended Rabi Hamiltonian in natural units on [2, n_max + 1]:
/// (omega_q/2) sz + omega_r a^dag a + g (a + a^dag)(cos th sx + sin th sz),
/// or with rwa the Jaynes-Cummings form g cos th (a s+ + a^dag s-).
Operator rabi_hamiltonian(double omega_q, double theta, double g, int n_max, bool rwa,
                          double omega_r = 1.0);

Operator build_rabi_hamiltonian(const QubitParams& q, const ResonatorSpec& r,
                                const CouplingSpec& c);
Operator build_rabi_hamiltonian(const SystemConfig& cfg);

/// a^dag a + sum over qubit factors of s+ s-. Qubit factors are every factor
/// except the last, which must be the Fock factor.
Operator excitation_number_operator(const SpaceLayout& layout);
/// exp(i pi N_exc): diagonal, +1 on even and -1 on odd excitation number.
Operator parity_operator(const SpaceLayout& layout);

/// The resonator field a + a^dag lifted into the layout (Fock factor last).
Operator field_operator(const SpaceLayout& layout);

/// E(t) cos(omega t) sigma_x on the qubit in `slot`.
Operator drive_hamiltonian(const PulseSpec& p, double t, const SpaceLayout& layout,
                           std::size_t slot = 0);

}  // namespace usc_rabi
