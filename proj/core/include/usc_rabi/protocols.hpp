#pragma once

// Three-qubit GHZ generation through one resonator mode: qubit 1 in the
// ultrastrong regime exchanges two photons with the mode, qubits 2 and 3
// (strong coupling) each absorb one of them.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "usc_rabi/dynamics.hpp"
#include "usc_rabi/effective.hpp"
#include "usc_rabi/model.hpp"

namespace usc_rabi {

struct GhzQubit {
  QubitParams qubit;
  double g = 0.02;          ///< coupling to the mode, units of omega_1
  double idle_ghz = 0.0;    ///< parking frequency between steps
  double search_lo = 0.0;   ///< resonance search window, units of omega_1
  double search_hi = 0.0;
};

struct GhzConfig {
  std::array<GhzQubit, 3> qubits;
  ResonatorSpec resonator;
  Dissipation dissipation;
  double pulse_tau = 3.0;        ///< units of 1/omega_1
  int samples_per_segment = 40;

  GhzConfig();
  SpaceLayout layout() const {
    return SpaceLayout({2, 2, 2, resonator.n_max + 1});
  }
  std::array<double, 3> idle() const;  ///< natural units
};

/// Throws ValidationError when the coupling regimes or frequencies are off.
void validate(const GhzConfig& cfg);

/// sum_q [(w_q/2) sz_q + g_q X (cos th_q sx_q + sin th_q sz_q)] + a^dag a,
/// each qubit tuned to omega_q[q] (natural units).
Operator build_ghz_hamiltonian(const GhzConfig& cfg, const std::array<double, 3>& omega_q);

/// Composite index of |q1, q2, q3, n> (0 = g, 1 = e).
int ghz_index(const GhzConfig& cfg, int q1, int q2, int q3, int n);

struct Segment {
  std::string name;
  double duration = 0.0;
  std::array<double, 3> omega_q{};
  std::optional<Drive> drive;
  double rotation = 0.0;   ///< intended rotation angle (pulse area or Rabi angle)
  double splitting = 0.0;  ///< resonant dressed splitting used for the timing
};

struct Schedule {
  std::vector<Segment> segments;
};

/// pi pulse on qubit 1, pi/2 two-photon rotation, two one-photon pi
/// swaps, final pi pulse. Resonances come from dressed-spectrum searches.
Schedule ghz_schedule(const GhzConfig& cfg);

struct SegmentSnapshot {
  std::string name;
  double t_end = 0.0;
  double fidelity = 0.0;
  double fidelity_phase_max = 0.0;
  double vacuum_population = 0.0;
  double purity = 0.0;
  Matrix rho;
};

struct ProtocolResult {
  Matrix rho;
  double fidelity = 0.0;            ///< <target|rho|target>
  double fidelity_phase_max = 0.0;  ///< maximized over the |eee,0> branch phase
  double vacuum_after_entangling = 0.0;
  std::vector<SegmentSnapshot> snapshots;
  InvariantReport invariants;
};

/// Piecewise evolution with sudden switching between segments. With
/// `dissipation` the config's rates are applied through jumps recomputed in
/// each segment's dressed basis.
ProtocolResult run_protocol(const GhzConfig& cfg, const Schedule& schedule, bool dissipation);

/// (|g,g,g,0> + |e,e,e,0>)/sqrt2.
Vector ghz_target(const GhzConfig& cfg);

double fidelity(const Matrix& rho, const Vector& target);
/// (rho_aa + rho_bb)/2 + |rho_ab| for the two GHZ branches.
double ghz_fidelity_phase_max(const Matrix& rho, const GhzConfig& cfg);
/// Population of the resonator vacuum (reduced state of the Fock factor).
double vacuum_population(const Matrix& rho, const SpaceLayout& layout);

}  // namespace usc_rabi
