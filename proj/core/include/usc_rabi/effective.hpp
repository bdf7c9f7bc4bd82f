#pragma once

// Reduced four-level model around the two-photon resonance, its adiabatic
// elimination to an effective |e,0> <-> |g,2> coupling, and the numerical
// minimum-splitting search the analytic result is checked against.

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "usc_rabi/linops.hpp"
#include "usc_rabi/model.hpp"

namespace usc_rabi {

/// Basis (|e,0>, |g,1>, |e,1>, |g,2>), natural units.
struct ReducedModel {
  double omega_q = 0.0;
  double omega_r = 1.0;
  double g1 = 0.0;
  double theta = 0.0;
  Eigen::Matrix4d h_reduced = Eigen::Matrix4d::Zero();
};

ReducedModel reduced_hamiltonian(double omega_q, double omega_r, double g1, double theta);

/// Frame rotating at omega_q / 2, basis reordered to (|e,0>, |e,1>, |g,1>, |g,2>).
Eigen::Matrix4d rotating_frame(const ReducedModel& rm);

/// Effective 2x2 coupling of (|e,0>, |g,2>) in the rotating frame after
/// eliminating |e,1> and |g,1>, valid for any omega_r away from omega_q.
Eigen::Matrix2d adiabatic_elimination(const ReducedModel& rm);

/// Effective two-photon model at omega_r = omega_q / 2, lab-frame energies.
struct EffectiveModel {
  double e_shift_e0 = 0.0;  ///< omega_q/2 + (2 g^2/omega_q) cos 2 theta
  double e_shift_g2 = 0.0;  ///< 2 omega_r - omega_q/2 - (4 g^2/omega_q) cos 2 theta
  double omega_eff = 0.0;   ///< 2 sqrt2 g^2 sin 2 theta / omega_q
  bool beyond_regime = false;  ///< g1 / omega_r > 0.3, perturbative result unreliable

  Eigen::Matrix2d matrix() const;
};

EffectiveModel effective_hamiltonian(const ReducedModel& rm);

/// Closed-form effective two-photon Rabi frequency.
double omega_eff_two_photon(double g1, double omega_q, double theta);

/// Pair of bare basis states whose hybridized levels form the anticrossing.
struct LevelTarget {
  int bare_a = 0;
  int bare_b = 0;
};

struct SplittingOptions {
  int grid = 41;
  double tolerance = 1e-10;  ///< final bracket width
  int threads = 0;
};

struct SplittingResult {
  double x_star = 0.0;  ///< sweep parameter at the minimum gap
  double gap = 0.0;
  int lower = 0;        ///< dressed indices of the split pair, lower < upper
  int upper = 0;
  int evaluations = 0;
};

using HamiltonianFamily = std::function<Operator(double)>;

/// Gap between the two dressed levels carrying the most weight on the
/// target bare states; `lower`/`upper` receive their indices.
double pair_gap(const Operator& h, const LevelTarget& target, int* lower = nullptr,
                int* upper = nullptr);

/// Coarse grid over [lo, hi], then golden-section refinement around the best
/// interior grid point. Throws NumericError when the grid minimum sits on a
/// boundary.
SplittingResult minimum_splitting(const HamiltonianFamily& family, double lo, double hi,
                                  const LevelTarget& target, const SplittingOptions& opt = {});

/// |e,0> <-> |g,photons> anticrossing of a single-qubit config, swept in
/// omega_q (natural units) over [lo, hi]. cfg.coupling.rwa picks the model.
SplittingResult minimum_splitting(const SystemConfig& cfg, int photons, double lo, double hi,
                                  const SplittingOptions& opt = {});

/// Single-qubit Hamiltonian with the qubit tuned to omega_q (natural units).
Operator hamiltonian_at(const SystemConfig& cfg, double omega_q);

struct ComparisonRow {
  double g_over_omega_q = 0.0;
  double analytic = 0.0;   ///< 4 sqrt2 sin 2 theta (g/omega_q)^2
  double numeric = 0.0;    ///< full-model minimum splitting / omega_q
  double relative_deviation = 0.0;
  double omega_r_star = 0.0;  ///< resonator frequency at the minimum, units of omega_q
};

/// Analytic vs numerical two-photon splitting at fixed theta, in units of
/// omega_q, with the resonator frequency swept over [omega_r_lo, omega_r_hi].
std::vector<ComparisonRow> splitting_comparison(const std::vector<double>& g_over_omega_q,
                                                double theta, int n_max = 16,
                                                double omega_r_lo = 0.45,
                                                double omega_r_hi = 0.55, int threads = 0);

}  // namespace usc_rabi
