#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "usc_rabi/model.hpp"

namespace usc_rabi {

enum class ModelTag { full, jc };

std::string to_string(ModelTag m);
ModelTag model_tag_from_string(const std::string& s);

struct SweepOptions {
  int points = 400;
  int n_levels = 8;
  int densify = 8;             ///< refinement factor inside near-crossings (1 = off)
  double crossing_gap = 0.2;   ///< local gap minima below this (units of omega_1) are refined
  int threads = 0;
};

/// Level diagram: transitions(p, i) = omega_{i+1} - omega_0 at omega_q[p].
struct SpectrumSweep {
  ModelTag model = ModelTag::full;
  std::vector<double> omega_q;  ///< natural units, strictly increasing
  Eigen::MatrixXd transitions;
  std::vector<std::vector<std::string>> character;  ///< [point][level]

  int points() const { return static_cast<int>(omega_q.size()); }
  int levels() const { return static_cast<int>(transitions.cols()); }
};

/// Lowest n_levels transition frequencies (ground state excluded) of cfg
/// with the qubit tuned across [lo, hi] (natural units, lo >= Delta).
SpectrumSweep sweep_spectrum(const SystemConfig& cfg, double lo, double hi, ModelTag model,
                             const SweepOptions& opt = {});

/// Transitions at the given omega_q values only, no densification.
SpectrumSweep spectrum_at(const SystemConfig& cfg, const std::vector<double>& omega_q,
                          ModelTag model, int n_levels, int threads = 0);

}  // namespace usc_rabi
