#pragma once

#include <cstddef>
#include <vector>

namespace usc_rabi {

struct Peak {
  std::size_t index = 0;
  double value = 0.0;
  double prominence = 0.0;
};

/// Interior local maxima (plateaus resolve to their middle sample) with
/// topographic prominence, in index order. Endpoints are never peaks.
std::vector<Peak> find_peaks(const std::vector<double>& y);

/// Peaks whose prominence is at least `fraction` of max(y) - min(y).
std::vector<Peak> prominent_peaks(const std::vector<double>& y, double fraction = 0.25);

}  // namespace usc_rabi
