#include "usc_rabi/peaks.hpp"

#include <algorithm>

namespace usc_rabi {

std::vector<Peak> find_peaks(const std::vector<double>& y) {
  std::vector<Peak> out;
  const std::size_t n = y.size();
  if (n < 3) return out;

  std::size_t i = 1;
  while (i + 1 < n) {
    if (y[i - 1] < y[i]) {
      std::size_t ahead = i + 1;
      while (ahead + 1 < n && y[ahead] == y[i]) ++ahead;
      if (y[ahead] < y[i]) {
        out.push_back({(i + ahead - 1) / 2, y[i], 0.0});
        i = ahead;
        continue;
      }
    }
    ++i;
  }

  for (Peak& p : out) {
    // Walk outwards until a strictly higher sample (or the edge); the
    // lowest point passed on each side is that side's base.
    double left_min = p.value;
    for (std::size_t k = p.index; k-- > 0;) {
      if (y[k] > p.value) break;
      left_min = std::min(left_min, y[k]);
    }
    double right_min = p.value;
    for (std::size_t k = p.index + 1; k < n; ++k) {
      if (y[k] > p.value) break;
      right_min = std::min(right_min, y[k]);
    }
    p.prominence = p.value - std::max(left_min, right_min);
  }
  return out;
}

std::vector<Peak> prominent_peaks(const std::vector<double>& y, double fraction) {
  if (y.empty()) return {};
  const auto [lo, hi] = std::minmax_element(y.begin(), y.end());
  const double threshold = fraction * (*hi - *lo);
  std::vector<Peak> out;
  for (const Peak& p : find_peaks(y)) {
    if (p.prominence >= threshold && p.prominence > 0.0) out.push_back(p);
  }
  return out;
}

}  // namespace usc_rabi
