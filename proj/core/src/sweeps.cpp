#include "usc_rabi/sweeps.hpp"

#include <algorithm>
#include <stdexcept>

#include "usc_rabi/dressed.hpp"
#include "usc_rabi/effective.hpp"
#include "usc_rabi/parallel.hpp"

namespace usc_rabi {

std::string to_string(ModelTag m) { return m == ModelTag::full ? "full" : "jc"; }

ModelTag model_tag_from_string(const std::string& s) {
  if (s == "full") return ModelTag::full;
  if (s == "jc") return ModelTag::jc;
  throw std::invalid_argument("unknown model '" + s + "', expected full or jc");
}

SpectrumSweep spectrum_at(const SystemConfig& cfg, const std::vector<double>& omega_q,
                          ModelTag model, int n_levels, int threads) {
  SystemConfig c = cfg;
  c.coupling.rwa = model == ModelTag::jc;
  const int dim = c.layout().total_dim();
  if (n_levels < 1 || n_levels > dim - 1) {
    throw std::invalid_argument("sweep: n_levels must be in [1, " + std::to_string(dim - 1) + "]");
  }
  for (std::size_t p = 1; p < omega_q.size(); ++p) {
    if (!(omega_q[p] > omega_q[p - 1])) throw std::invalid_argument("sweep: grid not increasing");
  }

  SpectrumSweep s;
  s.model = model;
  s.omega_q = omega_q;
  s.transitions.resize(static_cast<Eigen::Index>(omega_q.size()), n_levels);
  s.character.assign(omega_q.size(), std::vector<std::string>(n_levels));
  parallel_for(
      omega_q.size(),
      [&](std::size_t p) {
        const DressedBasis b = dressed_basis(hamiltonian_at(c, omega_q[p]));
        for (int i = 0; i < n_levels; ++i) {
          s.transitions(static_cast<Eigen::Index>(p), i) = b.transition(i + 1);
          s.character[p][i] = bare_character(b, i + 1);
        }
      },
      threads);
  return s;
}

SpectrumSweep sweep_spectrum(const SystemConfig& cfg, double lo, double hi, ModelTag model,
                             const SweepOptions& opt) {
  if (!(hi > lo)) throw std::invalid_argument("sweep: empty omega_q range");
  if (opt.points < 2) throw std::invalid_argument("sweep: need at least 2 points");
  if (opt.densify < 1) throw std::invalid_argument("sweep: densify must be >= 1");

  std::vector<double> grid(opt.points);
  for (int i = 0; i < opt.points; ++i) grid[i] = lo + (hi - lo) * i / (opt.points - 1);
  SpectrumSweep base = spectrum_at(cfg, grid, model, opt.n_levels, opt.threads);
  if (opt.densify == 1) return base;

  // Refine both grid intervals around every interior local minimum of an
  // adjacent-level gap that is small enough to be a (near-)crossing.
  std::vector<bool> refine(grid.size() - 1, false);
  const Eigen::Index np = base.transitions.rows();
  for (int i = 0; i + 1 < base.levels(); ++i) {
    const Eigen::VectorXd gap = base.transitions.col(i + 1) - base.transitions.col(i);
    for (Eigen::Index p = 1; p + 1 < np; ++p) {
      if (gap(p) <= gap(p - 1) && gap(p) <= gap(p + 1) && gap(p) < opt.crossing_gap) {
        refine[p - 1] = true;
        refine[p] = true;
      }
    }
  }
  std::vector<double> extra;
  for (std::size_t k = 0; k < refine.size(); ++k) {
    if (!refine[k]) continue;
    for (int j = 1; j < opt.densify; ++j) {
      extra.push_back(grid[k] + (grid[k + 1] - grid[k]) * j / opt.densify);
    }
  }
  if (extra.empty()) return base;
  SpectrumSweep fine = spectrum_at(cfg, extra, model, opt.n_levels, opt.threads);

  // Merge the two sorted point sets.
  SpectrumSweep out;
  out.model = model;
  const std::size_t total = grid.size() + extra.size();
  out.omega_q.reserve(total);
  out.transitions.resize(static_cast<Eigen::Index>(total), opt.n_levels);
  out.character.reserve(total);
  std::size_t a = 0, b = 0;
  for (std::size_t r = 0; r < total; ++r) {
    const bool take_base = b >= extra.size() || (a < grid.size() && grid[a] < extra[b]);
    const SpectrumSweep& src = take_base ? base : fine;
    const std::size_t idx = take_base ? a++ : b++;
    out.omega_q.push_back(src.omega_q[idx]);
    out.transitions.row(static_cast<Eigen::Index>(r)) =
        src.transitions.row(static_cast<Eigen::Index>(idx));
    out.character.push_back(src.character[idx]);
  }
  return out;
}

}  // namespace usc_rabi
