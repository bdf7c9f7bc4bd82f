#include "usc_rabi/effective.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "usc_rabi/errors.hpp"
#include "usc_rabi/parallel.hpp"

namespace usc_rabi {

ReducedModel reduced_hamiltonian(double omega_q, double omega_r, double g1, double theta) {
  if (!(omega_q > 0.0) || !(omega_r > 0.0)) {
    throw std::invalid_argument("reduced_hamiltonian: frequencies must be > 0");
  }
  ReducedModel rm{omega_q, omega_r, g1, theta, Eigen::Matrix4d::Zero()};
  const double c = g1 * std::cos(theta);
  const double s = g1 * std::sin(theta);
  const double r2 = std::numbers::sqrt2;
  Eigen::Matrix4d& h = rm.h_reduced;
  h(0, 0) = omega_q / 2.0;
  h(1, 1) = omega_r - omega_q / 2.0;
  h(2, 2) = omega_r + omega_q / 2.0;
  h(3, 3) = 2.0 * omega_r - omega_q / 2.0;
  h(0, 1) = h(1, 0) = c;
  h(0, 2) = h(2, 0) = s;
  h(1, 3) = h(3, 1) = -r2 * s;
  h(2, 3) = h(3, 2) = r2 * c;
  return rm;
}

Eigen::Matrix4d rotating_frame(const ReducedModel& rm) {
  // (e0, g1, e1, g2) -> (e0, e1, g1, g2), then subtract omega_q / 2.
  static constexpr int order[4] = {0, 2, 1, 3};
  Eigen::Matrix4d out;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) out(i, j) = rm.h_reduced(order[i], order[j]);
  }
  out.diagonal().array() -= rm.omega_q / 2.0;
  return out;
}

Eigen::Matrix2d adiabatic_elimination(const ReducedModel& rm) {
  const double wq = rm.omega_q;
  const double wr = rm.omega_r;
  const double g2 = rm.g1 * rm.g1;
  const double denom = wr * (wr - wq);
  if (std::abs(denom) < 1e-300) {
    throw std::invalid_argument("adiabatic_elimination: omega_r must differ from 0 and omega_q");
  }
  const double s2 = std::pow(std::sin(rm.theta), 2);
  const double c2 = std::pow(std::cos(rm.theta), 2);
  Eigen::Matrix2d m;
  m(0, 0) = g2 * (wq * s2 - wr) / denom;
  m(1, 1) = (2.0 * wr - wq) - 2.0 * g2 * (wr - wq * c2) / denom;
  m(0, 1) = m(1, 0) = std::numbers::sqrt2 * g2 * wq * std::sin(2.0 * rm.theta) / (2.0 * denom);
  return m;
}

Eigen::Matrix2d EffectiveModel::matrix() const {
  Eigen::Matrix2d m;
  m << e_shift_e0, -omega_eff, -omega_eff, e_shift_g2;
  return m;
}

double omega_eff_two_photon(double g1, double omega_q, double theta) {
  return 2.0 * std::numbers::sqrt2 * g1 * g1 * std::sin(2.0 * theta) / omega_q;
}

EffectiveModel effective_hamiltonian(const ReducedModel& rm) {
  EffectiveModel em;
  const double wq = rm.omega_q;
  const double shift = rm.g1 * rm.g1 / wq * std::cos(2.0 * rm.theta);
  em.e_shift_e0 = wq / 2.0 + 2.0 * shift;
  em.e_shift_g2 = 2.0 * rm.omega_r - wq / 2.0 - 4.0 * shift;
  em.omega_eff = omega_eff_two_photon(rm.g1, wq, rm.theta);
  em.beyond_regime = rm.g1 / rm.omega_r > 0.3;
  return em;
}

double pair_gap(const Operator& h, const LevelTarget& target, int* lower, int* upper) {
  const EigenDecomposition eig = hermitian_eig(h);
  const RealVector w = eig.vectors.row(target.bare_a).cwiseAbs2().transpose() +
                       eig.vectors.row(target.bare_b).cwiseAbs2().transpose();
  Eigen::Index i = 0;
  w.maxCoeff(&i);
  Eigen::Index j = i == 0 ? 1 : 0;
  for (Eigen::Index k = 0; k < w.size(); ++k) {
    if (k != i && w(k) > w(j)) j = k;
  }
  if (lower) *lower = static_cast<int>(std::min(i, j));
  if (upper) *upper = static_cast<int>(std::max(i, j));
  return std::abs(eig.values(i) - eig.values(j));
}

SplittingResult minimum_splitting(const HamiltonianFamily& family, double lo, double hi,
                                  const LevelTarget& target, const SplittingOptions& opt) {
  if (!(hi > lo)) throw std::invalid_argument("minimum_splitting: empty interval");
  if (opt.grid < 3) throw std::invalid_argument("minimum_splitting: grid needs >= 3 points");

  const int n = opt.grid;
  std::vector<double> xs(n), gaps(n);
  for (int i = 0; i < n; ++i) xs[i] = lo + (hi - lo) * i / (n - 1);
  parallel_for(
      static_cast<std::size_t>(n),
      [&](std::size_t i) { gaps[i] = pair_gap(family(xs[i]), target); }, opt.threads);

  const int k = static_cast<int>(std::min_element(gaps.begin(), gaps.end()) - gaps.begin());
  if (k == 0 || k == n - 1) {
    throw NumericError(std::string("minimum_splitting: no interior minimum, the gap is smallest at the ") +
                       (k == 0 ? "lower" : "upper") + " boundary " + std::to_string(xs[k]));
  }

  SplittingResult res;
  res.evaluations = n;
  auto f = [&](double x) {
    ++res.evaluations;
    return pair_gap(family(x), target);
  };
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = xs[k - 1];
  double b = xs[k + 1];
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > opt.tolerance) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  double x = 0.5 * (a + b);
  double gx = pair_gap(family(x), target, &res.lower, &res.upper);
  if (gaps[k] < gx) {
    x = xs[k];
    gx = pair_gap(family(x), target, &res.lower, &res.upper);
  }
  res.x_star = x;
  res.gap = gx;
  return res;
}

Operator hamiltonian_at(const SystemConfig& cfg, double omega_q) {
  const QubitParams q = tuned_to(cfg.qubit, cfg.natural_to_ghz(omega_q));
  return build_rabi_hamiltonian(q, cfg.resonator, cfg.coupling);
}

SplittingResult minimum_splitting(const SystemConfig& cfg, int photons, double lo, double hi,
                                  const SplittingOptions& opt) {
  if (photons < 1 || photons > cfg.resonator.n_max) {
    throw std::invalid_argument("minimum_splitting: photon number outside the Fock space");
  }
  const SpaceLayout layout = cfg.layout();
  const LevelTarget target{layout.flatten({1, 0}), layout.flatten({0, photons})};
  return minimum_splitting([&](double wq) { return hamiltonian_at(cfg, wq); }, lo, hi, target,
                           opt);
}

std::vector<ComparisonRow> splitting_comparison(const std::vector<double>& g_over_omega_q,
                                                double theta, int n_max, double omega_r_lo,
                                                double omega_r_hi, int threads) {
  const SpaceLayout layout({2, n_max + 1});
  const LevelTarget target{layout.flatten({1, 0}), layout.flatten({0, 2})};
  std::vector<ComparisonRow> rows(g_over_omega_q.size());
  parallel_for(
      rows.size(),
      [&](std::size_t i) {
        const double g = g_over_omega_q[i];
        if (!(g > 0.0)) throw std::invalid_argument("splitting_comparison: g must be > 0");
        // Units of omega_q: qubit at 1, resonator swept through 1/2.
        auto family = [&](double wr) { return rabi_hamiltonian(1.0, theta, g, n_max, false, wr); };
        SplittingOptions opt;
        opt.threads = 1;
        const SplittingResult s = minimum_splitting(family, omega_r_lo, omega_r_hi, target, opt);
        ComparisonRow& r = rows[i];
        r.g_over_omega_q = g;
        r.analytic = 2.0 * omega_eff_two_photon(g, 1.0, theta);
        r.numeric = s.gap;
        r.relative_deviation = (s.gap - r.analytic) / r.analytic;
        r.omega_r_star = s.x_star;
      },
      threads);
  return rows;
}

}  // namespace usc_rabi
