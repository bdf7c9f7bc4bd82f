#include "usc_rabi/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "usc_rabi/dressed.hpp"
#include "usc_rabi/dynamics.hpp"
#include "usc_rabi/experiments.hpp"
#include "usc_rabi/model.hpp"

namespace usc_rabi {

namespace {

constexpr double kDetuned = 1.37;  // qubit frequency with no bare degeneracies

OracleResult make(const std::string& name, double dev, double tol, std::string detail = {}) {
  return {name, dev, tol, dev <= tol, std::move(detail)};
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

double decay_deviation(double kappa, double gamma, int bare_index, const char* channel,
                       double rate) {
  const Operator h = rabi_hamiltonian(kDetuned, 0.0, 0.0, 3, false);
  EvolutionProblem p;
  p.basis = dressed_basis(h);
  p.jumps = jump_set(p.basis, kappa, gamma, 0.0);
  p.rho0 = projector(basis_vector(p.basis.dim(), bare_index));
  p.t_grid = linspace(0.0, 200.0, 41);
  const TimeSeries ts = evolve(p);
  const std::vector<double>& y = ts.channel(channel);
  double dev = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double exact = std::exp(-rate * ts.times[i]);
    dev = std::max(dev, std::abs(y[i] / exact - 1.0));
  }
  return dev;
}

OracleResult free_decay_qubit() {
  const double gamma = 0.01;
  const int e0 = SpaceLayout({2, 4}).flatten({1, 0});
  return make("free_decay_qubit", decay_deviation(0.0, gamma, e0, "qubit_excitation", gamma),
              1e-6, "relative deviation from exp(-gamma t), gamma = 0.01");
}

OracleResult free_decay_resonator() {
  const double kappa = 0.02;
  const int g1 = SpaceLayout({2, 4}).flatten({0, 1});
  return make("free_decay_resonator",
              decay_deviation(kappa, 0.0, g1, "photon_number", kappa), 1e-6,
              "relative deviation from exp(-kappa t), kappa = 0.02");
}

OracleResult jc_splitting() {
  const double g = 0.05;
  const EigenDecomposition eig = hermitian_eig(rabi_hamiltonian(1.0, 0.0, g, 10, true));
  double dev = 0.0;
  for (int n = 1; n <= 5; ++n) {
    const double split = eig.values(2 * n) - eig.values(2 * n - 1);
    dev = std::max(dev, std::abs(split - 2.0 * g * std::sqrt(static_cast<double>(n))));
  }
  return make("jc_polariton_splitting", dev, 1e-10, "|split - 2 g sqrt(n)|, n = 1..5, g = 0.05");
}

OracleResult fock_correlations() {
  const int n_max = 8;
  const DressedBasis b = dressed_basis(rabi_hamiltonian(kDetuned, 0.0, 0.0, n_max, false));
  const SpaceLayout layout({2, n_max + 1});
  double dev = 0.0;
  for (int n = 0; n <= 6; ++n) {
    const Matrix rho = projector(basis_vector(b.dim(), layout.flatten({0, n})));
    const ChannelSample s = observable_channels(rho, b, 0.0);
    const double x = n;
    dev = std::max({dev, std::abs(s.photon_number - x), std::abs(s.g2 - x * (x - 1)),
                    std::abs(s.g3 - x * (x - 1) * (x - 2))});
  }
  return make("fock_correlations", dev, 1e-9, "n, n(n-1), n(n-1)(n-2) for |g,n>, n = 0..6");
}

OracleResult parity_commutator() {
  const Operator h = rabi_hamiltonian(1.3, 0.0, 0.2, 12, false);
  const Operator c = commutator(h, parity_operator(h.layout()));
  const EigenDecomposition eig = hermitian_eig(h);
  const double norm = std::max(std::abs(eig.values.minCoeff()), std::abs(eig.values.maxCoeff()));
  return make("parity_commutator_theta0", max_abs(c.data()) / norm, 1e-12,
              "max |[H, P]| / ||H|| at theta = 0");
}

OracleResult dark_ground_state() {
  SystemConfig cfg;
  cfg = tuned_config(cfg, 2.0);
  const DressedBasis b = dressed_basis(build_rabi_hamiltonian(cfg));
  const ChannelSample s = observable_channels(ground_state_density(b), b, 1.0);
  OracleResult r = make("ground_state_photon_flux", std::abs(s.output_flux), 1e-12,
                        "<X-X+> in the dressed ground state, g1 = 0.15; virtual <a+a> = " +
                            fmt(s.bare_photon_number));
  r.pass = r.pass && s.bare_photon_number > 1e-6;
  return r;
}

}  // namespace

std::vector<OracleResult> run_selftest() {
  return {free_decay_qubit(),  free_decay_resonator(), jc_splitting(),
          fock_correlations(), parity_commutator(),    dark_ground_state()};
}

bool all_pass(const std::vector<OracleResult>& results) {
  return std::all_of(results.begin(), results.end(), [](const OracleResult& r) { return r.pass; });
}

}  // namespace usc_rabi
