#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "generators.hpp"
#include "usc_rabi/model.hpp"

using namespace usc_rabi;

namespace {

double norm_of(const Operator& op) {
  const EigenDecomposition e = hermitian_eig(0.5 * (op + op.adjoint()));
  return std::max(std::abs(e.values.minCoeff()), std::abs(e.values.maxCoeff()));
}

double two_photon_gap(double omega_q_ghz) {
  SystemConfig cfg;
  cfg.qubit = tuned_to(cfg.qubit, omega_q_ghz);
  const EigenDecomposition e = hermitian_eig(build_rabi_hamiltonian(cfg));
  return e.values(3) - e.values(2);
}

}  // namespace

TEST(Qubit, ZeroFluxGivesGap) {
  QubitParams q;
  EXPECT_DOUBLE_EQ(qubit_frequency_ghz(q), 2.25);
  EXPECT_DOUBLE_EQ(mixing_angle(q), 0.0);
}

TEST(Qubit, ClosedFormFrequency) {
  QubitParams q;
  q.flux_offset = 7.645 / flux_frequency_scale_ghz(q.ip2_na);
  // hypot(2.25, 7.645) evaluated independently
  EXPECT_NEAR(qubit_frequency_ghz(q), 7.96922361337665, 1e-12);
}

TEST(Qubit, FluxScaleIsTwoIpPhi0OverH) {
  // 630 nA * Phi_0 / h with CODATA 2018 constants
  EXPECT_NEAR(flux_frequency_scale_ghz(630.0), 1966.0753580159428, 1e-6);
}

TEST(Qubit, MixingAngleAtResonancePoint) {
  const QubitParams q = tuned_to(QubitParams{}, 7.97);
  EXPECT_NEAR(mixing_angle(q), 1.2845965197467475, 1e-12);
  EXPECT_NEAR(qubit_frequency_ghz(q), 7.97, 1e-12);
}

TEST(Qubit, SmallGapApproachesHalfPi) {
  QubitParams q;
  q.delta_ghz = 1e-9;
  q.flux_offset = 0.004;
  EXPECT_NEAR(mixing_angle(q), std::numbers::pi / 2, 1e-9);
}

TEST(Qubit, FrequencyNeverBelowGap) {
  gen::for_all(200, [](gen::Rng& r) {
    QubitParams q;
    q.delta_ghz = gen::uniform(r, 0.1, 10.0);
    q.flux_offset = gen::uniform(r, -0.01, 0.01);
    EXPECT_GE(qubit_frequency_ghz(q), q.delta_ghz);
    const double theta = mixing_angle(q);
    EXPECT_GE(theta, 0.0);
    EXPECT_LE(theta, std::numbers::pi / 2 + 1e-15);
  });
}

TEST(Qubit, TuningBelowGapRejected) {
  EXPECT_THROW(flux_for_frequency(QubitParams{}, 2.0), std::invalid_argument);
}

TEST(Resonator, ModeFrequencies) {
  ResonatorSpec half, quarter;
  quarter.geometry = Geometry::quarter_wave;
  EXPECT_DOUBLE_EQ(mode_frequency(half, 2), 2.0);
  EXPECT_DOUBLE_EQ(mode_frequency(quarter, 2), 3.0);
  EXPECT_DOUBLE_EQ(mode_frequency(half, 1), 1.0);
  EXPECT_DOUBLE_EQ(mode_frequency(quarter, 1), 1.0);
  EXPECT_DOUBLE_EQ(mode_frequency_ghz(half, 2), 8.0);
  EXPECT_THROW(mode_frequency(half, 0), std::invalid_argument);
}

TEST(Resonator, GeometryNames) {
  EXPECT_EQ(geometry_from_string(to_string(Geometry::quarter_wave)), Geometry::quarter_wave);
  EXPECT_EQ(geometry_from_string("half_wave"), Geometry::half_wave);
  EXPECT_THROW(geometry_from_string("full_wave"), std::invalid_argument);
}

TEST(Units, RoundTrip) {
  SystemConfig cfg;
  cfg.resonator.omega1_ghz = 4.0;
  EXPECT_NEAR(cfg.natural_to_ghz(cfg.ghz_to_natural(4.0)) / 4.0 - 1.0, 0.0, 1e-12);
  EXPECT_DOUBLE_EQ(cfg.ghz_to_natural(4.0), 1.0);
}

TEST(Hamiltonian, UncoupledSpectrum) {
  const double wq = 1.37;
  const int n_max = 5;
  const EigenDecomposition e = hermitian_eig(rabi_hamiltonian(wq, 0.4, 0.0, n_max, false));
  std::vector<double> expected;
  for (int n = 0; n <= n_max; ++n) {
    expected.push_back(-wq / 2 + n);
    expected.push_back(wq / 2 + n);
  }
  std::sort(expected.begin(), expected.end());
  for (int i = 0; i < e.size(); ++i) EXPECT_NEAR(e.values(i), expected[i], 1e-12);
}

TEST(Hamiltonian, HermitianProperty) {
  gen::for_all(50, [](gen::Rng& r) {
    SystemConfig cfg;
    cfg.qubit = tuned_to(cfg.qubit, gen::uniform(r, 2.3, 14.0));
    cfg.coupling.g1 = gen::uniform(r, 0.0, 0.4);
    cfg.coupling.rwa = gen::integer(r, 0, 1) == 1;
    cfg.resonator.n_max = gen::integer(r, 2, 20);
    EXPECT_LE(build_rabi_hamiltonian(cfg).hermiticity_error(), 1e-12);
  });
}

TEST(Hamiltonian, ParityConservedOnlyAtThetaZero) {
  gen::for_all(30, [](gen::Rng& r) {
    const double g = gen::uniform(r, 0.05, 0.4);
    const double wq = gen::uniform(r, 0.5, 4.0);
    const int n = gen::integer(r, 3, 14);
    const Operator h0 = rabi_hamiltonian(wq, 0.0, g, n, false);
    const Operator p = parity_operator(h0.layout());
    EXPECT_LE(max_abs(commutator(h0, p).data()), 1e-12 * norm_of(h0));
    const Operator h1 = rabi_hamiltonian(wq, gen::uniform(r, 0.2, 1.4), g, n, false);
    EXPECT_GT(max_abs(commutator(h1, p).data()), 1e-3 * g);
  });
}

TEST(Hamiltonian, JaynesCummingsConservesExcitations) {
  gen::for_all(30, [](gen::Rng& r) {
    const double g = gen::uniform(r, 0.05, 0.4);
    const double theta = gen::uniform(r, 0.0, 1.5);
    const int n = gen::integer(r, 3, 14);
    const Operator jc = rabi_hamiltonian(1.7, theta, g, n, true);
    const Operator nexc = excitation_number_operator(jc.layout());
    EXPECT_LE(max_abs(commutator(jc, nexc).data()), 1e-12 * norm_of(jc));
    const Operator full = rabi_hamiltonian(1.7, theta, g, n, false);
    EXPECT_GT(max_abs(commutator(full, nexc).data()), 1e-3 * g);
  });
}

TEST(Hamiltonian, TwoPhotonAnticrossingNearTwiceOmega1) {
  const double at = two_photon_gap(7.976);
  EXPECT_LT(at, 0.05);
  EXPECT_GT(two_photon_gap(7.7), 2 * at);
  EXPECT_GT(two_photon_gap(8.25), 2 * at);
}

TEST(Hamiltonian, RejectsBadConfig) {
  SystemConfig cfg;
  cfg.resonator.n_max = 1;
  EXPECT_THROW(build_rabi_hamiltonian(cfg), std::invalid_argument);
  cfg = SystemConfig{};
  cfg.coupling.g1 = -0.1;
  EXPECT_THROW(build_rabi_hamiltonian(cfg), std::invalid_argument);
}

TEST(ExcitationNumber, BareStates) {
  const SpaceLayout l({2, 5});
  const Operator n = excitation_number_operator(l);
  EXPECT_NEAR(expect(n, basis_vector(10, l.flatten({0, 0}))).real(), 0.0, 1e-15);
  EXPECT_NEAR(expect(n, basis_vector(10, l.flatten({1, 2}))).real(), 3.0, 1e-15);
}

TEST(ExcitationNumber, GroundStateOfFullModelIsNotEmpty) {
  SystemConfig cfg;
  cfg.qubit = tuned_to(cfg.qubit, 7.97);
  const Operator h = build_rabi_hamiltonian(cfg);
  const EigenDecomposition e = hermitian_eig(h);
  const Operator n = excitation_number_operator(h.layout());
  EXPECT_GT(expect(n, Vector(e.vectors.col(0))).real(), 1e-4);
}

TEST(Parity, SignsAndSquare) {
  const SpaceLayout l({2, 4});
  const Operator p = parity_operator(l);
  EXPECT_DOUBLE_EQ(p.data()(l.flatten({0, 0}), l.flatten({0, 0})).real(), 1.0);
  EXPECT_DOUBLE_EQ(p.data()(l.flatten({1, 0}), l.flatten({1, 0})).real(), -1.0);
  EXPECT_LT(max_abs((p * p).data() - Matrix::Identity(8, 8)), 1e-15);
}

TEST(Parity, MultiQubitLayout) {
  const SpaceLayout l({2, 2, 2, 3});
  const Operator p = parity_operator(l);
  EXPECT_DOUBLE_EQ(p.data()(l.flatten({1, 1, 0, 1}), l.flatten({1, 1, 0, 1})).real(), -1.0);
  EXPECT_DOUBLE_EQ(p.data()(l.flatten({1, 1, 1, 1}), l.flatten({1, 1, 1, 1})).real(), 1.0);
}

TEST(Pulse, TailsPeakAndArea) {
  PulseSpec p;
  p.area = 0.087;
  p.tau = 3.0;
  p.t0 = 15.0;
  p.center_freq = 2.0 * std::numbers::pi / p.t0;  // cos(omega t0) = 1
  const SpaceLayout l({2, 3});
  const double peak = p.area / (p.tau * std::sqrt(2 * std::numbers::pi));
  EXPECT_NEAR(p.peak(), peak, 1e-15);
  EXPECT_NEAR(drive_hamiltonian(p, p.t0, l).max_norm(), peak, 1e-15);
  EXPECT_LE(drive_hamiltonian(p, p.t0 + 8.5 * p.tau, l).max_norm(), 1e-10 * peak);
  EXPECT_LE(drive_hamiltonian(p, p.t0 - 8.5 * p.tau, l).max_norm(), 1e-10 * peak);

  // Simpson over +-12 tau
  const int n = 4000;
  const double a = p.t0 - 12 * p.tau, b = p.t0 + 12 * p.tau, h = (b - a) / n;
  double s = p.envelope(a) + p.envelope(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * p.envelope(a + i * h);
  EXPECT_NEAR(s * h / 3.0, p.area, 1e-12);
}

TEST(Pulse, Validation) {
  PulseSpec p;
  p.tau = 0.0;
  EXPECT_THROW(validate(p), std::invalid_argument);
  p.tau = 1.0;
  p.area = -1.0;
  EXPECT_THROW(validate(p), std::invalid_argument);
}

TEST(Field, MatchesLadderSum) {
  const SpaceLayout l({2, 2, 4});
  const Operator a = embed(annihilation(3), 2, l);
  EXPECT_LT(max_abs(field_operator(l).data() - (a + a.adjoint()).data()), 1e-15);
}
