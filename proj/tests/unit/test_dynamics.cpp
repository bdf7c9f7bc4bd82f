#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "generators.hpp"
#include "usc_rabi/dynamics.hpp"
#include "usc_rabi/errors.hpp"
#include "usc_rabi/model.hpp"

using namespace usc_rabi;

namespace {

// Small USC case shared with the scipy reference integration: omega_q = 2,
// Delta = 0.5625, g = 0.15, n_max = 4, kappa = gamma = 0.01, gamma_phi = 0.02,
// pi-area pulse (tau = 2, t0 = 10) at omega_{2,0}, from the dressed ground state.
EvolutionProblem reference_problem() {
  const Operator h = rabi_hamiltonian(2.0, std::acos(0.5625 / 2.0), 0.15, 4, false);
  EvolutionProblem p;
  p.basis = dressed_basis(h);
  p.jumps = jump_set(p.basis, 0.01, 0.01, 0.02);
  Drive d;
  d.pulse.area = std::numbers::pi;
  d.pulse.tau = 2.0;
  d.pulse.t0 = 10.0;
  d.pulse.center_freq = p.basis.transition(2);
  p.drive = d;
  p.rho0 = ground_state_density(p.basis);
  p.t_grid = {0.0, 20.0, 40.0};
  return p;
}

EvolutionProblem random_problem(gen::Rng& r, bool drive) {
  const Operator h = rabi_hamiltonian(gen::uniform(r, 0.6, 3.0), gen::uniform(r, 0.0, 1.4),
                                      gen::uniform(r, 0.0, 0.3), gen::integer(r, 2, 5), false);
  EvolutionProblem p;
  p.basis = dressed_basis(h);
  p.jumps = jump_set(p.basis, gen::uniform(r, 0.0, 0.05), gen::uniform(r, 0.0, 0.05),
                     gen::uniform(r, 0.0, 0.05));
  if (drive) {
    Drive d;
    d.pulse.area = gen::uniform(r, 0.0, 2.0);
    d.pulse.tau = gen::uniform(r, 1.0, 3.0);
    d.pulse.t0 = gen::uniform(r, 3.0, 8.0);
    d.pulse.center_freq = gen::uniform(r, 0.5, 3.0);
    p.drive = d;
  }
  p.rho0 = gen::density(r, p.basis.dim());
  p.t_grid = linspace(0.0, 15.0, 16);
  return p;
}

double energy(const EvolutionProblem& p, const Matrix& rho) { return expect(p.basis.h, rho).real(); }

}  // namespace

TEST(Dynamics, MatchesScipyReference) {
  const TimeSeries ts = evolve(reference_problem());
  // scipy DOP853, rtol 1e-12, lab-frame dressed master equation
  EXPECT_NEAR(ts.channel("photon_number")[1], 0.23470915751090873, 1e-6);
  EXPECT_NEAR(ts.channel("qubit_excitation")[1], 0.7882324706259881, 1e-6);
  EXPECT_NEAR(ts.channel("g2")[1], 0.13270342214809272, 1e-6);
  EXPECT_NEAR(ts.channel("photon_number")[2], 0.5676437806555189, 1e-6);
  EXPECT_NEAR(ts.channel("qubit_excitation")[2], 0.4662143439842077, 1e-6);
  EXPECT_NEAR(ts.channel("g2")[2], 0.39669021920357783, 1e-6);
  EXPECT_TRUE(ts.invariants.ok());
}

TEST(Dynamics, ReferenceDriveFrequency) {
  EXPECT_NEAR(reference_problem().basis.transition(2), 1.9822926866342896, 1e-12);
}

TEST(Rhs, BareAndDressedFormsAgree) {
  gen::for_all(25, [](gen::Rng& r) {
    const EvolutionProblem p = random_problem(r, true);
    const Matrix rho = gen::density(r, p.basis.dim());
    const double t = gen::uniform(r, 0.0, 12.0);
    const Matrix bare = lindblad_rhs(rho, t, p);
    const Matrix dressed = p.basis.to_bare(lindblad_rhs_dressed(p.basis.to_dressed(rho), t, p));
    EXPECT_LT(max_abs(bare - dressed), 1e-12);
  });
}

TEST(Rhs, PreservesTraceAndHermiticity) {
  gen::for_all(25, [](gen::Rng& r) {
    const EvolutionProblem p = random_problem(r, true);
    const Matrix d = lindblad_rhs(gen::density(r, p.basis.dim()), gen::uniform(r, 0, 12), p);
    EXPECT_LT(std::abs(d.trace()), 1e-13);
    EXPECT_LT(hermiticity_error(d), 1e-13);
  });
}

TEST(Rhs, GroundStateStationary) {
  EvolutionProblem p = reference_problem();
  p.drive.reset();
  const Matrix d = lindblad_rhs(ground_state_density(p.basis), 0.0, p);
  EXPECT_LE(max_abs(d), 1e-12 * 0.01);
}

TEST(Rhs, PureHamiltonianIsCommutator) {
  EvolutionProblem p = reference_problem();
  p.drive.reset();
  p.jumps = jump_set(p.basis, 0.0, 0.0, 0.0);
  gen::for_all(10, [&](gen::Rng& r) {
    const Matrix rho = gen::density(r, p.basis.dim());
    const Matrix h = p.basis.h.data();
    const Matrix want = -kI * (h * rho - rho * h);
    EXPECT_LT(max_abs(lindblad_rhs(rho, 0.0, p) - want), 1e-13);
  });
}

TEST(Rhs, TwoLevelDecayRate) {
  const double gamma = 0.037;
  const Operator h = rabi_hamiltonian(1.37, 0.0, 0.0, 2, false);
  EvolutionProblem p;
  p.basis = dressed_basis(h);
  p.jumps = jump_set(p.basis, 0.0, gamma, 0.0);
  const Matrix rho = projector(basis_vector(6, h.layout().flatten({1, 0})));
  const Operator see = embed(pauli(PauliAxis::plus) * pauli(PauliAxis::minus), 0, h.layout());
  EXPECT_NEAR(expect(see, lindblad_rhs(rho, 0.0, p)).real(), -gamma, 1e-15);
}

TEST(Evolve, QubitDecayFollowsExponential) {
  const double gamma = 0.02;
  const Operator h = rabi_hamiltonian(1.37, 0.0, 0.0, 3, false);
  EvolutionProblem p;
  p.basis = dressed_basis(h);
  p.jumps = jump_set(p.basis, 0.0, gamma, 0.0);
  p.rho0 = projector(basis_vector(8, h.layout().flatten({1, 0})));
  p.t_grid = linspace(0.0, 150.0, 31);
  const TimeSeries ts = evolve(p);
  const std::vector<double>& y = ts.channel("qubit_excitation");
  for (std::size_t i = 0; i < y.size(); ++i)
    EXPECT_NEAR(y[i] / std::exp(-gamma * ts.times[i]), 1.0, 1e-6);
}

TEST(Evolve, InvariantsHoldOnRandomProblems) {
  gen::for_all(12, [](gen::Rng& r) {
    const TimeSeries ts = evolve(random_problem(r, true));
    const InvariantReport& inv = ts.invariants;
    EXPECT_LE(inv.max_trace_error, 1e-8);
    EXPECT_LE(inv.max_hermiticity_error, 1e-10);
    EXPECT_GE(inv.min_eigenvalue, -1e-8);
    EXPECT_LE(inv.max_purity, 1.0 + 1e-10);
    EXPECT_GE(inv.min_photon_number, -1e-10);
    EXPECT_GE(inv.min_g2, -1e-9);
    EXPECT_GE(inv.min_g3, -1e-9);
    EXPECT_TRUE(inv.ok());
  });
}

TEST(Evolve, UnitaryLimitConservesEnergy) {
  gen::for_all(8, [](gen::Rng& r) {
    EvolutionProblem p = random_problem(r, false);
    p.jumps = jump_set(p.basis, 0.0, 0.0, 0.0);
    p.t_grid = linspace(0.0, 40.0, 5);
    const TimeSeries ts = evolve(p);
    const double e0 = energy(p, p.rho0);
    EXPECT_NEAR(energy(p, ts.final_rho), e0, 1e-8 * std::max(1.0, std::abs(e0)));
  });
}

TEST(Evolve, UnitaryEnergyConservedAfterPulse) {
  EvolutionProblem p = reference_problem();
  p.jumps = jump_set(p.basis, 0.0, 0.0, 0.0);
  p.t_grid = {0.0, 30.0};
  const Matrix after = evolve(p).final_rho;
  EvolutionProblem q = p;
  q.drive.reset();
  q.rho0 = after;
  q.t_grid = {30.0, 60.0, 90.0};
  const double e = energy(q, after);
  EXPECT_NEAR(energy(q, evolve(q).final_rho), e, 1e-8 * std::abs(e));
}

TEST(Evolve, SampleGridPreserved) {
  EvolutionProblem p = reference_problem();
  p.t_grid = {0.0, 0.5, 7.25, 40.0};
  const TimeSeries ts = evolve(p);
  EXPECT_EQ(ts.times, p.t_grid);
  EXPECT_EQ(ts.names, channel_names());
  for (const auto& col : ts.values) EXPECT_EQ(col.size(), 4u);
}

TEST(Evolve, Deterministic) {
  const TimeSeries a = evolve(reference_problem());
  const TimeSeries b = evolve(reference_problem());
  EXPECT_EQ(a.values, b.values);
}

TEST(Evolve, ValidationErrors) {
  EvolutionProblem p = reference_problem();
  p.t_grid = {0.0, 1.0, 1.0};
  EXPECT_THROW(evolve(p), ValidationError);
  p = reference_problem();
  p.t_grid.clear();
  EXPECT_THROW(evolve(p), ValidationError);
  p = reference_problem();
  p.rho0 *= 2.0;
  EXPECT_THROW(evolve(p), ValidationError);
  p = reference_problem();
  p.rho0(0, 1) += 0.1;
  EXPECT_THROW(evolve(p), ValidationError);
  p = reference_problem();
  p.rho0 = Matrix::Identity(3, 3) / 3.0;
  EXPECT_THROW(evolve(p), ValidationError);
  p = reference_problem();
  p.drive->qubit = 3;
  EXPECT_THROW(evolve(p), ValidationError);
  p = reference_problem();
  const Vector plus = (p.basis.state(0) + p.basis.state(1)) / std::sqrt(2.0);
  const Vector minus = (p.basis.state(0) - p.basis.state(1)) / std::sqrt(2.0);
  p.rho0 = 1.2 * projector(plus) - 0.2 * projector(minus);  // unit trace, not PSD
  EXPECT_THROW(evolve(p), ValidationError);
}

TEST(Evolve, ErrorEstimateAbort) {
  EvolutionProblem p = reference_problem();
  p.step.richardson_every = 1;
  p.step.richardson_tol = 1e-300;
  EXPECT_THROW(evolve(p), NumericError);
}

TEST(Evolve, StepBudgetAbort) {
  EvolutionProblem p = reference_problem();
  p.step.max_steps = 10;
  EXPECT_THROW(evolve(p), NumericError);
}

TEST(Observables, GroundStateIsDark) {
  const EvolutionProblem p = reference_problem();
  const ChannelSample s = observable_channels(ground_state_density(p.basis), p.basis, 0.01);
  EXPECT_LE(std::abs(s.photon_number), 1e-12);
  EXPECT_LE(std::abs(s.qubit_excitation), 1e-12);
  EXPECT_LE(std::abs(s.g2), 1e-12);
  EXPECT_LE(std::abs(s.g3), 1e-12);
  EXPECT_GT(s.bare_photon_number, 1e-4);
}

TEST(Observables, FockStates) {
  const Operator h = rabi_hamiltonian(1.37, 0.0, 0.0, 6, false);
  const DressedBasis b = dressed_basis(h);
  const SpaceLayout& l = h.layout();
  const ChannelSample two = observable_channels(projector(basis_vector(14, l.flatten({0, 2}))), b, 0.5);
  EXPECT_NEAR(two.photon_number, 2.0, 1e-12);
  EXPECT_NEAR(two.g2, 2.0, 1e-12);
  EXPECT_NEAR(two.g3, 0.0, 1e-12);
  EXPECT_NEAR(two.output_flux, 1.0, 1e-12);
  const ChannelSample three = observable_channels(projector(basis_vector(14, l.flatten({0, 3}))), b);
  EXPECT_NEAR(three.photon_number, 3.0, 1e-12);
  EXPECT_NEAR(three.g3, 6.0, 1e-12);
}

TEST(Period, SyntheticCosine) {
  gen::for_all(20, [](gen::Rng& r) {
    const double omega = gen::uniform(r, 0.05, 2.0);
    const std::vector<double> t = linspace(0.0, 12 * std::numbers::pi / omega, 4001);
    std::vector<double> y(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) y[i] = std::cos(omega * t[i]);
    EXPECT_NEAR(rabi_period_estimate(t, y) * omega / (2 * std::numbers::pi), 1.0, 0.01);
  });
}

TEST(Period, TooFewPeaks) {
  const std::vector<double> t = linspace(0.0, 10.0, 200);
  std::vector<double> y(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) y[i] = std::sin(t[i]);
  EXPECT_THROW(rabi_period_estimate(t, y), NumericError);
}

TEST(TimeSeries, ChannelLookup) {
  TimeSeries ts;
  ts.add_channel("a", {1.0});
  EXPECT_TRUE(ts.has("a"));
  EXPECT_FALSE(ts.has("b"));
  EXPECT_THROW(ts.channel("b"), std::out_of_range);
  EXPECT_THROW(ts.add_channel("a", {2.0}), std::invalid_argument);
}

TEST(Linspace, Endpoints) {
  const std::vector<double> v = linspace(1.0, 3.0, 5);
  ASSERT_EQ(v.size(), 5u);
  EXPECT_DOUBLE_EQ(v.front(), 1.0);
  EXPECT_DOUBLE_EQ(v.back(), 3.0);
  EXPECT_DOUBLE_EQ(v[2], 2.0);
  EXPECT_THROW(linspace(0, 1, 1), std::invalid_argument);
}
