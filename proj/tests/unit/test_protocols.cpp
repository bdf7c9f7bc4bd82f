#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "usc_rabi/effective.hpp"
#include "usc_rabi/errors.hpp"
#include "usc_rabi/protocols.hpp"

using namespace usc_rabi;

namespace {

class GhzRun : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    cfg_ = new GhzConfig();
    schedule_ = new Schedule(ghz_schedule(*cfg_));
    ideal_ = new ProtocolResult(run_protocol(*cfg_, *schedule_, false));
  }
  static void TearDownTestSuite() {
    delete ideal_;
    delete schedule_;
    delete cfg_;
  }
  static GhzConfig* cfg_;
  static Schedule* schedule_;
  static ProtocolResult* ideal_;
};

GhzConfig* GhzRun::cfg_ = nullptr;
Schedule* GhzRun::schedule_ = nullptr;
ProtocolResult* GhzRun::ideal_ = nullptr;

}  // namespace

TEST(Ghz, HamiltonianHermitian) {
  const GhzConfig cfg;
  EXPECT_LE(build_ghz_hamiltonian(cfg, {2.0, 1.1, 1.3}).hermiticity_error(), 1e-12);
  EXPECT_EQ(cfg.layout().total_dim(), 72);
}

TEST(Ghz, UncoupledSpectrumIsDirectSum) {
  GhzConfig cfg;
  for (GhzQubit& q : cfg.qubits) q.g = 0.0;
  cfg.resonator.n_max = 3;
  const std::array<double, 3> wq = {2.1, 1.2, 1.45};
  const EigenDecomposition e = hermitian_eig(build_ghz_hamiltonian(cfg, wq));
  std::vector<double> bare;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c)
        for (int n = 0; n <= 3; ++n)
          bare.push_back((2 * a - 1) * wq[0] / 2 + (2 * b - 1) * wq[1] / 2 + (2 * c - 1) * wq[2] / 2 + n);
  std::sort(bare.begin(), bare.end());
  for (int i = 0; i < e.size(); ++i) EXPECT_NEAR(e.values(i), bare[i], 1e-12);
}

TEST(Ghz, SpectatorsBarelyShiftTwoPhotonAnticrossing) {
  const GhzConfig cfg;
  const Schedule s = ghz_schedule(cfg);
  SystemConfig single;
  single.qubit = cfg.qubits[0].qubit;
  single.coupling.g1 = cfg.qubits[0].g;
  single.resonator = cfg.resonator;
  const SplittingResult r = minimum_splitting(single, 2, cfg.qubits[0].search_lo, cfg.qubits[0].search_hi);
  EXPECT_NEAR(s.segments[1].omega_q[0] / r.x_star, 1.0, 0.01);
  EXPECT_NEAR(s.segments[1].splitting / r.gap, 1.0, 0.01);
}

TEST(Ghz, ScheduleShape) {
  const GhzConfig cfg;
  const Schedule s = ghz_schedule(cfg);
  ASSERT_EQ(s.segments.size(), 5u);
  EXPECT_EQ(s.segments[0].name, "pi_pulse");
  EXPECT_TRUE(s.segments[0].drive.has_value());
  EXPECT_FALSE(s.segments[1].drive.has_value());
  EXPECT_EQ(s.segments[4].name, "final_pi_pulse");
  // step 1: pi/2 Rabi angle on the two-photon doublet
  EXPECT_NEAR(s.segments[1].duration * s.segments[1].splitting, std::numbers::pi / 2, 1e-12);
  for (int k : {2, 3})
    EXPECT_NEAR(s.segments[k].duration * s.segments[k].splitting, std::numbers::pi, 1e-12);
  // only the resonant qubit leaves its idle point
  const std::array<double, 3> idle = cfg.idle();
  for (int k = 1; k <= 3; ++k)
    for (int q = 0; q < 3; ++q)
      if (q != k - 1) EXPECT_EQ(s.segments[k].omega_q[q], idle[q]);
}

TEST(Ghz, ScheduleDeterministic) {
  const GhzConfig cfg;
  const Schedule a = ghz_schedule(cfg), b = ghz_schedule(cfg);
  for (std::size_t i = 0; i < a.segments.size(); ++i) {
    EXPECT_EQ(a.segments[i].duration, b.segments[i].duration);
    EXPECT_EQ(a.segments[i].omega_q, b.segments[i].omega_q);
  }
}

TEST(Ghz, TargetFidelities) {
  const GhzConfig cfg;
  const Vector t = ghz_target(cfg);
  EXPECT_NEAR(fidelity(projector(t), t), 1.0, 1e-15);
  const Vector ggg0 = basis_vector(cfg.layout().total_dim(), ghz_index(cfg, 0, 0, 0, 0));
  EXPECT_NEAR(fidelity(projector(ggg0), t), 0.5, 1e-15);
  EXPECT_NEAR(ghz_fidelity_phase_max(projector(ggg0), cfg), 0.5, 1e-15);
  Vector flipped = t;
  flipped(ghz_index(cfg, 1, 1, 1, 0)) *= -1.0;
  EXPECT_NEAR(fidelity(projector(flipped), t), 0.0, 1e-15);
  EXPECT_NEAR(ghz_fidelity_phase_max(projector(flipped), cfg), 1.0, 1e-15);
}

TEST(Ghz, VacuumPopulation) {
  const GhzConfig cfg;
  const int d = cfg.layout().total_dim();
  const Matrix rho = 0.25 * projector(basis_vector(d, ghz_index(cfg, 1, 0, 1, 0))) +
                     0.75 * projector(basis_vector(d, ghz_index(cfg, 0, 1, 0, 2)));
  EXPECT_NEAR(vacuum_population(rho, cfg.layout()), 0.25, 1e-15);
}

TEST(Ghz, ValidationRejectsBadRegimes) {
  GhzConfig cfg;
  cfg.qubits[0].g = 0.05;
  EXPECT_THROW(validate(cfg), ValidationError);
  cfg = GhzConfig();
  cfg.qubits[2].g = 0.15;
  EXPECT_THROW(validate(cfg), ValidationError);
  cfg = GhzConfig();
  cfg.qubits[1].idle_ghz = 1.0;
  EXPECT_THROW(validate(cfg), ValidationError);
  cfg = GhzConfig();
  cfg.resonator.n_max = 2;
  EXPECT_THROW(validate(cfg), ValidationError);
  EXPECT_THROW(run_protocol(GhzConfig(), Schedule{}, false), ValidationError);
}

TEST_F(GhzRun, IdealFidelityRegression) {
  // frozen from the first calibrated run at n_max = 8
  EXPECT_NEAR(ideal_->fidelity, 0.922113, 5e-6);
  EXPECT_NEAR(ideal_->fidelity_phase_max, 0.925043, 5e-6);
  EXPECT_GE(ideal_->fidelity, 0.9);
}

TEST_F(GhzRun, PurityPreservedWithoutDissipation) {
  for (const SegmentSnapshot& s : ideal_->snapshots) EXPECT_NEAR(s.purity, 1.0, 1e-8) << s.name;
  EXPECT_TRUE(ideal_->invariants.ok());
}

TEST_F(GhzRun, PhotonsFactorOutAfterStep3) {
  EXPECT_GE(ideal_->vacuum_after_entangling, 0.9);
}

TEST_F(GhzRun, IntermediateAmplitudes) {
  const SegmentSnapshot& s2 = ideal_->snapshots[2];
  ASSERT_EQ(s2.name, "step2");
  const int a = ghz_index(*cfg_, 1, 0, 0, 0), b = ghz_index(*cfg_, 0, 1, 0, 1);
  EXPECT_NEAR(s2.rho(a, a).real(), 0.5, 0.05);
  EXPECT_NEAR(s2.rho(b, b).real(), 0.5, 0.05);
  EXPECT_GT(std::abs(s2.rho(a, b)), 0.4);
}

TEST_F(GhzRun, DissipationNeverHelps) {
  GhzConfig lossy = *cfg_;
  lossy.dissipation.kappa = 1.8e-4;
  lossy.dissipation.gamma = 1.8e-4;
  const ProtocolResult r = run_protocol(lossy, *schedule_, true);
  EXPECT_LE(r.fidelity, ideal_->fidelity);
  EXPECT_LE(r.fidelity_phase_max, ideal_->fidelity_phase_max);
}
