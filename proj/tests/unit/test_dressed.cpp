#include <gtest/gtest.h>

#include <cmath>

#include "generators.hpp"
#include "usc_rabi/dressed.hpp"
#include "usc_rabi/dynamics.hpp"
#include "usc_rabi/model.hpp"

using namespace usc_rabi;

namespace {

DressedBasis two_photon_basis(int n_max = 10) {
  SystemConfig cfg;
  cfg.resonator.n_max = n_max;
  cfg.qubit = tuned_to(cfg.qubit, 7.976197);
  return dressed_basis(build_rabi_hamiltonian(cfg));
}

DressedBasis random_basis(gen::Rng& r) {
  const Operator h = rabi_hamiltonian(gen::uniform(r, 0.5, 3.5), gen::uniform(r, 0.0, 1.5),
                                      gen::uniform(r, 0.0, 0.35), gen::integer(r, 3, 12),
                                      false);
  return dressed_basis(h);
}

}  // namespace

TEST(Dressed, UncoupledPlusIsAnnihilation) {
  const Operator h = rabi_hamiltonian(1.37, 0.0, 0.0, 6, false);
  const DressedBasis b = dressed_basis(h);
  const Operator a = embed(annihilation(6), 1, h.layout());
  EXPECT_LT(max_abs(b.x_plus.data() - a.data()), 1e-12);
  const Operator sm = embed(pauli(PauliAxis::minus), 0, h.layout());
  EXPECT_LT(max_abs(b.c_plus.data() - sm.data()), 1e-12);
}

TEST(Dressed, LevelsAscend) {
  gen::for_all(30, [](gen::Rng& r) {
    const DressedBasis b = random_basis(r);
    for (int k = 1; k < b.dim(); ++k) EXPECT_GE(b.energy(k), b.energy(k - 1));
  });
}

TEST(Dressed, DecompositionReconstructsField) {
  gen::for_all(30, [](gen::Rng& r) {
    const DressedBasis b = random_basis(r);
    const Matrix xp = b.x_plus.data();
    const Matrix diag = b.to_bare(Matrix(b.x_dressed.diagonal().asDiagonal()));
    EXPECT_LT(max_abs(xp + xp.adjoint() + diag - b.x_bare.data()), 1e-12);
  });
}

TEST(Dressed, PlusIsStrictlyUpperInDressedBasis) {
  gen::for_all(30, [](gen::Rng& r) {
    const DressedBasis b = random_basis(r);
    for (const Operator* op : {&b.x_plus, &b.c_plus}) {
      const Matrix d = b.to_dressed(op->data());
      double lower = 0.0;
      for (int j = 0; j < b.dim(); ++j)
        for (int k = 0; k <= j; ++k) lower = std::max(lower, std::abs(d(j, k)));
      EXPECT_LE(lower, 1e-14 * std::max(1.0, max_abs(d)) * b.dim());
    }
  });
}

TEST(Dressed, PlusAnnihilatesGroundState) {
  gen::for_all(30, [](gen::Rng& r) {
    const DressedBasis b = random_basis(r);
    EXPECT_LE((b.x_plus.data() * b.state(0)).norm(), 1e-12);
    EXPECT_LE((b.c_plus.data() * b.state(0)).norm(), 1e-12);
  });
}

TEST(Dressed, GroundStateDarkButNotEmpty) {
  const DressedBasis b = two_photon_basis();
  const Matrix rho = ground_state_density(b);
  const Matrix xmxp = b.x_plus.data().adjoint() * b.x_plus.data();
  EXPECT_LE(std::abs(expect(Operator(b.layout, xmxp), rho)), 1e-12);
  const Operator n = embed(number_operator(b.layout.factor(1) - 1), 1, b.layout);
  EXPECT_GT(expect(n, rho).real(), 1e-3);
}

TEST(Dressed, PlusOperatorOfSigmaX) {
  const DressedBasis b = two_photon_basis();
  const Operator c = plus_operator(b, b.sigma_x_bare[0]);
  EXPECT_LT(max_abs(c.data() - b.c_plus.data()), 1e-15);
  EXPECT_LE((c.data() * b.state(0)).norm(), 1e-12);
}

TEST(Dressed, PositivePart) {
  Matrix m(3, 3);
  m << 1, 2, 3, 4, 5, 6, 7, 8, 9;
  Matrix want = Matrix::Zero(3, 3);
  want(0, 1) = 2;
  want(0, 2) = 3;
  want(1, 2) = 6;
  EXPECT_EQ(positive_part(m), want);
}

TEST(Jumps, UncoupledResonatorRatesAreFockNumbers) {
  const Operator h = rabi_hamiltonian(1.37, 0.0, 0.0, 5, false);
  const DressedBasis b = dressed_basis(h);
  const double kappa = 0.01;
  const JumpSet js = jump_set(b, kappa, 0.0, 0.0);
  const SpaceLayout& l = b.layout;
  for (const Jump& jp : js.jumps) ASSERT_EQ(jp.channel, JumpChannel::resonator);
  for (int q = 0; q < 2; ++q) {
    for (int n = 1; n <= 5; ++n) {
      const int k = dressed_index_of(b, l.flatten({q, n}));
      const int j = dressed_index_of(b, l.flatten({q, n - 1}));
      EXPECT_NEAR(js.rates(j, k), kappa * n, 1e-14);
    }
  }
  int count = 0;
  for (int j = 0; j < b.dim(); ++j)
    for (int k = 0; k < b.dim(); ++k) count += js.rates(j, k) > 0.0;
  EXPECT_EQ(count, 10);
}

TEST(Jumps, NoDephasingWhenRateZero) {
  const DressedBasis b = two_photon_basis(6);
  const JumpSet js = jump_set(b, 1e-3, 1e-3, 0.0);
  EXPECT_EQ(max_abs(js.dephasing_op(b).data()), 0.0);
}

TEST(Jumps, DephasingWeights) {
  const DressedBasis b = two_photon_basis(6);
  const double gp = 0.02;
  const JumpSet js = jump_set(b, 0.0, 0.0, gp);
  for (int j = 0; j < b.dim(); ++j)
    EXPECT_NEAR(js.dephasing[0](j), std::sqrt(gp / 2) * b.sigma_z_dressed[0](j, j).real(), 1e-15);
}

TEST(Jumps, RatesNonNegativeAndDownward) {
  gen::for_all(30, [](gen::Rng& r) {
    const DressedBasis b = random_basis(r);
    const double kappa = gen::uniform(r, 0.0, 0.1), gamma = gen::uniform(r, 0.0, 0.1);
    const JumpSet js = jump_set(b, kappa, gamma, 0.0);
    for (const Jump& jp : js.jumps) {
      EXPECT_GE(jp.rate, 0.0);
      EXPECT_LT(jp.j, jp.k);
    }
    EXPECT_GE(js.rates.minCoeff(), 0.0);
  });
}

TEST(Jumps, ZeroKappaGivesNoResonatorJumps) {
  const DressedBasis b = two_photon_basis(6);
  const JumpSet js = jump_set(b, 0.0, 0.01, 0.0);
  for (const Jump& jp : js.jumps) EXPECT_EQ(jp.channel, JumpChannel::qubit);
}

TEST(Jumps, RatesFollowMatrixElements) {
  const DressedBasis b = two_photon_basis(8);
  const double kappa = 2e-4, gamma = 3e-4;
  const JumpSet js = jump_set(b, kappa, gamma, 0.0);
  for (const Jump& jp : js.jumps) {
    const Matrix& m = jp.channel == JumpChannel::resonator ? b.x_dressed : b.sigma_x_dressed[0];
    const double r = jp.channel == JumpChannel::resonator ? kappa : gamma;
    EXPECT_NEAR(jp.rate, r * std::norm(m(jp.j, jp.k)), 1e-15);
  }
}

TEST(Jumps, SplitPairDecaysThroughQubit) {
  const DressedBasis b = two_photon_basis(10);
  const JumpSet js = jump_set(b, 0.0, 1.0, 0.0);
  for (int k : {2, 3}) {
    double out = 0.0;
    for (int j = 0; j < k; ++j) out += js.rates(j, k);
    EXPECT_GT(out, 1e-3);
  }
}

TEST(Jumps, ParitySelectionAtThetaZero) {
  gen::for_all(20, [](gen::Rng& r) {
    const Operator h = rabi_hamiltonian(gen::uniform(r, 0.7, 3.1), 0.0,
                                        gen::uniform(r, 0.05, 0.35), gen::integer(r, 4, 10), false);
    const DressedBasis b = dressed_basis(h);
    const Matrix p = b.to_dressed(parity_operator(h.layout()).data());
    for (int j = 0; j < b.dim(); ++j) {
      for (int k = 0; k < b.dim(); ++k) {
        if (std::abs(p(j, j) - p(k, k)) > 1e-6) continue;
        EXPECT_LE(std::abs(b.x_dressed(j, k)), 1e-12);
        EXPECT_LE(std::abs(b.sigma_x_dressed[0](j, k)), 1e-12);
      }
    }
  });
}

TEST(Jumps, NegativeRatesRejected) {
  const DressedBasis b = two_photon_basis(4);
  EXPECT_THROW(jump_set(b, -1.0, 0.0, 0.0), std::invalid_argument);
  EXPECT_THROW(jump_set(b, 0.0, 0.0, -1e-3), std::invalid_argument);
}

TEST(Labels, BareLabelAndCharacter) {
  const SpaceLayout l({2, 2, 2, 4});
  EXPECT_EQ(bare_label(l, l.flatten({0, 1, 0, 2})), "g,e,g,2");
  const DressedBasis b = two_photon_basis(8);
  EXPECT_EQ(bare_character(b, 0), "g,0");
  EXPECT_EQ(bare_character(b, 1), "g,1");
}
