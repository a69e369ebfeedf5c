#include <cmath>

#include <gtest/gtest.h>

#include "jpmcount/constants.hpp"
#include "jpmcount/dynamics.hpp"
#include "jpmcount/error.hpp"
#include "oracles.hpp"

namespace {

using namespace jpmcount;
using namespace jpmcount::dynamics;
using hilbert::JpmLevel;
using constants::kTwoPi;

DetectorParams paper_point() {
  DetectorParams dp;
  dp.g = kTwoPi * 30e6;
  dp.gamma1 = kTwoPi * 162.3e6;
  dp.gamma0 = 1e-3 * dp.gamma1;
  dp.Gamma10 = kTwoPi * 1e6;
  dp.Gamma11 = 5 * dp.Gamma10;
  dp.kappa = kTwoPi * 10e3;
  dp.t_cpt = 17.4e-9;
  dp.t_rr = 300e-9;
  return dp;
}

Operator fock_input(int n, const SpaceLayout& layout) {
  Operator r = Operator::Zero(layout.n_fock(), layout.n_fock());
  r(n, n) = 1.0;
  return hilbert::product_state(r, JpmLevel::Ground);
}

double population(const Operator& rho, int n, JpmLevel j, const SpaceLayout& layout) {
  const int i = layout.index(n, j);
  return rho(i, i).real();
}

TEST(Dynamics, HamiltonianStructure) {
  const SpaceLayout layout(6);
  DetectorParams dp;
  dp.t_cpt = 1e-9;
  EXPECT_EQ(capture_hamiltonian(dp, layout).norm(), 0.0);

  dp.g = 2.0;
  dp.delta_p = 0.7;
  const Operator H = capture_hamiltonian(dp, layout);
  EXPECT_LT(hilbert::hermiticity_defect(H), 1e-15);
  const Operator a = hilbert::annihilation(layout);
  const Operator N = a.adjoint() * a + hilbert::jpm_projector(JpmLevel::Excited, layout);
  EXPECT_LT((H * N - N * H).norm(), 1e-12);
  for (int n = 1; n < 6; ++n) {
    const std::complex<double> el = H(layout.index(n - 1, JpmLevel::Excited),
                                      layout.index(n, JpmLevel::Ground));
    EXPECT_NEAR(el.real(), 2.0 * std::sqrt(n), 1e-14);
  }
}

TEST(Dynamics, ValidateRejectsNegativeRates) {
  DetectorParams dp = paper_point();
  dp.kappa = -1.0;
  EXPECT_THROW(dp.validate(), InvalidArgument);
  dp = paper_point();
  dp.beta = 1.5;
  EXPECT_THROW(dp.validate(), InvalidArgument);
}

TEST(Dynamics, FrozenEvolutionIsIdentity) {
  const SpaceLayout layout(4);
  DetectorParams dp;
  const Operator rho0 = fock_input(2, layout);
  const StageResult r = evolve_capture(rho0, dp, 1e-6, layout);
  EXPECT_LT((r.rho_final - rho0).norm(), 1e-14);
}

TEST(Dynamics, VacuumRabiOscillation) {
  const SpaceLayout layout(3);
  DetectorParams dp;
  dp.g = kTwoPi * 30e6;
  for (double t : {3e-9, 7.1e-9, 12.5e-9}) {
    const StageResult r = evolve_capture(fock_input(1, layout), dp, t, layout);
    const double s = std::sin(dp.g * t);
    EXPECT_NEAR(population(r.rho_final, 0, JpmLevel::Excited, layout), s * s, 1e-6);
    EXPECT_NEAR(r.rho_final.trace().real(), 1.0, 1e-9);
  }
}

TEST(Dynamics, SinglePhotonDecay) {
  const SpaceLayout layout(3);
  DetectorParams dp;
  dp.kappa = 1e7;
  for (double t : {1e-8, 5e-8, 2e-7}) {
    const StageResult r = evolve_capture(fock_input(1, layout), dp, t, layout);
    EXPECT_NEAR(population(r.rho_final, 1, JpmLevel::Ground, layout), std::exp(-dp.kappa * t), 1e-8);
  }
}

TEST(Dynamics, ReadoutIsBinomialLoss) {
  DetectorParams dp;
  dp.kappa = 2e6;
  const double t = 3e-7, eta = std::exp(-dp.kappa * t);
  for (int n : {1, 3, 5}) {
    Operator rho = Operator::Zero(n + 2, n + 2);
    rho(n, n) = 1.0;
    const Operator out = evolve_readout_reset(rho, dp, t);
    const Eigen::VectorXd ref = oracles::binomial_loss(n, eta);
    for (int m = 0; m <= n; ++m) EXPECT_NEAR(out(m, m).real(), ref(m), 1e-8);
  }
  dp.kappa = 0.0;
  Operator rho = Operator::Zero(4, 4);
  rho(2, 2) = 1.0;
  EXPECT_LT((evolve_readout_reset(rho, dp, t) - rho).norm(), 1e-14);
}

TEST(Dynamics, ClickProbabilityLimits) {
  DetectorParams dp = paper_point();
  dp.gamma0 = 0.0;
  EXPECT_NEAR(click_probability(0, dp), 0.0, 1e-15);
  dp.beta = 0.0;
  for (int n = 0; n < 4; ++n) EXPECT_EQ(click_probability(n, dp), 0.0);

  DetectorParams ideal;
  ideal.g = kTwoPi * 30e6;
  ideal.gamma1 = kTwoPi * 100e6;
  ideal.t_cpt = 50.0 / ideal.gamma1 + 10.0 / ideal.g;
  ideal.t_rr = 300e-9;
  EXPECT_GE(click_probability(1, ideal), 0.999);
}

TEST(Dynamics, ClickConsumesPhoton) {
  DetectorParams dp;
  dp.g = kTwoPi * 30e6;
  dp.gamma1 = kTwoPi * 100e6;
  dp.t_cpt = 50.0 / dp.gamma1 + 10.0 / dp.g;
  dp.t_rr = 300e-9;
  const Postmeasurement pm = postmeasurement_distribution(1, 1, dp);
  ASSERT_TRUE(pm.distribution.has_value());
  EXPECT_NEAR((*pm.distribution)(0), 1.0, 1e-9);
}

TEST(Dynamics, DecoupledDetectorIsLossChannel) {
  DetectorParams dp;
  dp.kappa = 1e6;
  dp.t_cpt = 2e-7;
  dp.t_rr = 3e-7;
  const int n = 4;
  const Postmeasurement no_click = postmeasurement_distribution(n, 0, dp);
  EXPECT_NEAR(no_click.probability, 1.0, 1e-12);
  const Eigen::VectorXd ref = oracles::binomial_loss(n, std::exp(-dp.kappa * (dp.t_cpt + dp.t_rr)));
  for (int m = 0; m <= n; ++m) EXPECT_NEAR((*no_click.distribution)(m), ref(m), 1e-8);
  const Postmeasurement click = postmeasurement_distribution(n, 1, dp);
  EXPECT_LT(click.probability, 1e-12);
  EXPECT_FALSE(click.distribution.has_value());
}

TEST(Dynamics, ConditionalDistributionsNormalized) {
  const DetectorParams dp = paper_point();
  const auto table = cycle_outcomes(dp, 6);
  for (int n = 0; n < 6; ++n) {
    EXPECT_NEAR(table[n][0].probability + table[n][1].probability, 1.0, 1e-12);
    for (int i = 0; i < 2; ++i) {
      if (!table[n][i].distribution) continue;
      EXPECT_NEAR(table[n][i].distribution->sum(), 1.0, 1e-9);
      EXPECT_GE(table[n][i].distribution->minCoeff(), 0.0);
    }
  }
}

TEST(Dynamics, SectorEngineMatchesDenseLindblad) {
  DetectorParams dp = paper_point();
  dp.delta_p = kTwoPi * 5e6;
  dp.kappa = kTwoPi * 1e6;
  for (int n = 0; n < 4; ++n) {
    EXPECT_NEAR(click_probability(n, dp, CaptureEngine::Sectors),
                click_probability(n, dp, CaptureEngine::DenseLindblad), 1e-8);
    for (int i = 0; i < 2; ++i) {
      const auto a = postmeasurement_distribution(n, i, dp, CaptureEngine::Sectors);
      const auto b = postmeasurement_distribution(n, i, dp, CaptureEngine::DenseLindblad);
      ASSERT_EQ(a.distribution.has_value(), b.distribution.has_value());
      if (a.distribution) {
        EXPECT_LT((*a.distribution - *b.distribution).cwiseAbs().maxCoeff(), 1e-8);
      }
    }
  }
}

TEST(Dynamics, FockDiagonalStructureAndTrace) {
  DetectorParams dp = paper_point();
  dp.kappa = kTwoPi * 1e6;
  const SpaceLayout layout(6);
  for (double t : {5e-9, 17.4e-9, 40e-9}) {
    const StageResult r = evolve_capture(fock_input(3, layout), dp, t, layout);
    EXPECT_NEAR(r.rho_final.trace().real(), 1.0, 1e-9);
    const Operator red = hilbert::partial_trace_jpm(r.rho_final, layout);
    Operator off = red;
    off.diagonal().setZero();
    EXPECT_LT(off.norm(), 1e-10);
    const Eigen::SelfAdjointEigenSolver<Operator> es(r.rho_final);
    EXPECT_GT(es.eigenvalues().minCoeff(), -1e-8);
  }
}

TEST(Dynamics, TruncationLeakDetected) {
  const SpaceLayout layout(3);
  Operator r = Operator::Zero(3, 3);
  r(2, 2) = 1.0;
  DetectorParams dp;
  EXPECT_THROW(evolve_capture(hilbert::product_state(r, JpmLevel::Ground), dp, 1e-9, layout),
               TruncationError);
}

}  // namespace
