#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "jpmcount/constants.hpp"
#include "jpmcount/error.hpp"
#include "jpmcount/metrics.hpp"
#include "jpmcount/states.hpp"
#include "oracles.hpp"

namespace {

using namespace jpmcount;
using namespace jpmcount::stats;
using counting::Povm;
using counting::Technique;
using constants::kTwoPi;

dynamics::DetectorParams paper_point() {
  dynamics::DetectorParams dp;
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

TEST(States, Fock) {
  const PhotonDistribution v = fock(0, 4);
  EXPECT_EQ(v.p(0), 1.0);
  EXPECT_EQ(v.p.sum(), 1.0);
  const PhotonDistribution f = fock(3, 6);
  EXPECT_EQ(f.p(3), 1.0);
  EXPECT_EQ(f.mean(), 3.0);
  EXPECT_THROW(fock(5, 4), InvalidArgument);
}

TEST(States, Coherent) {
  EXPECT_EQ(coherent(0.0, 5).p(0), 1.0);
  const PhotonDistribution c = coherent(3.0, 25);
  EXPECT_NEAR(c.mean(), 3.0, 1e-10);
  EXPECT_LT(poisson_tail(3.0, 25), 1e-12);
  EXPECT_THROW(coherent(3.0, 8), TruncationError);
}

TEST(States, SqueezedVacuum) {
  EXPECT_EQ(squeezed_vacuum(0.0, 4).p(0), 1.0);
  const PhotonDistribution s = squeezed_vacuum(1.0, 80);
  EXPECT_NEAR(s.p.sum(), 1.0, 1e-8);
  EXPECT_NEAR(s.mean(), std::pow(std::sinh(1.0), 2), 1e-8);
  for (int n = 1; n <= 80; n += 2) EXPECT_EQ(s.p(n), 0.0);
  // Closed form of the even weights.
  const double t = std::tanh(1.0);
  for (int n = 0; n <= 10; ++n) {
    const double ref = std::exp(std::lgamma(2 * n + 1) - 2 * std::lgamma(n + 1)) *
                       std::pow(t, 2 * n) / std::pow(4.0, n) / std::cosh(1.0);
    EXPECT_NEAR(s.p(2 * n), ref, 1e-14);
  }
  // The mass beyond 40 photons at r = 1 is about 2e-6, above the cutoff.
  EXPECT_THROW(squeezed_vacuum(1.0, 40), TruncationError);
}

TEST(Metrics, IdealPovmReproducesTruncatedDistribution) {
  const PhotonDistribution c = coherent(1.5, 20);
  const Povm ideal = counting::ideal_povm(4, 21);
  const ClickDistribution clicks = photocount_distribution(c, ideal);
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(clicks.p(k), c.p(k), 1e-15);
  EXPECT_NEAR(clicks.p(4), c.p.tail(17).sum(), 1e-15);
  const ClickDistribution truncated = ideal_statistics(c, 4);
  EXPECT_NEAR(truncated.p(4), c.p(4), 1e-15);
  EXPECT_NEAR(ideal_statistics(c, 4, true).p.sum(), 1.0, 1e-15);
}

TEST(Metrics, VacuumWithoutDarkCounts) {
  dynamics::DetectorParams dp = paper_point();
  dp.gamma0 = 0.0;
  const Povm p = counting::build_povm(counting::build_kernel(dp, 4), 3, Technique::Binomial);
  EXPECT_NEAR(photocount_distribution(fock(0, 3), p).p(0), 1.0, 1e-14);
}

TEST(Metrics, ProbabilityPreserved) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    Povm p;
    p.M = 4;
    p.P = oracles::random_stochastic_matrix(5, 7, rng);
    PhotonDistribution s;
    s.p = oracles::random_stochastic_matrix(7, 1, rng).col(0);
    EXPECT_NEAR(photocount_distribution(s, p).p.sum(), 1.0, 1e-8);
  }
  Povm p = counting::ideal_povm(3, 4);
  EXPECT_THROW(photocount_distribution(fock(5, 6), p), InvalidArgument);
}

TEST(Metrics, Resolution) {
  EXPECT_EQ(resolution(counting::ideal_povm(5, 8)), 1.0);
  Povm u;
  u.M = 3;
  u.P = Eigen::MatrixXd::Constant(4, 6, 0.25);
  EXPECT_NEAR(resolution(u), 0.25, 1e-15);
}

TEST(Metrics, Bhattacharyya) {
  Eigen::VectorXd p(2), q(2);
  p << 0.5, 0.5;
  q << 1.0, 0.0;
  EXPECT_NEAR(bhattacharyya(p, q), std::sqrt(0.5), 1e-15);
  EXPECT_NEAR(bhattacharyya(p, p), 1.0, 1e-15);
  Eigen::VectorXd r(2);
  r << 0.0, 1.0;
  EXPECT_EQ(bhattacharyya(q, r), 0.0);
  EXPECT_THROW(bhattacharyya(p, Eigen::VectorXd::Ones(3)), InvalidArgument);

  std::mt19937_64 rng(9);
  const Eigen::MatrixXd a = oracles::random_stochastic_matrix(6, 2, rng);
  const Eigen::VectorXd x = a.col(0), y = a.col(1);
  EXPECT_DOUBLE_EQ(bhattacharyya(x, y), bhattacharyya(y, x));
  const Eigen::VectorXd xr = x.reverse(), yr = y.reverse();
  EXPECT_NEAR(bhattacharyya(xr, yr), bhattacharyya(x, y), 1e-15);
  EXPECT_LE(bhattacharyya(x, y), 1.0);
}

TEST(Metrics, FockThreeFalseCountsGolden) {
  const auto kernel = counting::build_kernel(paper_point(), 6);
  std::ifstream in(std::string(JPMCOUNT_TEST_DATA) + "/stats_fock3.csv");
  ASSERT_TRUE(in.good());
  std::string line;
  std::getline(in, line);
  int rows = 0;
  for (Technique t : {Technique::Binomial, Technique::Geometric}) {
    const ClickDistribution c = photocount_distribution(fock(3, 5), counting::build_povm(kernel, 5, t));
    EXPECT_GT(c.p.tail(2).sum(), 0.0);
    for (int k = 0; k <= 5; ++k) {
      ASSERT_TRUE(std::getline(in, line));
      std::istringstream ss(line);
      std::string tech, kk, v;
      std::getline(ss, tech, ',');
      std::getline(ss, kk, ',');
      std::getline(ss, v, ',');
      EXPECT_EQ(tech, counting::to_string(t));
      EXPECT_EQ(std::stoi(kk), k);
      EXPECT_NEAR(c.p(k), std::stod(v), 1e-10);
      ++rows;
    }
  }
  EXPECT_EQ(rows, 12);
}

}  // namespace
