#include <complex>
#include <random>

#include <gtest/gtest.h>

#include "jpmcount/error.hpp"
#include "jpmcount/hilbert.hpp"

namespace {

using namespace jpmcount;
using namespace jpmcount::hilbert;
using cd = std::complex<double>;

Operator random_matrix(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Operator m(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) m(i, j) = cd(n(rng), n(rng));
  return m;
}

Operator random_density(int dim, std::mt19937_64& rng) {
  const Operator a = random_matrix(dim, rng);
  Operator rho = a * a.adjoint();
  return rho / rho.trace();
}

TEST(Hilbert, LayoutRoundTrip) {
  const SpaceLayout layout(5);
  EXPECT_EQ(layout.dim(), 15);
  for (int idx = 0; idx < layout.dim(); ++idx) {
    const auto [n, level] = layout.decompose(idx);
    EXPECT_EQ(layout.index(n, level), idx);
  }
  EXPECT_EQ(layout.index(2, JpmLevel::Excited), 7);
}

TEST(Hilbert, ParseLevel) {
  EXPECT_EQ(parse_jpm_level("0"), JpmLevel::Ground);
  EXPECT_EQ(parse_jpm_level("1"), JpmLevel::Excited);
  EXPECT_EQ(parse_jpm_level("c"), JpmLevel::Captured);
  EXPECT_THROW(parse_jpm_level("2"), InvalidArgument);
}

TEST(Hilbert, AnnihilationTwoLevels) {
  const Operator a = fock_annihilation(2);
  EXPECT_EQ(a(0, 1), cd(1.0, 0.0));
  EXPECT_EQ(a(0, 0), cd(0.0, 0.0));
  EXPECT_EQ(a(1, 0), cd(0.0, 0.0));
  EXPECT_EQ(a(1, 1), cd(0.0, 0.0));
}

TEST(Hilbert, NumberOperatorAndCommutator) {
  const SpaceLayout layout(6);
  const Operator a = annihilation(layout);
  const Operator ad = creation(layout);
  const Operator number = ad * a;
  for (int n = 0; n < 6; ++n) {
    for (JpmLevel j : {JpmLevel::Ground, JpmLevel::Excited, JpmLevel::Captured}) {
      const int i = layout.index(n, j);
      EXPECT_NEAR(std::abs(number(i, i) - cd(n)), 0.0, 1e-14);
    }
  }
  const Operator comm = a * ad - ad * a;
  for (int i = 0; i < layout.dim(); ++i) {
    const int n = layout.decompose(i).first;
    if (n < 5) {
      EXPECT_NEAR(std::abs(comm(i, i) - 1.0), 0.0, 1e-12);
    }
  }
}

TEST(Hilbert, ProjectorCompletenessAndIdempotence) {
  const SpaceLayout layout(4);
  Operator sum = Operator::Zero(layout.dim(), layout.dim());
  for (JpmLevel j : {JpmLevel::Ground, JpmLevel::Excited, JpmLevel::Captured}) sum += jpm_projector(j, layout);
  EXPECT_LT((sum - Operator::Identity(layout.dim(), layout.dim())).norm(), 1e-15);
  const Operator pc = jpm_projector(JpmLevel::Captured, layout);
  EXPECT_LT((pc * pc - pc).norm(), 1e-15);

  Operator fock = Operator::Zero(4, 4);
  fock(2, 2) = 1.0;
  const Operator rho = product_state(fock, JpmLevel::Ground);
  EXPECT_NEAR((rho * jpm_projector(JpmLevel::Ground, layout)).trace().real(), 1.0, 1e-15);
}

TEST(Hilbert, PartialTraceProductAndMixed) {
  std::mt19937_64 rng(7);
  const SpaceLayout layout(4);
  const Operator varrho = random_density(4, rng);
  EXPECT_LT((partial_trace_jpm(product_state(varrho, JpmLevel::Ground), layout) - varrho).norm(), 1e-15);

  const Operator mixed = Operator::Identity(12, 12) / 12.0;
  EXPECT_LT((partial_trace_jpm(mixed, layout) - Operator::Identity(4, 4) / 4.0).norm(), 1e-15);

  for (int trial = 0; trial < 20; ++trial) {
    const Operator rho = random_density(layout.dim(), rng);
    EXPECT_NEAR(std::abs(partial_trace_jpm(rho, layout).trace() - 1.0), 0.0, 1e-10);
  }
  EXPECT_THROW(partial_trace_jpm(Operator::Identity(5, 5), layout), InvalidArgument);
}

TEST(Hilbert, PartialTraceLinear) {
  std::mt19937_64 rng(11);
  const SpaceLayout layout(3);
  const Operator a = random_matrix(9, rng), b = random_matrix(9, rng);
  const cd s(0.3, -1.2);
  const Operator lhs = partial_trace_jpm(a + s * b, layout);
  const Operator rhs = partial_trace_jpm(a, layout) + s * partial_trace_jpm(b, layout);
  EXPECT_LT((lhs - rhs).norm(), 1e-12);
}

TEST(Hilbert, DissipatorExamples) {
  std::mt19937_64 rng(3);
  const Operator rho = random_density(6, rng);
  EXPECT_LT(dissipator_apply(Operator::Identity(6, 6), rho).norm(), 1e-14);

  for (int trial = 0; trial < 20; ++trial) {
    const Operator L = random_matrix(6, rng);
    const Operator r = random_density(6, rng);
    const Operator d = dissipator_apply(L, r);
    EXPECT_LT(std::abs(d.trace()), 1e-10);
    EXPECT_LT(hermiticity_defect(d), 1e-12);
  }

  const Operator a = fock_annihilation(3);
  Operator one = Operator::Zero(3, 3);
  one(1, 1) = 1.0;
  Operator expected = Operator::Zero(3, 3);
  expected(0, 0) = 1.0;
  expected(1, 1) = -1.0;
  EXPECT_LT((dissipator_apply(a, one) - expected).norm(), 1e-15);
  EXPECT_THROW(dissipator_apply(a, Operator::Identity(4, 4)), InvalidArgument);
}

TEST(Hilbert, KronMixedProduct) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const Operator A = random_matrix(2, rng), B = random_matrix(3, rng);
    const Operator C = random_matrix(2, rng), D = random_matrix(3, rng);
    EXPECT_LT((kron(A, B) * kron(C, D) - kron(A * C, B * D)).cwiseAbs().maxCoeff(), 1e-12);
  }
}

}  // namespace
