#pragma once

// Linear click-statistics witness against the coherent-state supremum.

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "jpmcount/counting.hpp"
#include "jpmcount/metrics.hpp"

namespace jpmcount::nonclassicality {

/// Poisson mass the Q symbol may drop beyond the POVM support.
inline constexpr double kQTail = 1e-10;

/// Pi(n|alpha) for n = 0..M at intensity mu = |alpha|^2.
Eigen::VectorXd q_symbol(const counting::Povm& povm, double mu);

/// Largest intensity whose Poisson mass above the POVM support stays below kQTail.
double max_intensity(const counting::Povm& povm);

struct Bound {
  double rhs = 0.0;
  double mu_star = 0.0;
};

/// sup_mu sum_{n<M} lam(n) Pi(n|mu), with the Q symbol tabulated once on a
/// log grid so repeated witnesses are cheap.
class ClassicalBound {
 public:
  explicit ClassicalBound(const counting::Povm& povm, int grid_points = 600);

  Bound operator()(const Eigen::VectorXd& lam) const;
  double mu_max() const { return mu_max_; }
  int witness_size() const { return povm_.M; }

 private:
  double value(const Eigen::VectorXd& lam, double mu) const;

  counting::Povm povm_;
  double mu_max_ = 0.0;
  std::vector<double> mu_grid_;
  /// Rows: grid intensities; columns: outcomes n < M.
  Eigen::MatrixXd q_grid_;
};

Bound classical_bound(const Eigen::VectorXd& lam, const counting::Povm& povm);

/// sum_{n<M} lam(n) P(n) minus the classical bound.
double violation(const Eigen::VectorXd& lam, const stats::ClickDistribution& clicks,
                 const counting::Povm& povm);

struct DeBudget {
  int population = 40;
  int generations = 300;
  std::uint64_t seed = 0;
};

struct ViolationReport {
  Eigen::VectorXd lam_opt;
  double lhs = 0.0;
  double rhs = 0.0;
  double violation = 0.0;
  double mu_star = 0.0;
  bool converged = false;
  long evaluations = 0;
};

/// Maximizes the violation over lam in [-1, 1]^M with JADE.
ViolationReport maximize_violation(const stats::ClickDistribution& clicks,
                                   const counting::Povm& povm, const DeBudget& budget = {});

}  // namespace jpmcount::nonclassicality
