#pragma once

// Independent reference implementations used only by the test suites.

#include <cstdint>
#include <random>

#include <Eigen/Dense>

#include "jpmcount/counting.hpp"

namespace jpmcount::oracles {

/// Enumerates every outcome sequence of length M and every intermediate photon
/// path, multiplying per-cycle probabilities. Guarded to M <= 8, n_max <= 8.
counting::Povm brute_force_povm(const counting::MeasurementKernel& kernel, int M,
                                counting::Technique technique);

/// Kernel with columns drawn from a flat Dirichlet over all (m, i) pairs.
counting::MeasurementKernel random_stochastic_kernel(int n_max, std::mt19937_64& rng);

/// Click with probability p every cycle, photon number untouched.
counting::MeasurementKernel bernoulli_kernel(int n_max, double p);

/// P(m) = C(n, m) eta^m (1 - eta)^(n - m).
Eigen::VectorXd binomial_loss(int n, double eta);

double binomial_pmf(int n, int k, double p);

/// Columns of a stochastic matrix drawn uniformly from the simplex.
Eigen::MatrixXd random_stochastic_matrix(int rows, int cols, std::mt19937_64& rng);

}  // namespace jpmcount::oracles
