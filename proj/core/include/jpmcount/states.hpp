#pragma once

// Photon-number distributions of the input resonator states.

#include <Eigen/Dense>

namespace jpmcount::stats {

/// Mass allowed beyond the Fock cutoff.
inline constexpr double kStateCutoff = 1e-8;

/// Probabilities over Fock numbers 0..n_max.
struct PhotonDistribution {
  Eigen::VectorXd p;

  int n_max() const { return static_cast<int>(p.size()) - 1; }
  double mean() const;
  /// Non-negative and summing to one within kStateCutoff.
  void validate() const;
};

PhotonDistribution fock(int n, int n_max);

/// Poisson weights with mean mu; not renormalized. Throws TruncationError when
/// the mass above n_max reaches kStateCutoff.
PhotonDistribution coherent(double mu, int n_max);

/// Even-only distribution of the squeezed vacuum with mean sinh^2 r.
PhotonDistribution squeezed_vacuum(double r, int n_max);

/// Poisson mass above n_max.
double poisson_tail(double mu, int n_max);

}  // namespace jpmcount::stats
