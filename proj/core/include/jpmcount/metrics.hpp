#pragma once

// Photocounting formula, resolution and Bhattacharyya overlap.

#include <Eigen/Dense>

#include "jpmcount/counting.hpp"
#include "jpmcount/states.hpp"

namespace jpmcount::stats {

/// Probabilities over click counts 0..M.
struct ClickDistribution {
  Eigen::VectorXd p;

  int M() const { return static_cast<int>(p.size()) - 1; }
  void validate() const;
};

/// P(k) = sum_n P(k|n) p(n). The state may be shorter than the POVM support.
ClickDistribution photocount_distribution(const PhotonDistribution& state,
                                          const counting::Povm& povm);

/// R_M = mean of P(n|n) over n = 0..M.
double resolution(const counting::Povm& povm);

double bhattacharyya(const Eigen::VectorXd& p, const Eigen::VectorXd& q);
double bhattacharyya(const ClickDistribution& p, const ClickDistribution& q);

/// Photon-number probabilities for k = 0..M taken as the click statistics of an
/// ideal counter. Without renormalization the mass above M is dropped.
ClickDistribution ideal_statistics(const PhotonDistribution& state, int M,
                                   bool renormalize = false);

}  // namespace jpmcount::stats
