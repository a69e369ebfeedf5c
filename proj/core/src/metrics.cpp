#include "jpmcount/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "jpmcount/error.hpp"

namespace jpmcount::stats {

void ClickDistribution::validate() const {
  if (p.size() == 0) throw InvalidArgument("ClickDistribution: empty");
  if (p.minCoeff() < 0.0) throw NumericalError("ClickDistribution: negative probability");
  if (std::abs(p.sum() - 1.0) > 1e-8) {
    throw NumericalError("ClickDistribution: probabilities do not sum to one");
  }
}

ClickDistribution photocount_distribution(const PhotonDistribution& state,
                                          const counting::Povm& povm) {
  if (state.p.size() > povm.n_max()) {
    throw InvalidArgument("photocount_distribution: state support exceeds the POVM support");
  }
  ClickDistribution clicks{povm.P.leftCols(state.p.size()) * state.p};
  clicks.validate();
  return clicks;
}

double resolution(const counting::Povm& povm) {
  if (povm.n_max() < povm.M + 1) {
    throw InvalidArgument("resolution: POVM must cover inputs n = 0..M");
  }
  return povm.P.topLeftCorner(povm.M + 1, povm.M + 1).diagonal().mean();
}

double bhattacharyya(const Eigen::VectorXd& p, const Eigen::VectorXd& q) {
  if (p.size() != q.size()) throw InvalidArgument("bhattacharyya: length mismatch");
  if (p.size() > 0 && (p.minCoeff() < 0.0 || q.minCoeff() < 0.0)) {
    throw InvalidArgument("bhattacharyya: negative probability");
  }
  return (p.array() * q.array()).sqrt().sum();
}

double bhattacharyya(const ClickDistribution& p, const ClickDistribution& q) {
  return bhattacharyya(p.p, q.p);
}

ClickDistribution ideal_statistics(const PhotonDistribution& state, int M, bool renormalize) {
  if (M < 0) throw InvalidArgument("ideal_statistics: M must be non-negative");
  ClickDistribution out{Eigen::VectorXd::Zero(M + 1)};
  const int n = std::min<int>(M + 1, static_cast<int>(state.p.size()));
  out.p.head(n) = state.p.head(n);
  if (renormalize) {
    const double total = out.p.sum();
    if (!(total > 0.0)) throw NumericalError("ideal_statistics: no mass on k <= M");
    out.p /= total;
  }
  return out;
}

}  // namespace jpmcount::stats
