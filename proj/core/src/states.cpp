#include "jpmcount/states.hpp"

#include <cmath>
#include <string>

#include "jpmcount/error.hpp"

namespace jpmcount::stats {

namespace {

void check_size(int n_max, const char* what) {
  if (n_max < 0) throw InvalidArgument(std::string(what) + ": n_max must be non-negative");
}

void check_tail(const PhotonDistribution& dist, const char* what) {
  const double tail = 1.0 - dist.p.sum();
  if (tail >= kStateCutoff) {
    throw TruncationError(std::string(what) + ": mass beyond the Fock cutoff is " +
                          std::to_string(tail));
  }
}

}  // namespace

double PhotonDistribution::mean() const {
  return (Eigen::VectorXd::LinSpaced(p.size(), 0.0, p.size() - 1.0).array() * p.array()).sum();
}

void PhotonDistribution::validate() const {
  if (p.size() == 0) throw InvalidArgument("PhotonDistribution: empty");
  if (p.minCoeff() < 0.0) throw NumericalError("PhotonDistribution: negative probability");
  if (std::abs(p.sum() - 1.0) >= kStateCutoff) {
    throw NumericalError("PhotonDistribution: probabilities do not sum to one");
  }
}

PhotonDistribution fock(int n, int n_max) {
  check_size(n_max, "fock");
  if (n < 0 || n > n_max) throw InvalidArgument("fock: n must lie in [0, n_max]");
  PhotonDistribution dist{Eigen::VectorXd::Zero(n_max + 1)};
  dist.p(n) = 1.0;
  return dist;
}

double poisson_tail(double mu, int n_max) {
  if (mu < 0.0) throw InvalidArgument("poisson_tail: mu must be non-negative");
  if (mu == 0.0) return 0.0;
  // Summing the tail directly avoids cancellation in 1 - sum.
  double term = std::exp(-mu + (n_max + 1) * std::log(mu) - std::lgamma(n_max + 2.0));
  double tail = 0.0;
  for (int k = n_max + 1; term > 1e-300 && k < n_max + 100000; ++k) {
    tail += term;
    term *= mu / (k + 1);
    if (term < 1e-18 * tail && k > mu) break;
  }
  return tail;
}

PhotonDistribution coherent(double mu, int n_max) {
  check_size(n_max, "coherent");
  if (!(mu >= 0.0) || !std::isfinite(mu)) throw InvalidArgument("coherent: mu must be non-negative");
  PhotonDistribution dist{Eigen::VectorXd::Zero(n_max + 1)};
  if (mu == 0.0) {
    dist.p(0) = 1.0;
    return dist;
  }
  for (int k = 0; k <= n_max; ++k) {
    dist.p(k) = std::exp(-mu + k * std::log(mu) - std::lgamma(k + 1.0));
  }
  if (poisson_tail(mu, n_max) >= kStateCutoff) {
    throw TruncationError("coherent: Poisson tail beyond n_max exceeds the cutoff");
  }
  return dist;
}

PhotonDistribution squeezed_vacuum(double r, int n_max) {
  check_size(n_max, "squeezed_vacuum");
  if (!std::isfinite(r)) throw InvalidArgument("squeezed_vacuum: r must be finite");
  PhotonDistribution dist{Eigen::VectorXd::Zero(n_max + 1)};
  const double t = std::tanh(std::abs(r));
  // P(2n) = (2n)! tanh^{2n} r / (4^n (n!)^2 cosh r), built by its ratio.
  double term = 1.0 / std::cosh(r);
  for (int n = 0; 2 * n <= n_max; ++n) {
    dist.p(2 * n) = term;
    term *= t * t * (2.0 * n + 1.0) / (2.0 * n + 2.0);
  }
  check_tail(dist, "squeezed_vacuum");
  return dist;
}

}  // namespace jpmcount::stats
