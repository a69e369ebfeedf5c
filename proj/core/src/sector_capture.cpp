#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

#include "jpmcount/dynamics.hpp"
#include "jpmcount/error.hpp"

namespace jpmcount::dynamics {

// Variables: a_m = <m,0|rho|m,0>, b_m = <m-1,1|rho|m-1,1>, c_m = <m,0|rho|m-1,1>
// split into real and imaginary parts, q_m = <m,c|rho|m,c>.
SectorCapture::SectorCapture(const DetectorParams& dp, int n_max) : n_max_(n_max) {
  dp.validate();
  if (n_max < 1) throw InvalidArgument("SectorCapture: n_max must be positive");
  const int dim = 5 * n_max - 3;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(dim, dim);
  const double kappa = dp.kappa;

  for (int m = 0; m < n_max; ++m) {
    const int a = ground_index(m);
    const int q = captured_index(m);
    const bool has_above = m + 1 < n_max;

    A(a, a) -= dp.gamma0 + kappa * m;
    A(q, a) += dp.gamma0;
    A(q, q) -= kappa * m;
    if (has_above) {
      A(a, excited_index(m + 1)) += dp.Gamma10;
      A(a, ground_index(m + 1)) += kappa * (m + 1);
      A(q, captured_index(m + 1)) += kappa * (m + 1);
      A(q, excited_index(m + 1)) += dp.gamma1;
    }
    if (m == 0) continue;

    const int b = excited_index(m);
    const int re = coherence_re_index(m);
    const int im = coherence_im_index(m);
    const double coupling = dp.g * std::sqrt(static_cast<double>(m));

    // -i[H, rho] within the block.
    A(a, im) -= 2.0 * coupling;
    A(b, im) += 2.0 * coupling;
    A(im, a) += coupling;
    A(im, b) -= coupling;
    A(re, im) -= dp.delta_p;
    A(im, re) += dp.delta_p;

    A(b, b) -= dp.gamma1 + dp.Gamma10 + kappa * (m - 1);
    const double decoherence =
        0.5 * (dp.gamma0 + kappa * m + dp.gamma1 + dp.Gamma10 + dp.Gamma11 + kappa * (m - 1));
    A(re, re) -= decoherence;
    A(im, im) -= decoherence;
    if (has_above) {
      A(b, excited_index(m + 1)) += kappa * m;
      const double feed = kappa * std::sqrt(static_cast<double>((m + 1) * m));
      A(re, coherence_re_index(m + 1)) += feed;
      A(im, coherence_im_index(m + 1)) += feed;
    }
  }
  generator_ = std::move(A);
}

std::vector<SectorCapture::Populations> SectorCapture::evolve_all(double t) const {
  if (t < 0.0) throw InvalidArgument("SectorCapture::evolve_all: negative duration");
  const Eigen::MatrixXd propagator = (generator_ * t).exp();
  std::vector<Populations> out(n_max_);
  for (int n = 0; n < n_max_; ++n) {
    const auto column = propagator.col(ground_index(n));
    Populations& p = out[n];
    p.ground.resize(n_max_);
    p.excited.resize(n_max_);
    p.captured.resize(n_max_);
    for (int m = 0; m < n_max_; ++m) {
      p.ground(m) = column(ground_index(m));
      p.excited(m) = (m + 1 < n_max_) ? column(excited_index(m + 1)) : 0.0;
      p.captured(m) = column(captured_index(m));
    }
  }
  return out;
}

}  // namespace jpmcount::dynamics
