#include "jpmcount/counting.hpp"

#include <algorithm>
#include <string>
#include <vector>

#include "jpmcount/error.hpp"

namespace jpmcount::counting {

Technique parse_technique(std::string_view name) {
  if (name == "binomial") return Technique::Binomial;
  if (name == "geometric") return Technique::Geometric;
  throw InvalidArgument("unknown counting technique '" + std::string(name) + "'");
}

std::string_view to_string(Technique technique) {
  return technique == Technique::Binomial ? "binomial" : "geometric";
}

void MeasurementKernel::validate() const {
  if (no_click.rows() != no_click.cols() || click.rows() != no_click.rows() ||
      click.cols() != no_click.cols() || no_click.rows() == 0) {
    throw InvalidArgument("MeasurementKernel: K0 and K1 must be equal non-empty square matrices");
  }
  if (no_click.minCoeff() < 0.0 || click.minCoeff() < 0.0) {
    throw NumericalError("MeasurementKernel: negative transition probability");
  }
  const Eigen::RowVectorXd totals = no_click.colwise().sum() + click.colwise().sum();
  if ((totals.array() - 1.0).abs().maxCoeff() > 1e-9) {
    throw NumericalError("MeasurementKernel: columns do not sum to one");
  }
}

void Povm::validate() const {
  if (M < 0 || P.rows() != M + 1 || P.cols() == 0) {
    throw InvalidArgument("Povm: matrix must be (M+1) x n_max");
  }
  if (P.minCoeff() < -1e-12 || P.maxCoeff() > 1.0 + 1e-12) {
    throw NumericalError("Povm: entry outside [0, 1]");
  }
  if ((P.colwise().sum().array() - 1.0).abs().maxCoeff() > 1e-8) {
    throw NumericalError("Povm: column normalization violated");
  }
}

MeasurementKernel build_kernel(const dynamics::DetectorParams& dp, int n_max,
                               dynamics::CaptureEngine engine) {
  if (n_max < 1) throw InvalidArgument("build_kernel: n_max must be positive");
  const auto outcomes = dynamics::cycle_outcomes(dp, n_max, engine);
  MeasurementKernel kernel{Eigen::MatrixXd::Zero(n_max, n_max),
                           Eigen::MatrixXd::Zero(n_max, n_max)};
  for (int n = 0; n < n_max; ++n) {
    for (int i = 0; i < 2; ++i) {
      const auto& branch = outcomes[n][i];
      if (!branch.distribution) continue;
      Eigen::MatrixXd& K = (i == 0) ? kernel.no_click : kernel.click;
      const Eigen::VectorXd& w = *branch.distribution;
      K.col(n).head(w.size()) = branch.probability * w;
    }
  }
  kernel.validate();
  return kernel;
}

MeasurementKernel ideal_kernel(int n_max) {
  if (n_max < 1) throw InvalidArgument("ideal_kernel: n_max must be positive");
  MeasurementKernel kernel{Eigen::MatrixXd::Zero(n_max, n_max),
                           Eigen::MatrixXd::Zero(n_max, n_max)};
  kernel.no_click(0, 0) = 1.0;
  for (int n = 1; n < n_max; ++n) kernel.click(n - 1, n) = 1.0;
  return kernel;
}

Povm povm_binomial(const MeasurementKernel& kernel, int M) {
  if (M < 1) throw InvalidArgument("povm_binomial: M must be at least 1");
  const int n_max = kernel.n_max();
  Povm povm{Technique::Binomial, M, Eigen::MatrixXd::Zero(M + 1, n_max)};

  // v[k] holds the unnormalized photon-number distribution after the cycles so
  // far, restricted to histories with k clicks; all inputs are carried at once
  // as the columns of an n_max x n_max matrix.
  std::vector<Eigen::MatrixXd> v(M + 1, Eigen::MatrixXd::Zero(n_max, n_max));
  v[0].setIdentity();
  for (int cycle = 1; cycle <= M; ++cycle) {
    for (int k = std::min(cycle, M); k >= 0; --k) {
      Eigen::MatrixXd next = kernel.no_click * v[k];
      if (k > 0) next.noalias() += kernel.click * v[k - 1];
      v[k] = std::move(next);
    }
  }
  for (int k = 0; k <= M; ++k) povm.P.row(k) = v[k].colwise().sum();
  return povm;
}

Povm povm_geometric(const MeasurementKernel& kernel, int M) {
  if (M < 1) throw InvalidArgument("povm_geometric: M must be at least 1");
  const int n_max = kernel.n_max();
  Povm povm{Technique::Geometric, M, Eigen::MatrixXd::Zero(M + 1, n_max)};

  // Running K1^k over all inputs.
  Eigen::MatrixXd clicks = Eigen::MatrixXd::Identity(n_max, n_max);
  for (int k = 0; k < M; ++k) {
    povm.P.row(k) = (kernel.no_click * clicks).colwise().sum();
    clicks = kernel.click * clicks;
  }
  povm.P.row(M) = clicks.colwise().sum();
  return povm;
}

Povm build_povm(const MeasurementKernel& kernel, int M, Technique technique) {
  return technique == Technique::Binomial ? povm_binomial(kernel, M)
                                          : povm_geometric(kernel, M);
}

Povm ideal_povm(int M, int n_max, Technique technique) {
  if (M < 0 || n_max < 1) throw InvalidArgument("ideal_povm: invalid size");
  Povm povm{technique, M, Eigen::MatrixXd::Zero(M + 1, n_max)};
  for (int n = 0; n < n_max; ++n) povm.P(std::min(n, M), n) = 1.0;
  return povm;
}

}  // namespace jpmcount::counting
