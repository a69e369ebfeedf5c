#pragma once

// Single-cycle measurement kernel and its composition into POVMs for the
// generalized binomial and generalized geometric counting techniques.

#include <string_view>

#include <Eigen/Dense>

#include "jpmcount/dynamics.hpp"

namespace jpmcount::counting {

enum class Technique { Binomial, Geometric };

Technique parse_technique(std::string_view name);
std::string_view to_string(Technique technique);

/// K_i(m, n) = W(m, i | n) over photon numbers 0..n_max-1.
struct MeasurementKernel {
  Eigen::MatrixXd no_click;
  Eigen::MatrixXd click;

  int n_max() const { return static_cast<int>(no_click.rows()); }
  /// Non-negativity and column normalization within 1e-9.
  void validate() const;
};

/// Diagonal Fock-basis POVM: P(k, n) = P(k|n), k = 0..M, n = 0..n_max-1.
struct Povm {
  Technique technique = Technique::Binomial;
  int M = 0;
  Eigen::MatrixXd P;

  int n_max() const { return static_cast<int>(P.cols()); }
  /// Entries in [0, 1] and columns summing to 1 within 1e-8.
  void validate() const;
};

MeasurementKernel build_kernel(const dynamics::DetectorParams& dp, int n_max,
                               dynamics::CaptureEngine engine = dynamics::CaptureEngine::Sectors);

/// Perfect absorber: every photon present yields one click and is consumed.
MeasurementKernel ideal_kernel(int n_max);

Povm povm_binomial(const MeasurementKernel& kernel, int M);
Povm povm_geometric(const MeasurementKernel& kernel, int M);
Povm build_povm(const MeasurementKernel& kernel, int M, Technique technique);

/// P(k|n) = delta(k, min(n, M)).
Povm ideal_povm(int M, int n_max, Technique technique = Technique::Binomial);

}  // namespace jpmcount::counting
