#pragma once

// Dense operator algebra on the truncated resonator (x) JPM Hilbert space.
//
// Basis ordering is resonator-major: the composite index of |n> (x) |j> is
// n * 3 + j, with JPM levels ordered {|0>, |1>, |c>}.

#include <complex>
#include <string_view>
#include <utility>

#include <Eigen/Dense>

namespace jpmcount::hilbert {

using Complex = std::complex<double>;
using Operator = Eigen::MatrixXcd;

enum class JpmLevel : int { Ground = 0, Excited = 1, Captured = 2 };

/// Accepts "0", "1" or "c".
JpmLevel parse_jpm_level(std::string_view label);

class SpaceLayout {
 public:
  static constexpr int kJpmDim = 3;

  explicit SpaceLayout(int n_fock);

  int n_fock() const { return n_fock_; }
  int dim() const { return n_fock_ * kJpmDim; }

  int index(int n, JpmLevel level) const;
  std::pair<int, JpmLevel> decompose(int index) const;

 private:
  int n_fock_;
};

Operator kron(const Operator& a, const Operator& b);

/// Resonator-only ladder operator on n_fock levels.
Operator fock_annihilation(int n_fock);

/// a (x) 1 on the composite space.
Operator annihilation(const SpaceLayout& layout);
Operator creation(const SpaceLayout& layout);

/// 1 (x) |to><from|.
Operator jpm_transition(JpmLevel to, JpmLevel from, const SpaceLayout& layout);

/// 1 (x) |j><j|.
Operator jpm_projector(JpmLevel level, const SpaceLayout& layout);

/// resonator (x) |j><j|.
Operator product_state(const Operator& resonator, JpmLevel level);

/// Tr_JPM rho; returns an n_fock x n_fock operator.
Operator partial_trace_jpm(const Operator& rho, const SpaceLayout& layout);

/// D[L] rho = L rho L^+ - (L^+ L rho + rho L^+ L) / 2.
Operator dissipator_apply(const Operator& jump, const Operator& rho);

/// Population of the highest kept Fock level.
double top_fock_population(const Operator& rho, const SpaceLayout& layout);

/// Largest |A_ij - conj(A_ji)|.
double hermiticity_defect(const Operator& op);

}  // namespace jpmcount::hilbert
