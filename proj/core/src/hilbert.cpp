#include "jpmcount/hilbert.hpp"

#include <cmath>
#include <string>

#include "jpmcount/error.hpp"

namespace jpmcount::hilbert {

namespace {

void require_square(const Operator& op, const char* what) {
  if (op.rows() != op.cols()) {
    throw InvalidArgument(std::string(what) + ": operator is not square");
  }
}

Operator jpm_unit(JpmLevel to, JpmLevel from) {
  Operator unit = Operator::Zero(SpaceLayout::kJpmDim, SpaceLayout::kJpmDim);
  unit(static_cast<int>(to), static_cast<int>(from)) = 1.0;
  return unit;
}

}  // namespace

JpmLevel parse_jpm_level(std::string_view label) {
  if (label == "0") return JpmLevel::Ground;
  if (label == "1") return JpmLevel::Excited;
  if (label == "c") return JpmLevel::Captured;
  throw InvalidArgument("unknown JPM level label '" + std::string(label) +
                        "' (expected 0, 1 or c)");
}

SpaceLayout::SpaceLayout(int n_fock) : n_fock_(n_fock) {
  if (n_fock < 1) {
    throw InvalidArgument("SpaceLayout: n_fock must be positive");
  }
}

int SpaceLayout::index(int n, JpmLevel level) const {
  if (n < 0 || n >= n_fock_) {
    throw InvalidArgument("SpaceLayout::index: Fock number out of range");
  }
  return n * kJpmDim + static_cast<int>(level);
}

std::pair<int, JpmLevel> SpaceLayout::decompose(int index) const {
  if (index < 0 || index >= dim()) {
    throw InvalidArgument("SpaceLayout::decompose: index out of range");
  }
  return {index / kJpmDim, static_cast<JpmLevel>(index % kJpmDim)};
}

Operator kron(const Operator& a, const Operator& b) {
  Operator out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Operator fock_annihilation(int n_fock) {
  if (n_fock < 1) throw InvalidArgument("fock_annihilation: n_fock must be positive");
  Operator a = Operator::Zero(n_fock, n_fock);
  for (int n = 1; n < n_fock; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

Operator annihilation(const SpaceLayout& layout) {
  return kron(fock_annihilation(layout.n_fock()),
              Operator::Identity(SpaceLayout::kJpmDim, SpaceLayout::kJpmDim));
}

Operator creation(const SpaceLayout& layout) { return annihilation(layout).adjoint(); }

Operator jpm_transition(JpmLevel to, JpmLevel from, const SpaceLayout& layout) {
  return kron(Operator::Identity(layout.n_fock(), layout.n_fock()), jpm_unit(to, from));
}

Operator jpm_projector(JpmLevel level, const SpaceLayout& layout) {
  return jpm_transition(level, level, layout);
}

Operator product_state(const Operator& resonator, JpmLevel level) {
  require_square(resonator, "product_state");
  return kron(resonator, jpm_unit(level, level));
}

Operator partial_trace_jpm(const Operator& rho, const SpaceLayout& layout) {
  require_square(rho, "partial_trace_jpm");
  if (rho.rows() != layout.dim()) {
    throw InvalidArgument("partial_trace_jpm: operator dimension does not match layout");
  }
  const int n_fock = layout.n_fock();
  constexpr int d = SpaceLayout::kJpmDim;
  Operator out = Operator::Zero(n_fock, n_fock);
  for (int m = 0; m < n_fock; ++m) {
    for (int n = 0; n < n_fock; ++n) {
      Complex acc = 0.0;
      for (int j = 0; j < d; ++j) acc += rho(m * d + j, n * d + j);
      out(m, n) = acc;
    }
  }
  return out;
}

Operator dissipator_apply(const Operator& jump, const Operator& rho) {
  require_square(jump, "dissipator_apply");
  require_square(rho, "dissipator_apply");
  if (jump.rows() != rho.rows()) {
    throw InvalidArgument("dissipator_apply: dimension mismatch");
  }
  const Operator ldl = jump.adjoint() * jump;
  return jump * rho * jump.adjoint() - 0.5 * (ldl * rho + rho * ldl);
}

double top_fock_population(const Operator& rho, const SpaceLayout& layout) {
  const int top = layout.n_fock() - 1;
  double p = 0.0;
  for (int j = 0; j < SpaceLayout::kJpmDim; ++j) {
    const int k = top * SpaceLayout::kJpmDim + j;
    p += rho(k, k).real();
  }
  return p;
}

double hermiticity_defect(const Operator& op) {
  require_square(op, "hermiticity_defect");
  return (op - op.adjoint()).cwiseAbs().maxCoeff();
}

}  // namespace jpmcount::hilbert
