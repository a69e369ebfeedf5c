#include "jpmcount/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "jpmcount/error.hpp"

namespace jpmcount::dynamics {

using hilbert::Complex;
using hilbert::JpmLevel;

namespace {

constexpr double kUndefinedBranch = 1e-12;

struct Jump {
  double rate;
  Operator op;
};

std::vector<Jump> capture_jumps(const DetectorParams& dp, const SpaceLayout& layout) {
  std::vector<Jump> jumps;
  auto add = [&](double rate, Operator op) {
    if (rate > 0.0) jumps.push_back({rate, std::move(op)});
  };
  add(dp.gamma0, hilbert::jpm_transition(JpmLevel::Captured, JpmLevel::Ground, layout));
  add(dp.gamma1, hilbert::jpm_transition(JpmLevel::Captured, JpmLevel::Excited, layout));
  add(dp.Gamma10, hilbert::jpm_transition(JpmLevel::Ground, JpmLevel::Excited, layout));
  add(dp.Gamma11, hilbert::jpm_projector(JpmLevel::Excited, layout));
  add(dp.kappa, hilbert::annihilation(layout));
  return jumps;
}

void check_density_dims(const Operator& rho, int dim, const char* what) {
  if (rho.rows() != dim || rho.cols() != dim) {
    throw InvalidArgument(std::string(what) + ": density operator dimension mismatch");
  }
}

Operator diagonal_state(const Eigen::VectorXd& p) {
  Operator rho = Operator::Zero(p.size(), p.size());
  for (Eigen::Index m = 0; m < p.size(); ++m) rho(m, m) = p(m);
  return rho;
}

Eigen::VectorXd real_diagonal(const Operator& rho) { return rho.diagonal().real(); }

Eigen::VectorXd checked_distribution(const Eigen::VectorXd& p, const char* what) {
  Eigen::VectorXd out = p;
  for (Eigen::Index m = 0; m < out.size(); ++m) out(m) = checked_probability(out(m), what);
  return out;
}

/// Readout+reset on unnormalized Fock populations; returns normalized W(.|i,n).
Postmeasurement finish_branch(const Eigen::VectorXd& joint, const DetectorParams& dp) {
  Postmeasurement out;
  out.probability = checked_probability(joint.sum(), "W(i|n)");
  if (out.probability < kUndefinedBranch) return out;
  const Operator decayed =
      evolve_readout_reset(diagonal_state(joint / out.probability), dp, dp.t_rr);
  out.distribution = checked_distribution(real_diagonal(decayed), "W(m|i,n)");
  return out;
}

std::vector<std::array<Postmeasurement, 2>> outcomes_sectors(const DetectorParams& dp,
                                                              int n_max) {
  const SectorCapture capture(dp, n_max);
  const auto pops = capture.evolve_all(dp.t_cpt);
  std::vector<std::array<Postmeasurement, 2>> out(n_max);
  for (int n = 0; n < n_max; ++n) {
    const auto& p = pops[n];
    const Eigen::VectorXd click = dp.beta * p.captured.head(n + 1);
    const Eigen::VectorXd none =
        (p.ground + p.excited + (1.0 - dp.beta) * p.captured).head(n + 1);
    out[n][0] = finish_branch(none, dp);
    out[n][1] = finish_branch(click, dp);
  }
  return out;
}

std::array<Postmeasurement, 2> outcomes_dense(int n, const DetectorParams& dp) {
  const SpaceLayout layout(n + 2);
  Operator varrho = Operator::Zero(layout.n_fock(), layout.n_fock());
  varrho(n, n) = 1.0;
  const StageResult stage =
      evolve_capture(hilbert::product_state(varrho, JpmLevel::Ground), dp, dp.t_cpt, layout);

  const Operator pc = hilbert::jpm_projector(JpmLevel::Captured, layout);
  const Operator pi1 = dp.beta * pc;
  const Operator pi0 = Operator::Identity(layout.dim(), layout.dim()) - pi1;

  std::array<Postmeasurement, 2> out;
  const Operator* projectors[2] = {&pi0, &pi1};
  for (int i = 0; i < 2; ++i) {
    const Operator reduced = hilbert::partial_trace_jpm(stage.rho_final * *projectors[i], layout);
    out[i] = finish_branch(real_diagonal(reduced).head(n + 1), dp);
  }
  return out;
}

}  // namespace

void DetectorParams::validate() const {
  const double rates[] = {gamma0, gamma1, Gamma10, Gamma11, kappa};
  for (double r : rates) {
    if (!(r >= 0.0) || !std::isfinite(r)) {
      throw InvalidArgument("DetectorParams: rates must be finite and non-negative");
    }
  }
  if (!std::isfinite(g) || !std::isfinite(delta_p)) {
    throw InvalidArgument("DetectorParams: g and delta_p must be finite");
  }
  if (!(beta >= 0.0 && beta <= 1.0)) {
    throw InvalidArgument("DetectorParams: beta must lie in [0, 1]");
  }
  if (!(t_cpt > 0.0) || !(t_rr > 0.0)) {
    throw InvalidArgument("DetectorParams: stage durations must be positive");
  }
}

double checked_probability(double p, const char* what) {
  constexpr double kSlack = 1e-8;
  if (!std::isfinite(p) || p < -kSlack || p > 1.0 + kSlack) {
    throw NumericalError(std::string(what) + ": probability " + std::to_string(p) +
                         " outside [0, 1]");
  }
  return std::clamp(p, 0.0, 1.0);
}

Operator capture_hamiltonian(const DetectorParams& dp, const SpaceLayout& layout) {
  const Operator a = hilbert::annihilation(layout);
  const Operator s01 = hilbert::jpm_transition(JpmLevel::Ground, JpmLevel::Excited, layout);
  const Operator s11 = hilbert::jpm_projector(JpmLevel::Excited, layout);
  const Operator coupling = a.adjoint() * s01;
  return dp.delta_p * s11 + dp.g * (coupling + coupling.adjoint());
}

StageResult evolve_capture(const Operator& rho0, const DetectorParams& dp, double t,
                           const SpaceLayout& layout, const ode::Options& opt) {
  check_density_dims(rho0, layout.dim(), "evolve_capture");
  if (t < 0.0) throw InvalidArgument("evolve_capture: negative duration");
  if (hilbert::top_fock_population(rho0, layout) >= kTruncationLimit) {
    throw TruncationError("evolve_capture: input populates the top Fock level");
  }

  const auto jumps = capture_jumps(dp, layout);
  Operator h_eff = capture_hamiltonian(dp, layout);
  for (const auto& j : jumps) h_eff -= Complex(0.0, 0.5 * j.rate) * (j.op.adjoint() * j.op);
  const Operator h_eff_adj = h_eff.adjoint();
  const Complex minus_i(0.0, -1.0);

  auto rhs = [&](double, const Operator& rho) -> Operator {
    Operator d = minus_i * (h_eff * rho - rho * h_eff_adj);
    for (const auto& j : jumps) d.noalias() += j.rate * (j.op * rho * j.op.adjoint());
    return d;
  };

  StageResult out;
  out.rho_final = ode::integrate(rhs, rho0, 0.0, t, opt);
  out.truncation_leak = hilbert::top_fock_population(out.rho_final, layout);
  if (out.truncation_leak >= kTruncationLimit) {
    throw TruncationError("evolve_capture: top Fock level population exceeds 1e-6");
  }
  out.p_click_raw =
      (hilbert::jpm_projector(JpmLevel::Captured, layout) * out.rho_final).trace().real();
  return out;
}

Operator evolve_readout_reset(const Operator& varrho0, const DetectorParams& dp, double t,
                              const ode::Options& opt) {
  if (varrho0.rows() != varrho0.cols()) {
    throw InvalidArgument("evolve_readout_reset: operator is not square");
  }
  if (t < 0.0) throw InvalidArgument("evolve_readout_reset: negative duration");
  if (dp.kappa == 0.0 || t == 0.0) return varrho0;

  const Eigen::Index n = varrho0.rows();
  const double kappa = dp.kappa;
  // kappa D[a] written out entrywise:
  // (a rho a^+)_{mk} = sqrt((m+1)(k+1)) rho_{m+1,k+1}, {a^+a, rho}_{mk} = (m+k) rho_{mk}.
  auto rhs = [n, kappa](double, const Operator& rho) -> Operator {
    Operator d(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
      for (Eigen::Index m = 0; m < n; ++m) {
        Complex v = -0.5 * static_cast<double>(m + k) * rho(m, k);
        if (m + 1 < n && k + 1 < n) {
          v += std::sqrt(static_cast<double>((m + 1) * (k + 1))) * rho(m + 1, k + 1);
        }
        d(m, k) = kappa * v;
      }
    }
    return d;
  };
  return ode::integrate(rhs, varrho0, 0.0, t, opt);
}

double click_probability(int n, const DetectorParams& dp, CaptureEngine engine) {
  dp.validate();
  if (n < 0) throw InvalidArgument("click_probability: negative Fock number");
  if (engine == CaptureEngine::Sectors) {
    const SectorCapture capture(dp, n + 1);
    const auto pops = capture.evolve_all(dp.t_cpt);
    return checked_probability(dp.beta * pops[n].captured.sum(), "W(1|n)");
  }
  const SpaceLayout layout(n + 2);
  Operator varrho = Operator::Zero(layout.n_fock(), layout.n_fock());
  varrho(n, n) = 1.0;
  const StageResult stage =
      evolve_capture(hilbert::product_state(varrho, JpmLevel::Ground), dp, dp.t_cpt, layout);
  return checked_probability(dp.beta * stage.p_click_raw, "W(1|n)");
}

Postmeasurement postmeasurement_distribution(int n, int outcome, const DetectorParams& dp,
                                             CaptureEngine engine) {
  dp.validate();
  if (n < 0) throw InvalidArgument("postmeasurement_distribution: negative Fock number");
  if (outcome != 0 && outcome != 1) {
    throw InvalidArgument("postmeasurement_distribution: outcome must be 0 or 1");
  }
  if (engine == CaptureEngine::Sectors) return outcomes_sectors(dp, n + 1)[n][outcome];
  return outcomes_dense(n, dp)[outcome];
}

std::vector<std::array<Postmeasurement, 2>> cycle_outcomes(const DetectorParams& dp, int n_max,
                                                           CaptureEngine engine) {
  dp.validate();
  if (n_max < 1) throw InvalidArgument("cycle_outcomes: n_max must be positive");
  if (engine == CaptureEngine::Sectors) return outcomes_sectors(dp, n_max);
  std::vector<std::array<Postmeasurement, 2>> out(n_max);
  for (int n = 0; n < n_max; ++n) out[n] = outcomes_dense(n, dp);
  return out;
}

}  // namespace jpmcount::dynamics
