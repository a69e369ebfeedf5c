#pragma once

// One measurement cycle: resonant photon capture under the Jaynes-Cummings
// Hamiltonian with tunneling, relaxation, dephasing and photon loss, followed
// by resonator-only decay during readout and reset.

#include <array>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "jpmcount/hilbert.hpp"
#include "jpmcount/ode.hpp"

namespace jpmcount::dynamics {

using hilbert::Operator;
using hilbert::SpaceLayout;

/// Phenomenological detector inputs. Rates and frequencies are angular (rad/s),
/// durations in seconds.
struct DetectorParams {
  double g = 0.0;
  double delta_p = 0.0;
  double gamma0 = 0.0;
  double gamma1 = 0.0;
  double Gamma10 = 0.0;
  double Gamma11 = 0.0;
  double kappa = 0.0;
  double beta = 1.0;
  double t_cpt = 0.0;
  /// Readout plus reset, t_rdt + t_rst.
  double t_rr = 0.0;

  void validate() const;
};

struct StageResult {
  Operator rho_final;
  /// Population of |c> at the end of the stage.
  double p_click_raw = 0.0;
  /// Population of the highest kept Fock level.
  double truncation_leak = 0.0;
};

/// Leak threshold for the top Fock level.
inline constexpr double kTruncationLimit = 1e-6;

/// H / hbar = Delta_p s11 + g (a^+ s01 + s10 a), in rad/s.
Operator capture_hamiltonian(const DetectorParams& dp, const SpaceLayout& layout);

/// Integrates the capture-stage Lindblad equation for a duration t.
StageResult evolve_capture(const Operator& rho0, const DetectorParams& dp, double t,
                           const SpaceLayout& layout, const ode::Options& opt = {});

/// Resonator-only evolution kappa D[a] for a duration t.
Operator evolve_readout_reset(const Operator& varrho0, const DetectorParams& dp, double t,
                              const ode::Options& opt = {});

/// Exact capture-stage propagation for Fock (x) |0> inputs.
///
/// Starting from |n><n| (x) |0><0| the state stays block diagonal: one 2x2
/// block on {|m,0>, |m-1,1>} per excitation number m and one population per
/// |m,c>. The capture Liouvillian restricted to those entries is a real
/// linear generator of dimension 5 n_max - 3, propagated by its matrix
/// exponential. Photon number never increases, so there is no truncation.
class SectorCapture {
 public:
  /// Populations indexed by photon number m.
  struct Populations {
    Eigen::VectorXd ground;    // <m,0|rho|m,0>
    Eigen::VectorXd excited;   // <m,1|rho|m,1>
    Eigen::VectorXd captured;  // <m,c|rho|m,c>
  };

  SectorCapture(const DetectorParams& dp, int n_max);

  int n_max() const { return n_max_; }
  const Eigen::MatrixXd& generator() const { return generator_; }

  /// Populations after time t for every Fock input n = 0..n_max-1.
  std::vector<Populations> evolve_all(double t) const;

 private:
  int ground_index(int m) const { return m; }
  int excited_index(int m) const { return n_max_ + (m - 1); }
  int coherence_re_index(int m) const { return 2 * n_max_ - 1 + (m - 1); }
  int coherence_im_index(int m) const { return 3 * n_max_ - 2 + (m - 1); }
  int captured_index(int m) const { return 4 * n_max_ - 3 + m; }

  int n_max_;
  Eigen::MatrixXd generator_;
};

enum class CaptureEngine { Sectors, DenseLindblad };

/// W(1|n) = beta P_c(n; t_cpt).
double click_probability(int n, const DetectorParams& dp,
                         CaptureEngine engine = CaptureEngine::Sectors);

struct Postmeasurement {
  /// W(i|n).
  double probability = 0.0;
  /// W(m|i,n) for m = 0..n; absent when W(i|n) < 1e-12.
  std::optional<Eigen::VectorXd> distribution;
};

/// Outcome probability and conditional photon-number distribution after a
/// full cycle (capture, outcome projection, readout and reset).
Postmeasurement postmeasurement_distribution(int n, int outcome, const DetectorParams& dp,
                                             CaptureEngine engine = CaptureEngine::Sectors);

/// Outcome table for every Fock input n < n_max: result[n][i] holds W(i|n) and
/// W(.|i,n).
std::vector<std::array<Postmeasurement, 2>> cycle_outcomes(
    const DetectorParams& dp, int n_max, CaptureEngine engine = CaptureEngine::Sectors);

/// Checks p against [0, 1] and clamps deviations below 1e-8; larger ones throw.
double checked_probability(double p, const char* what);

}  // namespace jpmcount::dynamics
