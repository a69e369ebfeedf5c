#pragma once

// rf-SQUID JPM coupled capacitively to an LC resonator: loaded energies,
// potential landscape, shallow-well spectrum, WKB tunneling rates and the
// effective Jaynes-Cummings parameters.

#include <optional>
#include <vector>

namespace jpmcount::circuit {

/// Raw circuit constants in SI units. phi_b is the reduced bias flux
/// 2 pi Phi_b / Phi_0 in radians.
struct CircuitParams {
  double C_r = 0.0;
  double L_r = 0.0;
  /// C_s + C_J.
  double C_p = 0.0;
  double L_G = 0.0;
  double I_0 = 0.0;
  /// Zero decouples the resonator.
  double C_c = 0.0;
  double phi_b = 0.0;

  void validate() const;
};

/// Energies in joules built from the loaded capacitances.
struct LoadedEnergies {
  double C_r_loaded = 0.0;
  double C_p_loaded = 0.0;
  /// Infinite when C_c = 0.
  double C_c_loaded = 0.0;
  double E_C_r = 0.0;
  double E_C_p = 0.0;
  double E_C_c = 0.0;
  double E_L_r = 0.0;
  double E_L_p = 0.0;
  double E_J = 0.0;
};

LoadedEnergies loaded_energies(const CircuitParams& cp);

/// U(phi) = E_L,p (phi - phi_b)^2 / 2 - E_J cos(phi).
double potential(double phi, const LoadedEnergies& le, double phi_b);
double potential_d1(double phi, const LoadedEnergies& le, double phi_b);
double potential_d2(double phi, const LoadedEnergies& le, double phi_b);

struct Extremum {
  double phi = 0.0;
  double U = 0.0;
  double curvature = 0.0;
};

struct WellReport {
  double phi_b = 0.0;
  /// Ordered by phi.
  std::vector<Extremum> minima;
  int n_wells = 0;
  std::optional<int> shallow_index;
  std::optional<int> deep_index;
  std::optional<Extremum> barrier_top;
  std::vector<double> shallow_levels;
  int shallow_level_count = 0;

  const Extremum& shallow() const;
  const Extremum& deep() const;
};

/// Extrema of U on phi in [-2 pi, 4 pi]. With more than two minima the global
/// minimum and its lower adjacent neighbour are kept.
WellReport find_minima(const LoadedEnergies& le, double phi_b);

/// Finite-difference eigenenergies of -4 E_C,p d^2/dphi^2 + U below the barrier
/// top whose probability weight lies mostly on the shallow side.
std::vector<double> shallow_spectrum(const LoadedEnergies& le, const WellReport& report);

/// Eigenvalues in [e_min, e_max] of -4 E_C,p d^2/dphi^2 + U on a uniform grid of
/// n_points interior points over [lo, hi] with hard walls.
std::vector<double> grid_levels(const LoadedEnergies& le, double phi_b, double lo, double hi,
                                int n_points, double e_min, double e_max);

/// find_minima followed by shallow_spectrum when two wells exist.
WellReport analyze_wells(const LoadedEnergies& le, double phi_b);

/// WKB escape rate (1/s) of shallow level j. The attempt frequency is measured
/// from the shallow-well bottom.
double wkb_rate(int j, const LoadedEnergies& le, const WellReport& report);

/// Angular frequencies in rad/s, rates in 1/s.
struct EffectiveParams {
  double omega_r = 0.0;
  double varpi_p = 0.0;
  double xi = 0.0;
  double omega_p = 0.0;
  double g = 0.0;
  /// Two-excitation conversion strength; reported only.
  double g2 = 0.0;
  double lambda = 0.0;
  double gamma0 = 0.0;
  double gamma1 = 0.0;
  double Xi3 = 0.0;
  double Xi4 = 0.0;
  double E_L_p_eff = 0.0;
  double phi_zpf_p = 0.0;
  double n_zpf_p = 0.0;
  double n_zpf_r = 0.0;
  double phi_min = 0.0;
};

inline constexpr double kLambdaSquaredLimit = 0.05;

/// Harmonic and perturbative quantities about a well bottom at phi_min; the
/// rates are left at zero and no validity check is applied.
EffectiveParams expansion_at(const CircuitParams& cp, const LoadedEnergies& le, double phi_min);

/// Throws ValidityError outside the two-well, two-level window or when
/// lambda^2 >= kLambdaSquaredLimit.
EffectiveParams effective_params(const CircuitParams& cp);
EffectiveParams effective_params(const CircuitParams& cp, const LoadedEnergies& le,
                                 const WellReport& report);

/// One row of a flux sweep. Derived fields are NaN where undefined.
struct FluxPoint {
  double phi_b = 0.0;
  int n_wells = 0;
  int shallow_level_count = 0;
  double omega_p = 0.0;
  double xi = 0.0;
  double gamma0 = 0.0;
  double gamma1 = 0.0;
  double g = 0.0;
};

std::vector<FluxPoint> flux_sweep(const CircuitParams& cp, const std::vector<double>& phi_b);

}  // namespace jpmcount::circuit
