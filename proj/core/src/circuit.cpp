#include "jpmcount/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <lapacke.h>

#include "jpmcount/constants.hpp"
#include "jpmcount/error.hpp"
#include "jpmcount/parallel.hpp"

namespace jpmcount::circuit {

namespace {

using constants::kHbar;
using constants::kPi;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr int kCoarseGridPoints = 2000;
constexpr int kSpectrumGridPoints = 1000;
constexpr int kSpectrumMaxRefinements = 7;
constexpr double kSpectrumShiftTolerance = 1e-3;

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw InvalidArgument(std::string("CircuitParams: ") + name + " must be positive and finite");
  }
}

double bisect(auto&& f, double a, double b, int iterations = 200) {
  double fa = f(a);
  for (int it = 0; it < iterations && std::abs(b - a) > 1e-15 * std::max(1.0, std::abs(a)); ++it) {
    const double mid = 0.5 * (a + b);
    const double fm = f(mid);
    if ((fm < 0.0) == (fa < 0.0)) {
      a = mid;
      fa = fm;
    } else {
      b = mid;
    }
  }
  return 0.5 * (a + b);
}

/// Root of U' inside a sign-change bracket: bisection, then Newton polish.
Extremum polish_extremum(const LoadedEnergies& le, double phi_b, double a, double b) {
  auto d1 = [&](double phi) { return potential_d1(phi, le, phi_b); };
  double phi = bisect(d1, a, b, 80);
  const double tol = 1e-12 * std::max(le.E_J, le.E_L_p);
  for (int it = 0; it < 50 && std::abs(d1(phi)) > tol; ++it) {
    const double curvature = potential_d2(phi, le, phi_b);
    if (curvature == 0.0) break;
    const double next = phi - d1(phi) / curvature;
    if (next <= a || next >= b) break;
    phi = next;
  }
  if (std::abs(d1(phi)) > 1e-9 * std::max(le.E_J, le.E_L_p)) {
    throw NumericalError("find_minima: extremum polish did not converge");
  }
  return {phi, potential(phi, le, phi_b), potential_d2(phi, le, phi_b)};
}

/// Walks outward from phi0 in direction dir until U exceeds level.
double walk_until_above(const LoadedEnergies& le, double phi_b, double phi0, double dir,
                        double level) {
  double phi = phi0;
  for (int it = 0; it < 200000; ++it) {
    phi += dir * 1e-2;
    if (potential(phi, le, phi_b) > level) return phi;
  }
  throw NumericalError("shallow_spectrum: potential does not confine the grid");
}

struct GridSpectrum {
  /// Every eigenvalue between the shallow bottom and the barrier top.
  std::vector<double> all;
  /// Those with at least half their weight on the shallow side.
  std::vector<double> levels;
};

/// Number of eigenvalues below x of the symmetric tridiagonal matrix (diag, off).
int sturm_count(const std::vector<double>& diag, const std::vector<double>& off, double x) {
  int count = 0;
  double q = 1.0;
  for (std::size_t i = 0; i < diag.size(); ++i) {
    const double coupling = i == 0 ? 0.0 : off[i - 1] * off[i - 1] / q;
    q = diag[i] - x - coupling;
    if (q == 0.0) q = -std::numeric_limits<double>::epsilon() * (std::abs(diag[i]) + std::abs(x));
    if (q < 0.0) ++count;
  }
  return count;
}

struct TridiagonalEigen {
  std::vector<double> values;
  /// Column-major n x values.size().
  std::vector<double> vectors;
};

/// Finite-difference Hamiltonian in units of E_C,p on n interior points of
/// [lo, hi]; eigenpairs with energies in (e_min, e_max].
TridiagonalEigen solve_grid(const LoadedEnergies& le, double phi_b, double lo, double hi, int n,
                            double e_min, double e_max, bool want_vectors) {
  const double scale = le.E_C_p;
  const double h = (hi - lo) / (n + 1);
  std::vector<double> diag(n), off(n > 1 ? n - 1 : 1, -4.0 / (h * h));
  for (int i = 0; i < n; ++i) diag[i] = 8.0 / (h * h) + potential(lo + (i + 1) * h, le, phi_b) / scale;
  const double vl = e_min / scale, vu = e_max / scale;

  // Sturm counts size the eigenvector storage before the solve.
  const int upper = sturm_count(diag, off, vu) - sturm_count(diag, off, vl);
  lapack_int found = 0;
  std::vector<double> w(n);
  std::vector<lapack_int> support(2 * static_cast<std::size_t>(std::max(upper, 1)));
  TridiagonalEigen out;
  if (upper > 0) {
    out.vectors.resize(want_vectors ? static_cast<std::size_t>(n) * (upper + 4) : 1);
    const lapack_int info =
        LAPACKE_dstevr(LAPACK_COL_MAJOR, want_vectors ? 'V' : 'N', 'V', n, diag.data(), off.data(),
                       vl, vu, 0, 0, 0.0, &found, w.data(), out.vectors.data(), n, support.data());
    if (info != 0) throw NumericalError("dstevr failed with info " + std::to_string(info));
  }
  for (lapack_int k = 0; k < found; ++k) out.values.push_back(w[k] * scale);
  return out;
}

/// Eigenenergies below the barrier top with at least half their weight on the
/// shallow side, for a uniform grid of n points on [lo, hi].
GridSpectrum grid_spectrum(const LoadedEnergies& le, const WellReport& report, double lo,
                           double hi, int n) {
  const Extremum& shallow = report.shallow();
  const Extremum& top = *report.barrier_top;
  const TridiagonalEigen eig = solve_grid(le, report.phi_b, lo, hi, n, shallow.U, top.U, true);
  const double h = (hi - lo) / (n + 1);
  const bool shallow_left = shallow.phi < top.phi;
  GridSpectrum out;
  for (std::size_t k = 0; k < eig.values.size(); ++k) {
    double weight = 0.0, total = 0.0;
    for (int i = 0; i < n; ++i) {
      const double amp = eig.vectors[k * n + i];
      const double phi = lo + (i + 1) * h;
      total += amp * amp;
      if ((phi < top.phi) == shallow_left) weight += amp * amp;
    }
    out.all.push_back(eig.values[k]);
    if (weight >= 0.5 * total) out.levels.push_back(eig.values[k]);
  }
  std::sort(out.all.begin(), out.all.end());
  std::sort(out.levels.begin(), out.levels.end());
  return out;
}

/// Every level of a has a partner in b within the shift tolerance, except
/// levels grazing either end of the window, which may cross it under refinement.
bool levels_match(const std::vector<double>& a, const std::vector<double>& b, double bottom,
                  double top) {
  const double floor = kSpectrumShiftTolerance * (top - bottom);
  for (double level : a) {
    const double tol = kSpectrumShiftTolerance * (level - bottom);
    const bool partner = std::any_of(b.begin(), b.end(),
                                     [&](double other) { return std::abs(other - level) <= tol; });
    if (!partner && top - level > floor && level - bottom > floor) return false;
  }
  return true;
}

/// Richardson step for a second-order stencil: each fine level is combined
/// with its nearest partner from the grid of twice the spacing.
std::vector<double> extrapolate(const std::vector<double>& fine, const std::vector<double>& coarse,
                                double bottom) {
  std::vector<double> out;
  for (double level : fine) {
    const double tol = kSpectrumShiftTolerance * (level - bottom);
    double best = level, distance = tol;
    for (double other : coarse) {
      if (std::abs(other - level) <= distance) {
        distance = std::abs(other - level);
        best = (4.0 * level - other) / 3.0;
      }
    }
    out.push_back(best);
  }
  return out;
}

}  // namespace

void CircuitParams::validate() const {
  require_positive(C_r, "C_r");
  require_positive(L_r, "L_r");
  require_positive(C_p, "C_p");
  require_positive(L_G, "L_G");
  require_positive(I_0, "I_0");
  if (!(C_c >= 0.0) || !std::isfinite(C_c)) {
    throw InvalidArgument("CircuitParams: C_c must be non-negative and finite");
  }
  if (!std::isfinite(phi_b)) throw InvalidArgument("CircuitParams: phi_b must be finite");
}

LoadedEnergies loaded_energies(const CircuitParams& cp) {
  cp.validate();
  const double e = constants::kElementaryCharge;
  const double phi0 = constants::kReducedFluxQuantum;
  LoadedEnergies le;
  le.C_p_loaded = cp.C_p + cp.C_r * cp.C_c / (cp.C_r + cp.C_c);
  le.C_r_loaded = cp.C_r + cp.C_p * cp.C_c / (cp.C_p + cp.C_c);
  le.C_c_loaded = cp.C_c > 0.0 ? cp.C_r + cp.C_p + cp.C_r * cp.C_p / cp.C_c
                               : std::numeric_limits<double>::infinity();
  le.E_C_p = e * e / (2.0 * le.C_p_loaded);
  le.E_C_r = e * e / (2.0 * le.C_r_loaded);
  le.E_C_c = cp.C_c > 0.0 ? e * e / (2.0 * le.C_c_loaded) : 0.0;
  le.E_L_p = phi0 * phi0 / cp.L_G;
  le.E_L_r = phi0 * phi0 / cp.L_r;
  le.E_J = cp.I_0 * phi0;
  return le;
}

double potential(double phi, const LoadedEnergies& le, double phi_b) {
  const double d = phi - phi_b;
  return 0.5 * le.E_L_p * d * d - le.E_J * std::cos(phi);
}

double potential_d1(double phi, const LoadedEnergies& le, double phi_b) {
  return le.E_L_p * (phi - phi_b) + le.E_J * std::sin(phi);
}

double potential_d2(double phi, const LoadedEnergies& le, double /*phi_b*/) {
  return le.E_L_p + le.E_J * std::cos(phi);
}

const Extremum& WellReport::shallow() const {
  if (!shallow_index) throw ValidityError("WellReport: no shallow well");
  return minima.at(*shallow_index);
}

const Extremum& WellReport::deep() const {
  if (!deep_index) throw ValidityError("WellReport: no deep well");
  return minima.at(*deep_index);
}

WellReport find_minima(const LoadedEnergies& le, double phi_b) {
  if (!(le.E_L_p > 0.0) || le.E_J < 0.0) throw InvalidArgument("find_minima: invalid energies");
  WellReport report;
  report.phi_b = phi_b;

  if (le.E_J == 0.0) {
    report.minima.push_back({phi_b, 0.0, le.E_L_p});
    report.n_wells = 1;
    report.deep_index = 0;
    return report;
  }

  const double lo = -2.0 * kPi, hi = 4.0 * kPi;
  const double step = (hi - lo) / (kCoarseGridPoints - 1);
  std::vector<Extremum> minima, maxima;
  double prev = potential_d1(lo, le, phi_b);
  for (int i = 1; i < kCoarseGridPoints; ++i) {
    const double a = lo + (i - 1) * step, b = lo + i * step;
    const double cur = potential_d1(b, le, phi_b);
    if (prev < 0.0 && cur >= 0.0) minima.push_back(polish_extremum(le, phi_b, a, b));
    if (prev > 0.0 && cur <= 0.0) maxima.push_back(polish_extremum(le, phi_b, a, b));
    prev = cur;
  }
  if (minima.empty()) throw NumericalError("find_minima: no minimum in the search window");

  std::size_t deep = 0;
  for (std::size_t i = 1; i < minima.size(); ++i) {
    if (minima[i].U < minima[deep].U) deep = i;
  }
  std::optional<std::size_t> shallow;
  for (std::size_t nb : {deep - 1, deep + 1}) {
    if (nb < minima.size() && (!shallow || minima[nb].U < minima[*shallow].U)) shallow = nb;
  }

  if (!shallow) {
    report.minima = {minima[deep]};
    report.n_wells = 1;
    report.deep_index = 0;
    return report;
  }

  const Extremum& s = minima[*shallow];
  const Extremum& d = minima[deep];
  const double left = std::min(s.phi, d.phi), right = std::max(s.phi, d.phi);
  std::optional<Extremum> top;
  for (const auto& m : maxima) {
    if (m.phi > left && m.phi < right && (!top || m.U > top->U)) top = m;
  }
  if (!top) throw NumericalError("find_minima: no barrier between adjacent minima");

  report.n_wells = 2;
  report.barrier_top = top;
  if (s.phi < d.phi) {
    report.minima = {s, d};
    report.shallow_index = 0;
    report.deep_index = 1;
  } else {
    report.minima = {d, s};
    report.shallow_index = 1;
    report.deep_index = 0;
  }
  return report;
}

std::vector<double> shallow_spectrum(const LoadedEnergies& le, const WellReport& report) {
  if (report.n_wells != 2 || !report.barrier_top) {
    throw ValidityError("shallow_spectrum: requires a two-well configuration");
  }
  const Extremum& shallow = report.shallow();
  const Extremum& deep = report.deep();
  const Extremum& top = *report.barrier_top;

  // The grid ends where U exceeds the barrier top by a margin on both outer
  // sides, so states below the top are confined by the potential, not the walls.
  const double hw = std::sqrt(8.0 * le.E_C_p * std::max(shallow.curvature, 0.0));
  const double level = top.U + (top.U - shallow.U) + 10.0 * hw;
  const double dir = shallow.phi < deep.phi ? -1.0 : 1.0;
  const double outer_shallow = walk_until_above(le, report.phi_b, shallow.phi, dir, level);
  const double outer_deep = walk_until_above(le, report.phi_b, deep.phi, -dir, level);
  const double lo = std::min(outer_shallow, outer_deep);
  const double hi = std::max(outer_shallow, outer_deep);

  int n = kSpectrumGridPoints;
  GridSpectrum coarse = grid_spectrum(le, report, lo, hi, n);
  for (int refinement = 0; refinement < kSpectrumMaxRefinements; ++refinement) {
    n *= 2;
    GridSpectrum fine = grid_spectrum(le, report, lo, hi, n);
    // Kept levels are matched against every eigenvalue of the other grid, so a
    // level whose weight sits near the 50% split does not count as a failure.
    const bool converged = levels_match(fine.levels, coarse.all, shallow.U, top.U) &&
                           levels_match(coarse.levels, fine.all, shallow.U, top.U);
    if (converged) return extrapolate(fine.levels, coarse.all, shallow.U);
    coarse = std::move(fine);
  }
  throw NumericalError("shallow_spectrum: eigenvalues did not converge under grid refinement");
}

std::vector<double> grid_levels(const LoadedEnergies& le, double phi_b, double lo, double hi,
                                int n_points, double e_min, double e_max) {
  if (n_points < 3 || !(hi > lo) || !(e_max > e_min)) throw InvalidArgument("grid_levels: invalid grid");
  std::vector<double> values = solve_grid(le, phi_b, lo, hi, n_points, e_min, e_max, false).values;
  std::sort(values.begin(), values.end());
  return values;
}

WellReport analyze_wells(const LoadedEnergies& le, double phi_b) {
  WellReport report = find_minima(le, phi_b);
  if (report.n_wells == 2) {
    report.shallow_levels = shallow_spectrum(le, report);
    report.shallow_level_count = static_cast<int>(report.shallow_levels.size());
  }
  return report;
}

double wkb_rate(int j, const LoadedEnergies& le, const WellReport& report) {
  if (report.n_wells != 2 || !report.barrier_top) {
    throw ValidityError("wkb_rate: requires a two-well configuration");
  }
  if (j < 0 || j >= static_cast<int>(report.shallow_levels.size())) {
    throw InvalidArgument("wkb_rate: level index outside the shallow spectrum");
  }
  const Extremum& shallow = report.shallow();
  const Extremum& deep = report.deep();
  const Extremum& top = *report.barrier_top;
  const double E = report.shallow_levels[j];
  if (!(E < top.U)) throw ValidityError("wkb_rate: level is not below the barrier top");

  auto excess = [&](double phi) { return potential(phi, le, report.phi_b) - E; };
  // Inner turning point between the shallow bottom and the top, outer one
  // between the top and the deep bottom.
  double phi1 = bisect(excess, shallow.phi, top.phi);
  double deep_side = deep.phi;
  if (excess(deep_side) >= 0.0) throw NumericalError("wkb_rate: turning points not bracketed");
  double phi2 = bisect(excess, top.phi, deep_side);
  if (phi1 > phi2) std::swap(phi1, phi2);

  // (2/hbar) sqrt(2 m (U - E)) with m = hbar^2 / (8 E_C,p) reduces to
  // sqrt((U - E) / E_C,p).
  auto integrand = [&](double phi) { return std::sqrt(std::max(0.0, excess(phi)) / le.E_C_p); };
  boost::math::quadrature::tanh_sinh<double> quad;
  const double exponent = quad.integrate(integrand, phi1, phi2);

  const double omega = (E - shallow.U) / kHbar;
  const double jh = j + 0.5;
  const double prefactor =
      omega / (std::tgamma(j + 1.0) * std::sqrt(2.0 * kPi)) * std::pow(jh / std::exp(1.0), jh);
  return prefactor * std::exp(-exponent);
}

namespace {

EffectiveParams harmonic_expansion(const CircuitParams& cp, const LoadedEnergies& le,
                                   const WellReport& report) {
  return expansion_at(cp, le, report.shallow().phi);
}

}  // namespace

EffectiveParams expansion_at(const CircuitParams& cp, const LoadedEnergies& le, double phi_min) {
  EffectiveParams ep;
  ep.phi_min = phi_min;
  ep.E_L_p_eff = le.E_L_p + le.E_J * std::cos(phi_min);
  if (!(ep.E_L_p_eff > 0.0)) throw ValidityError("effective_params: non-positive well curvature");
  ep.phi_zpf_p = std::pow(2.0 * le.E_C_p / ep.E_L_p_eff, 0.25);
  ep.n_zpf_p = std::pow(ep.E_L_p_eff / (32.0 * le.E_C_p), 0.25);
  ep.n_zpf_r = std::pow(le.E_L_r / (32.0 * le.E_C_r), 0.25);
  ep.Xi3 = le.E_J / (6.0 * kHbar) * std::pow(ep.phi_zpf_p, 3) * std::sin(phi_min);
  ep.Xi4 = le.E_J / (24.0 * kHbar) * std::pow(ep.phi_zpf_p, 4) * std::cos(phi_min);
  ep.varpi_p = std::sqrt(8.0 * le.E_C_p * ep.E_L_p_eff) / kHbar;
  ep.lambda = ep.Xi3 / ep.varpi_p;
  ep.xi = 60.0 * ep.lambda * ep.Xi3 + 12.0 * ep.Xi4;
  ep.omega_p = ep.varpi_p - ep.xi;
  ep.g = le.E_C_c / kHbar * ep.n_zpf_r * ep.n_zpf_p;
  ep.g2 = 4.0 * ep.lambda * ep.g;
  ep.omega_r = 1.0 / std::sqrt(cp.L_r * le.C_r_loaded);
  return ep;
}

EffectiveParams effective_params(const CircuitParams& cp, const LoadedEnergies& le,
                                 const WellReport& report) {
  if (report.n_wells != 2) throw ValidityError("effective_params: potential has a single well");
  if (report.shallow_level_count < 2) {
    throw ValidityError("effective_params: shallow well hosts fewer than two levels");
  }
  EffectiveParams ep = harmonic_expansion(cp, le, report);
  if (ep.lambda * ep.lambda >= kLambdaSquaredLimit) {
    throw ValidityError("effective_params: lambda^2 = " + std::to_string(ep.lambda * ep.lambda) +
                        " outside the perturbative domain");
  }
  ep.gamma0 = wkb_rate(0, le, report);
  ep.gamma1 = wkb_rate(1, le, report);
  return ep;
}

EffectiveParams effective_params(const CircuitParams& cp) {
  const LoadedEnergies le = loaded_energies(cp);
  return effective_params(cp, le, analyze_wells(le, cp.phi_b));
}

std::vector<FluxPoint> flux_sweep(const CircuitParams& cp, const std::vector<double>& phi_b) {
  const LoadedEnergies le = loaded_energies(cp);
  std::vector<FluxPoint> rows(phi_b.size());
  parallel_for(phi_b.size(), [&](std::size_t i) {
    FluxPoint& row = rows[i];
    row = {phi_b[i], 0, 0, kNaN, kNaN, kNaN, kNaN, kNaN};
    const WellReport report = analyze_wells(le, phi_b[i]);
    row.n_wells = report.n_wells;
    row.shallow_level_count = report.shallow_level_count;
    if (report.shallow_level_count >= 1) row.gamma0 = wkb_rate(0, le, report);
    if (report.shallow_level_count >= 2) {
      row.gamma1 = wkb_rate(1, le, report);
      CircuitParams at = cp;
      at.phi_b = phi_b[i];
      const EffectiveParams ep = harmonic_expansion(at, le, report);
      if (ep.lambda * ep.lambda < kLambdaSquaredLimit) {
        row.omega_p = ep.omega_p;
        row.xi = ep.xi;
        row.g = ep.g;
      }
    }
  });
  return rows;
}

}  // namespace jpmcount::circuit
