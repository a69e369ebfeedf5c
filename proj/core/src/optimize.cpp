#include "jpmcount/optimize.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "jpmcount/error.hpp"
#include "jpmcount/metrics.hpp"
#include "jpmcount/parallel.hpp"

namespace jpmcount::optimize {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kPolishTolerance = 1e-4;
constexpr int kPolishMaxEvaluations = 400;

void require_increasing(const std::vector<double>& values, const char* name) {
  if (values.empty()) throw InvalidArgument(std::string("SweepGrid: ") + name + " is empty");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] > 0.0) || (i > 0 && !(values[i] > values[i - 1]))) {
      throw InvalidArgument(std::string("SweepGrid: ") + name +
                            " must be positive and strictly increasing");
    }
  }
}

struct Vertex {
  std::array<double, 2> x;
  double f;
};

/// Maximizes f over the box [lo, hi] with Nelder-Mead; coordinates are clamped.
Vertex nelder_mead_max(auto&& f, std::array<double, 2> start, std::array<double, 2> step,
                       std::array<double, 2> lo, std::array<double, 2> hi) {
  auto clamp = [&](std::array<double, 2> x) {
    for (int d = 0; d < 2; ++d) x[d] = std::clamp(x[d], lo[d], hi[d]);
    return x;
  };
  auto eval = [&](std::array<double, 2> x) {
    x = clamp(x);
    const double v = f(x);
    return Vertex{x, std::isfinite(v) ? v : -std::numeric_limits<double>::infinity()};
  };

  std::array<Vertex, 3> s = {eval(start), eval({start[0] + step[0], start[1]}),
                             eval({start[0], start[1] + step[1]})};
  int evaluations = 3;
  auto lerp = [](const std::array<double, 2>& a, const std::array<double, 2>& b, double t) {
    return std::array<double, 2>{a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])};
  };

  while (evaluations < kPolishMaxEvaluations) {
    std::sort(s.begin(), s.end(), [](const Vertex& a, const Vertex& b) { return a.f > b.f; });
    const double spread = s[0].f - s[2].f;
    const double size = std::max({std::abs(s[1].x[0] - s[0].x[0]), std::abs(s[2].x[0] - s[0].x[0]),
                                  std::abs(s[1].x[1] - s[0].x[1]) / std::max(std::abs(step[1]), 1e-300),
                                  std::abs(s[2].x[1] - s[0].x[1]) / std::max(std::abs(step[1]), 1e-300)});
    if (spread < kPolishTolerance && size < 1e-3) break;

    const std::array<double, 2> centroid = lerp(s[0].x, s[1].x, 0.5);
    const Vertex reflected = eval(lerp(centroid, s[2].x, -1.0));
    ++evaluations;
    if (reflected.f > s[0].f) {
      const Vertex expanded = eval(lerp(centroid, s[2].x, -2.0));
      ++evaluations;
      s[2] = expanded.f > reflected.f ? expanded : reflected;
    } else if (reflected.f > s[1].f) {
      s[2] = reflected;
    } else {
      const Vertex contracted = eval(lerp(centroid, s[2].x, 0.5));
      ++evaluations;
      if (contracted.f > s[2].f) {
        s[2] = contracted;
      } else {
        for (int k = 1; k < 3; ++k) {
          s[k] = eval(lerp(s[0].x, s[k].x, 0.5));
          ++evaluations;
        }
      }
    }
  }
  return *std::max_element(s.begin(), s.end(),
                           [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
}

int max_M(const SweepGrid& grid) { return *std::max_element(grid.M_list.begin(), grid.M_list.end()); }

/// Kernel truncated to photon numbers 0..n_max-1. Photon number never
/// increases within a cycle, so the leading block is exact.
counting::MeasurementKernel leading_block(const counting::MeasurementKernel& k, int n_max) {
  return {k.no_click.topLeftCorner(n_max, n_max), k.click.topLeftCorner(n_max, n_max)};
}

}  // namespace

void SweepGrid::validate() const {
  require_increasing(gamma1, "gamma1");
  require_increasing(t_cpt, "t_cpt");
  if (M_list.empty()) throw InvalidArgument("SweepGrid: M_list is empty");
  for (int M : M_list) {
    if (M < 1) throw InvalidArgument("SweepGrid: every M must be at least 1");
  }
  if (gamma0_ratio && !(*gamma0_ratio >= 0.0)) {
    throw InvalidArgument("SweepGrid: gamma0_ratio must be non-negative");
  }
}

std::vector<double> log_space(double lo, double hi, int n) {
  if (n < 1 || !(lo > 0.0) || !(hi >= lo)) throw InvalidArgument("log_space: invalid range");
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) {
    out[i] = n == 1 ? lo : std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * i / (n - 1));
  }
  if (n > 1) out.back() = hi;
  return out;
}

std::vector<double> lin_space(double lo, double hi, int n) {
  if (n < 1 || !(hi >= lo)) throw InvalidArgument("lin_space: invalid range");
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
  return out;
}

std::shared_ptr<const counting::MeasurementKernel> KernelCache::get(
    const dynamics::DetectorParams& dp, int n_max) {
  const Key key{dp.g,      dp.delta_p, dp.gamma0, dp.gamma1, dp.Gamma10, dp.Gamma11,
                dp.kappa,  dp.beta,    dp.t_cpt,  dp.t_rr,   n_max};
  {
    std::lock_guard lock(mutex_);
    if (auto it = entries_.find(key); it != entries_.end()) return it->second;
  }
  auto kernel = std::make_shared<const counting::MeasurementKernel>(counting::build_kernel(dp, n_max));
  std::lock_guard lock(mutex_);
  return entries_.emplace(key, std::move(kernel)).first->second;
}

std::size_t KernelCache::size() const {
  std::lock_guard lock(mutex_);
  return entries_.size();
}

dynamics::DetectorParams point_params(const SweepGrid& grid, double gamma1, double t_cpt) {
  dynamics::DetectorParams dp = grid.fixed;
  dp.gamma1 = gamma1;
  dp.t_cpt = t_cpt;
  if (grid.gamma0_ratio) dp.gamma0 = *grid.gamma0_ratio * gamma1;
  return dp;
}

double resolution_at(const dynamics::DetectorParams& dp, int M, counting::Technique technique,
                     KernelCache* cache) {
  const auto kernel = cache ? cache->get(dp, M + 1)
                            : std::make_shared<const counting::MeasurementKernel>(
                                  counting::build_kernel(dp, M + 1));
  return stats::resolution(counting::build_povm(*kernel, M, technique));
}

std::vector<OptimumReport> sweep_resolution(const SweepGrid& grid, counting::Technique technique,
                                            KernelCache* cache) {
  grid.validate();
  const int n_g = static_cast<int>(grid.gamma1.size());
  const int n_t = static_cast<int>(grid.t_cpt.size());
  const int n_kernel = max_M(grid) + 1;
  const std::size_t n_models = grid.M_list.size();

  std::vector<Eigen::MatrixXd> surfaces(n_models, Eigen::MatrixXd::Constant(n_g, n_t, kNaN));
  parallel_for(static_cast<std::size_t>(n_g) * n_t, [&](std::size_t idx) {
    const int i = static_cast<int>(idx) / n_t, j = static_cast<int>(idx) % n_t;
    try {
      const dynamics::DetectorParams dp = point_params(grid, grid.gamma1[i], grid.t_cpt[j]);
      const auto kernel = cache ? cache->get(dp, n_kernel)
                                : std::make_shared<const counting::MeasurementKernel>(
                                      counting::build_kernel(dp, n_kernel));
      for (std::size_t k = 0; k < n_models; ++k) {
        const int M = grid.M_list[k];
        const counting::Povm povm =
            counting::build_povm(leading_block(*kernel, M + 1), M, technique);
        povm.validate();
        surfaces[k](i, j) = stats::resolution(povm);
      }
    } catch (const Error&) {
      // The point stays NaN and is counted as invalid.
    }
  });

  std::vector<OptimumReport> reports;
  for (std::size_t k = 0; k < n_models; ++k) {
    OptimumReport rep;
    rep.technique = technique;
    rep.M = grid.M_list[k];
    rep.grid_values = surfaces[k];
    rep.invalid_points = static_cast<int>(surfaces[k].array().isNaN().count());
    int bi = -1, bj = -1;
    for (int i = 0; i < n_g; ++i) {
      for (int j = 0; j < n_t; ++j) {
        const double v = surfaces[k](i, j);
        if (std::isfinite(v) && (bi < 0 || v > surfaces[k](bi, bj))) {
          bi = i;
          bj = j;
        }
      }
    }
    if (bi < 0) throw NumericalError("sweep_resolution: every grid point failed");
    rep.R_grid = surfaces[k](bi, bj);
    rep.R_max = rep.R_grid;
    rep.gamma1_opt = grid.gamma1[bi];
    rep.tcpt_opt = grid.t_cpt[bj];

    if (n_g > 1 || n_t > 1) {
      const std::array<double, 2> lo{std::log(grid.gamma1.front()), grid.t_cpt.front()};
      const std::array<double, 2> hi{std::log(grid.gamma1.back()), grid.t_cpt.back()};
      const double step_g = n_g > 1 ? (hi[0] - lo[0]) / (n_g - 1) : 0.0;
      const double step_t = n_t > 1 ? (hi[1] - lo[1]) / (n_t - 1) : 0.0;
      // Step towards the interior so the initial simplex is not flattened by clamping.
      const double sg = bi + 1 < n_g ? step_g : -step_g;
      const double st = bj + 1 < n_t ? step_t : -step_t;
      auto objective = [&](const std::array<double, 2>& x) {
        try {
          return resolution_at(point_params(grid, std::exp(x[0]), x[1]), rep.M, technique, cache);
        } catch (const Error&) {
          return kNaN;
        }
      };
      const Vertex best = nelder_mead_max(objective, {lo[0] + bi * step_g, lo[1] + bj * step_t},
                                          {sg, st}, lo, hi);
      if (best.f > rep.R_max) {
        rep.R_max = best.f;
        rep.gamma1_opt = std::exp(best.x[0]);
        rep.tcpt_opt = best.x[1];
      }
    }
    reports.push_back(std::move(rep));
  }
  return reports;
}

std::vector<MaxResolution> max_resolution_vs_M(const SweepGrid& grid,
                                               counting::Technique technique, KernelCache* cache) {
  std::vector<MaxResolution> out;
  for (const OptimumReport& rep : sweep_resolution(grid, technique, cache)) {
    out.push_back({rep.M, rep.R_max, rep.gamma1_opt, rep.tcpt_opt});
  }
  return out;
}

}  // namespace jpmcount::optimize
