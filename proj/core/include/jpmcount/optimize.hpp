#pragma once

// Resolution surface over (gamma1, t_cpt) and its maximum.

#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <tuple>
#include <vector>

#include <Eigen/Dense>

#include "jpmcount/counting.hpp"
#include "jpmcount/dynamics.hpp"

namespace jpmcount::optimize {

struct SweepGrid {
  /// Log-spaced tunneling rates of the upper level (1/s), strictly increasing.
  std::vector<double> gamma1;
  /// Capture durations (s), strictly increasing.
  std::vector<double> t_cpt;
  /// Remaining detector parameters; gamma1 and t_cpt are overwritten per point.
  dynamics::DetectorParams fixed;
  std::vector<int> M_list;
  /// When set, gamma0 follows gamma1 as gamma0 = ratio * gamma1.
  std::optional<double> gamma0_ratio;

  void validate() const;
};

std::vector<double> log_space(double lo, double hi, int n);
std::vector<double> lin_space(double lo, double hi, int n);

struct OptimumReport {
  counting::Technique technique = counting::Technique::Binomial;
  int M = 0;
  double gamma1_opt = 0.0;
  double tcpt_opt = 0.0;
  double R_max = 0.0;
  /// Best value among the grid samples.
  double R_grid = 0.0;
  /// R_M(gamma1[i], t_cpt[j]); NaN marks points whose dynamics failed.
  Eigen::MatrixXd grid_values;
  int invalid_points = 0;
};

/// Thread-safe memo of single-cycle kernels keyed by the full parameter set.
class KernelCache {
 public:
  std::shared_ptr<const counting::MeasurementKernel> get(const dynamics::DetectorParams& dp,
                                                         int n_max);
  std::size_t size() const;

 private:
  using Key = std::tuple<double, double, double, double, double, double, double, double,
                         double, double, int>;
  mutable std::mutex mutex_;
  std::map<Key, std::shared_ptr<const counting::MeasurementKernel>> entries_;
};

/// Detector parameters at one (gamma1, t_cpt) point of the grid.
dynamics::DetectorParams point_params(const SweepGrid& grid, double gamma1, double t_cpt);

/// R_M at one point, building or reusing the kernel.
double resolution_at(const dynamics::DetectorParams& dp, int M, counting::Technique technique,
                     KernelCache* cache = nullptr);

/// Grid sweep followed by a Nelder-Mead polish in (log gamma1, t_cpt) from the
/// best cell, clamped to the grid box. One report per entry of grid.M_list.
std::vector<OptimumReport> sweep_resolution(const SweepGrid& grid, counting::Technique technique,
                                            KernelCache* cache = nullptr);

struct MaxResolution {
  int M = 0;
  double R_max = 0.0;
  double gamma1_opt = 0.0;
  double tcpt_opt = 0.0;
};

/// R_M^max for each M over the (gamma1, t_cpt) box spanned by grid.
std::vector<MaxResolution> max_resolution_vs_M(const SweepGrid& grid,
                                               counting::Technique technique,
                                               KernelCache* cache = nullptr);

}  // namespace jpmcount::optimize
