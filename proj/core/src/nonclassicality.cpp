#include "jpmcount/nonclassicality.hpp"

#include <algorithm>
#include <cmath>

#include "jpmcount/error.hpp"
#include "jpmcount/jade.hpp"
#include "jpmcount/states.hpp"

namespace jpmcount::nonclassicality {

namespace {

constexpr double kMuFloor = 1e-6;
constexpr int kGoldenIterations = 80;

}  // namespace

double max_intensity(const counting::Povm& povm) {
  const int top = povm.n_max() - 1;
  if (stats::poisson_tail(kMuFloor, top) >= kQTail) {
    throw TruncationError("max_intensity: POVM support too small for any intensity");
  }
  double lo = kMuFloor, hi = std::max(1.0, 2.0 * top);
  while (stats::poisson_tail(hi, top) < kQTail) hi *= 2.0;
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (lo + hi);
    (stats::poisson_tail(mid, top) < kQTail ? lo : hi) = mid;
  }
  return lo;
}

Eigen::VectorXd q_symbol(const counting::Povm& povm, double mu) {
  if (!(mu >= 0.0) || !std::isfinite(mu)) throw InvalidArgument("q_symbol: mu must be non-negative");
  const int n_max = povm.n_max();
  if (stats::poisson_tail(mu, n_max - 1) >= kQTail) {
    throw TruncationError("q_symbol: Poisson tail beyond the POVM support exceeds 1e-10");
  }
  Eigen::VectorXd weights(n_max);
  for (int k = 0; k < n_max; ++k) {
    weights(k) = mu == 0.0 ? (k == 0 ? 1.0 : 0.0)
                           : std::exp(-mu + k * std::log(mu) - std::lgamma(k + 1.0));
  }
  return povm.P * weights;
}

ClassicalBound::ClassicalBound(const counting::Povm& povm, int grid_points) : povm_(povm) {
  if (grid_points < 3) throw InvalidArgument("ClassicalBound: grid too coarse");
  if (povm.M < 1) throw InvalidArgument("ClassicalBound: witness needs M >= 1");
  mu_max_ = max_intensity(povm_);
  mu_grid_.push_back(0.0);
  const double a = std::log(kMuFloor), b = std::log(mu_max_);
  for (int i = 0; i < grid_points - 1; ++i) {
    mu_grid_.push_back(std::exp(a + (b - a) * i / (grid_points - 2)));
  }
  mu_grid_.back() = mu_max_;
  q_grid_.resize(static_cast<Eigen::Index>(mu_grid_.size()), povm_.M);
  for (std::size_t i = 0; i < mu_grid_.size(); ++i) {
    q_grid_.row(static_cast<Eigen::Index>(i)) = q_symbol(povm_, mu_grid_[i]).head(povm_.M).transpose();
  }
}

double ClassicalBound::value(const Eigen::VectorXd& lam, double mu) const {
  return q_symbol(povm_, mu).head(povm_.M).dot(lam);
}

Bound ClassicalBound::operator()(const Eigen::VectorXd& lam) const {
  if (lam.size() != povm_.M) throw InvalidArgument("classical_bound: witness size must equal M");
  const Eigen::VectorXd values = q_grid_ * lam;
  const int n = static_cast<int>(values.size());
  Bound best{values(0), 0.0};
  for (int i = 0; i < n; ++i) {
    const bool left_ok = i == 0 || values(i) >= values(i - 1);
    const bool right_ok = i == n - 1 || values(i) >= values(i + 1);
    if (!left_ok || !right_ok) continue;
    if (values(i) > best.rhs) best = {values(i), mu_grid_[i]};
    // Golden-section polish over the neighbouring grid cells, in log mu where
    // the grid is logarithmic.
    const bool log_axis = i > 1;
    const double lo_mu = mu_grid_[std::max(i - 1, 0)], hi_mu = mu_grid_[std::min(i + 1, n - 1)];
    if (hi_mu <= lo_mu) continue;
    auto at = [&](double s) { return std::min(log_axis ? std::exp(s) : s, mu_max_); };
    double lo = log_axis ? std::log(lo_mu) : lo_mu, hi = log_axis ? std::log(hi_mu) : hi_mu;
    const double r = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - r * (hi - lo), x2 = lo + r * (hi - lo);
    double f1 = value(lam, at(x1)), f2 = value(lam, at(x2));
    for (int it = 0; it < kGoldenIterations; ++it) {
      if (f1 >= f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - r * (hi - lo);
        f1 = value(lam, at(x1));
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + r * (hi - lo);
        f2 = value(lam, at(x2));
      }
    }
    if (f1 > best.rhs) best = {f1, at(x1)};
    if (f2 > best.rhs) best = {f2, at(x2)};
  }
  return best;
}

Bound classical_bound(const Eigen::VectorXd& lam, const counting::Povm& povm) {
  return ClassicalBound(povm)(lam);
}

double violation(const Eigen::VectorXd& lam, const stats::ClickDistribution& clicks,
                 const counting::Povm& povm) {
  if (clicks.p.size() != povm.M + 1) throw InvalidArgument("violation: click support must be M+1");
  return lam.dot(clicks.p.head(povm.M)) - classical_bound(lam, povm).rhs;
}

ViolationReport maximize_violation(const stats::ClickDistribution& clicks,
                                   const counting::Povm& povm, const DeBudget& budget) {
  if (clicks.p.size() != povm.M + 1) {
    throw InvalidArgument("maximize_violation: click support must be M+1");
  }
  const ClassicalBound bound(povm);
  const Eigen::VectorXd observed = clicks.p.head(povm.M);
  auto objective = [&](const std::vector<double>& x) {
    const Eigen::Map<const Eigen::VectorXd> lam(x.data(), static_cast<Eigen::Index>(x.size()));
    return lam.dot(observed) - bound(lam).rhs;
  };
  jade::Settings settings;
  settings.population = budget.population;
  settings.generations = budget.generations;
  settings.seed = budget.seed;
  const jade::Result res = jade::maximize(objective, povm.M, -1.0, 1.0, settings);

  ViolationReport report;
  report.lam_opt = Eigen::Map<const Eigen::VectorXd>(res.best.data(), povm.M);
  const Bound b = bound(report.lam_opt);
  report.lhs = report.lam_opt.dot(observed);
  report.rhs = b.rhs;
  report.violation = report.lhs - report.rhs;
  report.mu_star = b.mu_star;
  report.converged = res.converged;
  report.evaluations = res.evaluations;
  return report;
}

}  // namespace jpmcount::nonclassicality
