#pragma once

// Adaptive differential evolution (JADE): current-to-pbest/1 mutation with an
// external archive and self-adapting crossover rate and mutation factor.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

#include "jpmcount/error.hpp"
#include "jpmcount/parallel.hpp"

namespace jpmcount::jade {

struct Settings {
  int population = 40;
  int generations = 300;
  std::uint64_t seed = 0;
  /// Fraction of the population eligible as pbest.
  double p_best = 0.05;
  /// Learning rate of the CR and F location parameters.
  double c = 0.1;
  bool use_archive = true;
  /// Generations without improvement above stall_tolerance that count as converged.
  int stall_generations = 50;
  double stall_tolerance = 1e-12;
};

struct Result {
  std::vector<double> best;
  double best_value = -std::numeric_limits<double>::infinity();
  int generations = 0;
  long evaluations = 0;
  bool converged = false;
  /// Best value after each generation.
  std::vector<double> history;
};

using Objective = std::function<double(const std::vector<double>&)>;

/// Maximizes f over the box [lo, hi]^dim. All random draws happen serially
/// before the parallel evaluation of a generation, so the result depends only
/// on the seed.
inline Result maximize(const Objective& f, int dim, double lo, double hi, const Settings& s) {
  if (dim < 1 || s.population < 4 || s.generations < 1 || !(hi > lo)) {
    throw InvalidArgument("jade::maximize: invalid settings");
  }
  const int np = s.population;
  std::mt19937_64 rng(s.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> box(lo, hi);

  using Vec = std::vector<double>;
  std::vector<Vec> pop(np, Vec(dim));
  for (auto& x : pop) {
    for (double& v : x) v = box(rng);
  }
  std::vector<double> fit(np);
  parallel_for(np, [&](std::size_t i) { fit[i] = f(pop[i]); });

  Result result;
  result.evaluations = np;
  std::vector<Vec> archive;
  double mu_cr = 0.5, mu_f = 0.5;
  int stall = 0;
  double best_so_far = *std::max_element(fit.begin(), fit.end());

  std::vector<Vec> trial(np, Vec(dim));
  std::vector<double> cr(np), fac(np), trial_fit(np);
  std::vector<int> order(np);

  for (int gen = 0; gen < s.generations; ++gen) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return fit[a] > fit[b]; });
    const int top = std::max(1, static_cast<int>(std::ceil(s.p_best * np)));

    for (int i = 0; i < np; ++i) {
      std::normal_distribution<double> cr_dist(mu_cr, 0.1);
      cr[i] = std::clamp(cr_dist(rng), 0.0, 1.0);
      std::cauchy_distribution<double> f_dist(mu_f, 0.1);
      double F;
      do {
        F = f_dist(rng);
      } while (F <= 0.0);
      fac[i] = std::min(F, 1.0);

      const Vec& pbest = pop[order[std::uniform_int_distribution<int>(0, top - 1)(rng)]];
      int r1;
      do {
        r1 = std::uniform_int_distribution<int>(0, np - 1)(rng);
      } while (r1 == i);
      const int pool = np + static_cast<int>(archive.size());
      int r2;
      do {
        r2 = std::uniform_int_distribution<int>(0, pool - 1)(rng);
      } while (r2 == i || r2 == r1);
      const Vec& x2 = r2 < np ? pop[r2] : archive[r2 - np];

      const int j_rand = std::uniform_int_distribution<int>(0, dim - 1)(rng);
      for (int d = 0; d < dim; ++d) {
        double v = pop[i][d] + fac[i] * (pbest[d] - pop[i][d]) + fac[i] * (pop[r1][d] - x2[d]);
        // Out-of-box components land halfway between the parent and the bound.
        if (v < lo) v = 0.5 * (lo + pop[i][d]);
        if (v > hi) v = 0.5 * (hi + pop[i][d]);
        trial[i][d] = (d == j_rand || unit(rng) < cr[i]) ? v : pop[i][d];
      }
    }

    parallel_for(np, [&](std::size_t i) { trial_fit[i] = f(trial[i]); });
    result.evaluations += np;

    double sum_cr = 0.0, sum_f = 0.0, sum_f2 = 0.0;
    int successes = 0;
    for (int i = 0; i < np; ++i) {
      if (trial_fit[i] >= fit[i]) {
        if (trial_fit[i] > fit[i]) {
          if (s.use_archive) archive.push_back(pop[i]);
          sum_cr += cr[i];
          sum_f += fac[i];
          sum_f2 += fac[i] * fac[i];
          ++successes;
        }
        pop[i] = trial[i];
        fit[i] = trial_fit[i];
      }
    }
    while (static_cast<int>(archive.size()) > np) {
      const int drop = std::uniform_int_distribution<int>(0, static_cast<int>(archive.size()) - 1)(rng);
      archive[drop] = std::move(archive.back());
      archive.pop_back();
    }
    if (successes > 0) {
      mu_cr = (1.0 - s.c) * mu_cr + s.c * (sum_cr / successes);
      mu_f = (1.0 - s.c) * mu_f + s.c * (sum_f2 / sum_f);
    }

    const double gen_best = *std::max_element(fit.begin(), fit.end());
    result.history.push_back(gen_best);
    stall = gen_best > best_so_far + s.stall_tolerance ? 0 : stall + 1;
    best_so_far = std::max(best_so_far, gen_best);
    result.generations = gen + 1;
  }

  const int best = static_cast<int>(std::max_element(fit.begin(), fit.end()) - fit.begin());
  result.best = pop[best];
  result.best_value = fit[best];
  result.converged = stall >= s.stall_generations;
  return result;
}

}  // namespace jpmcount::jade
