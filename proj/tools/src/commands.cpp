#include "commands.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include <Eigen/Core>

#include "jpmcount/circuit.hpp"
#include "jpmcount/constants.hpp"
#include "jpmcount/counting.hpp"
#include "jpmcount/error.hpp"
#include "jpmcount/metrics.hpp"
#include "jpmcount/nonclassicality.hpp"
#include "jpmcount/optimize.hpp"
#include "jpmcount/states.hpp"

#ifndef JPMCOUNT_VERSION
#define JPMCOUNT_VERSION "unknown"
#endif

namespace jpmcount::cli {

namespace {

using constants::kTwoPi;

constexpr int kMaxSupport = 400;

std::string technique_name(counting::Technique t) { return std::string(counting::to_string(t)); }

stats::PhotonDistribution make_state(const StateSpec& state, int n_max) {
  if (state.kind == "coherent") return stats::coherent(state.mu, n_max);
  if (state.kind == "squeezed") return stats::squeezed_vacuum(state.r, n_max);
  return stats::fock(state.n, n_max);
}

nlohmann::json detector_json(const dynamics::DetectorParams& dp) {
  return {{"g_rad_s", dp.g},         {"delta_p_rad_s", dp.delta_p}, {"gamma0_per_s", dp.gamma0},
          {"gamma1_per_s", dp.gamma1}, {"Gamma10_per_s", dp.Gamma10}, {"Gamma11_per_s", dp.Gamma11},
          {"kappa_per_s", dp.kappa}, {"beta", dp.beta},             {"t_cpt_s", dp.t_cpt},
          {"t_rr_s", dp.t_rr}};
}

std::string join(const Eigen::VectorXd& v) {
  std::string out;
  for (Eigen::Index i = 0; i < v.size(); ++i) out += (i ? ";" : "") + format_double(v(i));
  return out;
}

void run_circuit(const RunConfig& cfg, const RunOptions& opt, RunArtifacts& art,
                 nlohmann::json& summary) {
  const auto phi = optimize::lin_space(cfg.phi_b_min, cfg.phi_b_max, cfg.phi_b_points);
  const auto rows = circuit::flux_sweep(*cfg.circuit, phi);
  Table table{{"phi_b", "n_wells", "shallow_level_count", "omega_p_GHz", "xi_MHz", "gamma0_Hz",
               "gamma1_Hz", "g_MHz"},
              {}};
  for (const auto& r : rows) {
    table.rows.push_back({r.phi_b, static_cast<long long>(r.n_wells),
                          static_cast<long long>(r.shallow_level_count), r.omega_p / kTwoPi / 1e9,
                          r.xi / kTwoPi / 1e6, r.gamma0 / kTwoPi, r.gamma1 / kTwoPi,
                          r.g / kTwoPi / 1e6});
  }
  art.files.push_back(write_table(opt.out_dir, "circuit", table, opt.format));
  summary["points"] = rows.size();
}

void run_povm(const RunConfig& cfg, const RunOptions& opt, const dynamics::DetectorParams& dp,
              RunArtifacts& art, nlohmann::json& summary) {
  const int n_max = cfg.n_max > 0 ? cfg.n_max : cfg.M + 3;
  const counting::MeasurementKernel kernel = counting::build_kernel(dp, n_max);
  Table table{{"technique", "M", "k", "n", "P"}, {}};
  for (counting::Technique t : cfg.techniques) {
    const counting::Povm povm = counting::build_povm(kernel, cfg.M, t);
    povm.validate();
    for (int k = 0; k <= cfg.M; ++k) {
      for (int n = 0; n < n_max; ++n) {
        table.rows.push_back({technique_name(t), static_cast<long long>(cfg.M),
                              static_cast<long long>(k), static_cast<long long>(n), povm.P(k, n)});
      }
    }
    if (n_max >= cfg.M + 1) summary["resolution"][technique_name(t)] = stats::resolution(povm);
  }
  art.files.push_back(write_table(opt.out_dir, "povm", table, opt.format));
  summary["n_max"] = n_max;
}

void run_resolution(const RunConfig& cfg, const RunOptions& opt,
                    const dynamics::DetectorParams& dp, RunArtifacts& art,
                    nlohmann::json& summary) {
  optimize::SweepGrid grid;
  grid.gamma1 = optimize::log_space(cfg.gamma1_min, cfg.gamma1_max, cfg.gamma1_points);
  grid.t_cpt = optimize::lin_space(cfg.t_cpt_min, cfg.t_cpt_max, cfg.t_cpt_points);
  grid.fixed = dp;
  grid.fixed.t_cpt = grid.t_cpt.front();
  grid.M_list = cfg.M_list;
  grid.gamma0_ratio = cfg.gamma0_ratio;

  optimize::KernelCache cache;
  Table surface{{"technique", "M", "gamma1_MHz", "t_cpt_ns", "R"}, {}};
  Table optimum{{"technique", "M", "gamma1_MHz", "t_cpt_ns", "R_max", "R_grid", "invalid_points"},
                {}};
  for (counting::Technique t : cfg.techniques) {
    for (const optimize::OptimumReport& rep : optimize::sweep_resolution(grid, t, &cache)) {
      for (std::size_t i = 0; i < grid.gamma1.size(); ++i) {
        for (std::size_t j = 0; j < grid.t_cpt.size(); ++j) {
          surface.rows.push_back({technique_name(t), static_cast<long long>(rep.M),
                                  grid.gamma1[i] / kTwoPi / 1e6, grid.t_cpt[j] * 1e9,
                                  rep.grid_values(static_cast<Eigen::Index>(i),
                                                  static_cast<Eigen::Index>(j))});
        }
      }
      optimum.rows.push_back({technique_name(t), static_cast<long long>(rep.M),
                              rep.gamma1_opt / kTwoPi / 1e6, rep.tcpt_opt * 1e9, rep.R_max,
                              rep.R_grid, static_cast<long long>(rep.invalid_points)});
    }
  }
  art.files.push_back(write_table(opt.out_dir, "resolution_surface", surface, opt.format));
  const std::string name = "resolution_optimum.json";
  write_json(opt.out_dir / name, table_to_json(optimum));
  art.files.push_back(name);
  summary["kernels_built"] = cache.size();
}

void run_stats(const RunConfig& cfg, const RunOptions& opt, const dynamics::DetectorParams& dp,
               RunArtifacts& art, nlohmann::json& summary) {
  const int support = cfg.n_max > 0 ? cfg.n_max : state_support(cfg.state);
  const stats::PhotonDistribution state = make_state(cfg.state, support);
  const counting::MeasurementKernel kernel = counting::build_kernel(dp, support + 1);
  const stats::ClickDistribution ideal = stats::ideal_statistics(state, cfg.M, cfg.renormalize_ideal);

  Table clicks{{"technique", "k", "p_click", "p_ideal"}, {}};
  Table overlap{{"technique", "bhattacharyya", "mean_clicks"}, {}};
  for (counting::Technique t : cfg.techniques) {
    const counting::Povm povm = counting::build_povm(kernel, cfg.M, t);
    povm.validate();
    const stats::ClickDistribution p = stats::photocount_distribution(state, povm);
    double mean = 0.0;
    for (int k = 0; k <= cfg.M; ++k) {
      clicks.rows.push_back({technique_name(t), static_cast<long long>(k), p.p(k), ideal.p(k)});
      mean += k * p.p(k);
    }
    overlap.rows.push_back({technique_name(t), stats::bhattacharyya(p, ideal), mean});
  }
  art.files.push_back(write_table(opt.out_dir, "stats", clicks, opt.format));
  art.files.push_back(write_table(opt.out_dir, "stats_summary", overlap, opt.format));
  summary["state_support"] = support;
  summary["state_mean"] = state.mean();
}

void run_nonclassicality(const RunConfig& cfg, const RunOptions& opt,
                         const dynamics::DetectorParams& dp, std::uint64_t seed,
                         RunArtifacts& art, nlohmann::json& summary) {
  int n_max = cfg.n_max;
  if (n_max == 0) {
    StateSpec widest;
    widest.kind = "squeezed";
    widest.r = cfg.r_max;
    n_max = std::max(40, state_support(widest) + 1);
  }
  const counting::MeasurementKernel kernel = counting::build_kernel(dp, n_max);

  struct Detector {
    std::string name;
    counting::Povm povm;
  };
  std::vector<Detector> detectors;
  for (counting::Technique t : cfg.techniques) {
    detectors.push_back({technique_name(t), counting::build_povm(kernel, cfg.M, t)});
  }
  if (cfg.compare_ideal) detectors.push_back({"ideal", counting::ideal_povm(cfg.M, n_max)});

  const nonclassicality::DeBudget budget{cfg.de_population, cfg.de_generations, seed};
  Table table{{"technique", "r", "violation", "lhs", "rhs", "mu_star", "lambda"}, {}};
  for (double r : optimize::lin_space(cfg.r_min, cfg.r_max, cfg.r_points)) {
    const stats::PhotonDistribution state = stats::squeezed_vacuum(r, n_max - 1);
    for (const Detector& d : detectors) {
      const stats::ClickDistribution clicks = stats::photocount_distribution(state, d.povm);
      const auto rep = nonclassicality::maximize_violation(clicks, d.povm, budget);
      table.rows.push_back({d.name, r, rep.violation, rep.lhs, rep.rhs, rep.mu_star,
                            join(rep.lam_opt)});
    }
  }
  art.files.push_back(write_table(opt.out_dir, "nonclassicality", table, opt.format));
  summary["n_max"] = n_max;
}

}  // namespace

int state_support(const StateSpec& state) {
  if (state.kind == "fock") return std::max(state.n, 1);
  for (int n = 1; n <= kMaxSupport; ++n) {
    try {
      make_state(state, n);
      return n;
    } catch (const TruncationError&) {
    }
  }
  throw ValidityError("state needs more than " + std::to_string(kMaxSupport) + " Fock levels");
}

RunArtifacts run(RunConfig cfg, const RunOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  if (options.techniques) cfg.techniques = *options.techniques;
  const std::uint64_t seed = options.seed.value_or(cfg.seed);
  std::filesystem::create_directories(options.out_dir);

  RunArtifacts art;
  nlohmann::json summary = nlohmann::json::object();
  std::optional<dynamics::DetectorParams> dp;
  if (cfg.mode != Mode::Circuit) {
    dp = resolve_detector(cfg);
    if (cfg.mode != Mode::Resolution) dp->validate();
  }

  switch (cfg.mode) {
    case Mode::Circuit: run_circuit(cfg, options, art, summary); break;
    case Mode::Povm: run_povm(cfg, options, *dp, art, summary); break;
    case Mode::Resolution: run_resolution(cfg, options, *dp, art, summary); break;
    case Mode::Stats: run_stats(cfg, options, *dp, art, summary); break;
    case Mode::Nonclassicality: run_nonclassicality(cfg, options, *dp, seed, art, summary); break;
  }

  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::vector<std::string> techniques;
  for (auto t : cfg.techniques) techniques.push_back(technique_name(t));
  nlohmann::json manifest = {
      {"tool", "jpmcount"},
      {"version", JPMCOUNT_VERSION},
      {"eigen_version", std::to_string(EIGEN_WORLD_VERSION) + "." +
                            std::to_string(EIGEN_MAJOR_VERSION) + "." +
                            std::to_string(EIGEN_MINOR_VERSION)},
      {"mode", to_string(cfg.mode)},
      {"config_path", options.config_path},
      {"config", cfg.echo},
      {"seed", seed},
      {"format", options.format == Format::Csv ? "csv" : "json"},
      {"techniques", techniques},
      {"outputs", art.files},
      {"summary", summary},
      {"wall_time_s", wall},
  };
  if (dp) manifest["detector"] = detector_json(*dp);
  write_json(options.out_dir / "manifest.json", manifest);
  art.files.push_back("manifest.json");
  return art;
}

}  // namespace jpmcount::cli
