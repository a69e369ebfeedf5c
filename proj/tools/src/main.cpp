#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"
#include "config.hpp"
#include "jpmcount/error.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

}  // namespace

int main(int argc, char** argv) {
  using namespace jpmcount::cli;

  CLI::App app{"Photon counting with a repeatedly fired Josephson photomultiplier"};
  app.set_version_flag("--version", std::string(JPMCOUNT_VERSION));
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  std::string format = "csv";
  std::string technique;
  std::uint64_t seed = 0;

  app.add_option("--config", config_path, "Configuration file (key = value with units)")
      ->required()
      ->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "Output directory")->capture_default_str();
  app.add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  auto* seed_opt = app.add_option("--seed", seed, "Seed for the differential evolution");
  app.add_option("--technique", technique, "Counting technique")
      ->check(CLI::IsMember({"binomial", "geometric", "both"}));

  for (const char* name : {"circuit", "povm", "resolution", "stats", "nonclassicality"}) {
    app.add_subcommand(name)->fallthrough();
  }
  app.get_subcommand("circuit")->description("Flux sweep of the effective detector parameters");
  app.get_subcommand("povm")->description("POVM matrix P(k|n)");
  app.get_subcommand("resolution")->description("Resolution surface over (gamma1, t_cpt) and its optimum");
  app.get_subcommand("stats")->description("Click statistics of an input state and overlap with ideal counting");
  app.get_subcommand("nonclassicality")->description("Maximal witness violation for squeezed vacuum inputs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    const Mode mode = parse_mode(app.get_subcommands().front()->get_name());
    RunOptions options;
    options.out_dir = out_dir;
    options.format = format == "json" ? Format::Json : Format::Csv;
    options.config_path = config_path;
    if (seed_opt->count() > 0) options.seed = seed;
    if (!technique.empty()) {
      options.techniques = technique == "both"
                               ? std::vector{jpmcount::counting::Technique::Binomial,
                                             jpmcount::counting::Technique::Geometric}
                               : std::vector{jpmcount::counting::parse_technique(technique)};
    }
    const RunConfig cfg = parse_config(config_path, mode);
    const RunArtifacts art = run(cfg, options);
    for (const auto& file : art.files) std::cout << (options.out_dir / file).string() << '\n';
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const jpmcount::Error& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
