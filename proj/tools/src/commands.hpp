#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"
#include "output.hpp"

namespace jpmcount::cli {

struct RunOptions {
  std::filesystem::path out_dir = ".";
  Format format = Format::Csv;
  std::optional<std::uint64_t> seed;
  std::optional<std::vector<counting::Technique>> techniques;
  /// Raw config text for the manifest.
  std::string config_path;
};

/// Output files written by a run, relative to the output directory.
struct RunArtifacts {
  std::vector<std::string> files;
};

/// Executes cfg.mode and writes its data files plus manifest.json.
RunArtifacts run(RunConfig cfg, const RunOptions& options);

/// Fock support needed for a state to drop less than the state cutoff.
int state_support(const StateSpec& state);

}  // namespace jpmcount::cli
