#pragma once

// Key = value configuration with unit suffixes. Frequencies are read as
// cyclic values (f = omega / 2 pi) and stored as angular rates.

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "jpmcount/circuit.hpp"
#include "jpmcount/counting.hpp"
#include "jpmcount/dynamics.hpp"

namespace jpmcount::cli {

/// Bad configuration; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Mode { Circuit, Povm, Resolution, Stats, Nonclassicality };

Mode parse_mode(const std::string& name);
std::string to_string(Mode mode);

enum class DetectorSource { Direct, Circuit };

struct StateSpec {
  std::string kind = "fock";  // fock | coherent | squeezed
  int n = 0;
  double mu = 0.0;
  double r = 0.0;
};

struct RunConfig {
  Mode mode = Mode::Stats;
  DetectorSource source = DetectorSource::Direct;
  dynamics::DetectorParams detector;
  std::optional<double> gamma0_ratio;
  std::optional<circuit::CircuitParams> circuit;

  std::vector<counting::Technique> techniques;
  int M = 5;
  std::vector<int> M_list;
  /// Fock support of kernels and POVMs; 0 selects a default per mode.
  int n_max = 0;

  StateSpec state;
  bool renormalize_ideal = false;

  double phi_b_min = 0.0, phi_b_max = 0.0;
  int phi_b_points = 0;

  double gamma1_min = 0.0, gamma1_max = 0.0;
  int gamma1_points = 1;
  double t_cpt_min = 0.0, t_cpt_max = 0.0;
  int t_cpt_points = 1;

  double r_min = 0.0, r_max = 0.0;
  int r_points = 1;
  int de_population = 40;
  int de_generations = 300;
  bool compare_ideal = true;

  std::uint64_t seed = 0;

  /// Key -> raw value text, as read, for the manifest.
  std::map<std::string, std::string> echo;
};

/// Value of a quantity string such as "30 MHz" in SI units; cyclic
/// frequencies are converted to angular ones. Throws ConfigError naming key.
double parse_quantity(const std::string& key, const std::string& text);

/// Parses configuration text. mode_override (the CLI subcommand) wins over a
/// mode key; with neither, a ConfigError is raised. Defaults follow the
/// reference operating point: g/2pi = 30 MHz, Gamma10/2pi = 1 MHz,
/// Gamma11 = 5 Gamma10, kappa/2pi = 1 kHz, Delta = 0, t_rr = 300 ns.
RunConfig parse_config_text(const std::string& text, std::optional<Mode> mode_override = {});
RunConfig parse_config(const std::string& path, std::optional<Mode> mode_override = {});

/// Detector parameters after resolving the circuit source.
dynamics::DetectorParams resolve_detector(const RunConfig& cfg);

}  // namespace jpmcount::cli
