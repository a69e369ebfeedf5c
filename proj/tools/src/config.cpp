#include "config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "jpmcount/constants.hpp"
#include "jpmcount/error.hpp"

namespace jpmcount::cli {

namespace {

enum class Dim { Frequency, Time, Capacitance, Inductance, Current, Angle, Number };

const std::map<std::string, Dim>& quantity_keys() {
  static const std::map<std::string, Dim> keys = {
      {"g", Dim::Frequency},          {"delta_p", Dim::Frequency},
      {"gamma0", Dim::Frequency},     {"gamma1", Dim::Frequency},
      {"Gamma10", Dim::Frequency},    {"Gamma11", Dim::Frequency},
      {"kappa", Dim::Frequency},      {"gamma1_min", Dim::Frequency},
      {"gamma1_max", Dim::Frequency}, {"t_cpt", Dim::Time},
      {"t_rr", Dim::Time},            {"t_cpt_min", Dim::Time},
      {"t_cpt_max", Dim::Time},       {"C_r", Dim::Capacitance},
      {"C_p", Dim::Capacitance},      {"C_c", Dim::Capacitance},
      {"L_r", Dim::Inductance},       {"L_G", Dim::Inductance},
      {"I_0", Dim::Current},          {"phi_b", Dim::Angle},
      {"phi_b_min", Dim::Angle},      {"phi_b_max", Dim::Angle},
      {"beta", Dim::Number},          {"gamma0_ratio", Dim::Number},
      {"state_mu", Dim::Number},      {"state_r", Dim::Number},
      {"r_min", Dim::Number},         {"r_max", Dim::Number},
  };
  return keys;
}

const std::set<std::string>& integer_keys() {
  static const std::set<std::string> keys = {"M",          "n_max",         "state_n",
                                             "phi_b_points", "gamma1_points", "t_cpt_points",
                                             "r_points",   "de_population", "de_generations",
                                             "seed"};
  return keys;
}

const std::set<std::string>& word_keys() {
  static const std::set<std::string> keys = {"mode",  "detector_source",   "technique",
                                             "state", "renormalize_ideal", "compare_ideal",
                                             "M_list"};
  return keys;
}

const std::map<std::string, double>& units_for(Dim dim) {
  static const std::map<std::string, double> freq = {
      {"Hz", 1.0}, {"kHz", 1e3}, {"MHz", 1e6}, {"GHz", 1e9}};
  static const std::map<std::string, double> time = {
      {"s", 1.0}, {"ms", 1e-3}, {"us", 1e-6}, {"ns", 1e-9}, {"ps", 1e-12}};
  static const std::map<std::string, double> cap = {
      {"F", 1.0}, {"nF", 1e-9}, {"pF", 1e-12}, {"fF", 1e-15}};
  static const std::map<std::string, double> ind = {
      {"H", 1.0}, {"uH", 1e-6}, {"nH", 1e-9}, {"pH", 1e-12}};
  static const std::map<std::string, double> cur = {
      {"A", 1.0}, {"mA", 1e-3}, {"uA", 1e-6}, {"nA", 1e-9}};
  static const std::map<std::string, double> angle = {{"", 1.0}, {"rad", 1.0}};
  static const std::map<std::string, double> number = {{"", 1.0}};
  switch (dim) {
    case Dim::Frequency: return freq;
    case Dim::Time: return time;
    case Dim::Capacitance: return cap;
    case Dim::Inductance: return ind;
    case Dim::Current: return cur;
    case Dim::Angle: return angle;
    case Dim::Number: return number;
  }
  return number;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& text) {
  double value = 0.0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
    throw ConfigError("field '" + key + "': '" + text + "' is not a number");
  }
  return value;
}

long long parse_integer(const std::string& key, const std::string& text) {
  long long value = 0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError("field '" + key + "': '" + text + "' is not an integer");
  }
  return value;
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ConfigError("field '" + key + "': expected true or false, got '" + text + "'");
}

std::vector<counting::Technique> parse_techniques(const std::string& text) {
  if (text == "both") return {counting::Technique::Binomial, counting::Technique::Geometric};
  try {
    return {counting::parse_technique(text)};
  } catch (const InvalidArgument&) {
    throw ConfigError("field 'technique': expected binomial, geometric or both, got '" + text + "'");
  }
}

}  // namespace

Mode parse_mode(const std::string& name) {
  if (name == "circuit") return Mode::Circuit;
  if (name == "povm") return Mode::Povm;
  if (name == "resolution") return Mode::Resolution;
  if (name == "stats") return Mode::Stats;
  if (name == "nonclassicality") return Mode::Nonclassicality;
  throw ConfigError("field 'mode': unknown mode '" + name + "'");
}

std::string to_string(Mode mode) {
  switch (mode) {
    case Mode::Circuit: return "circuit";
    case Mode::Povm: return "povm";
    case Mode::Resolution: return "resolution";
    case Mode::Stats: return "stats";
    case Mode::Nonclassicality: return "nonclassicality";
  }
  return "";
}

double parse_quantity(const std::string& key, const std::string& text) {
  const auto it = quantity_keys().find(key);
  if (it == quantity_keys().end()) throw ConfigError("field '" + key + "' is not a quantity");
  const std::string value = trim(text);
  const auto split = value.find_first_of(" \t");
  const std::string number = split == std::string::npos ? value : value.substr(0, split);
  const std::string unit = split == std::string::npos ? "" : trim(value.substr(split));

  const auto& units = units_for(it->second);
  const auto u = units.find(unit);
  if (u == units.end()) {
    std::string allowed;
    for (const auto& [name, factor] : units) {
      if (!name.empty()) allowed += (allowed.empty() ? "" : ", ") + name;
    }
    throw ConfigError("field '" + key + "': unit '" + unit + "' not recognised" +
                      (allowed.empty() ? " (dimensionless field)" : " (expected " + allowed + ")"));
  }
  double si = parse_double(key, number) * u->second;
  if (it->second == Dim::Frequency) si *= constants::kTwoPi;
  return si;
}

RunConfig parse_config_text(const std::string& text, std::optional<Mode> mode_override) {
  std::map<std::string, std::string> raw;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = "line " + std::to_string(line_no) + ": ";
    if (eq == std::string::npos) throw ConfigError(where + "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(where + "missing key");
    if (!quantity_keys().count(key) && !integer_keys().count(key) && !word_keys().count(key)) {
      throw ConfigError(where + "unknown field '" + key + "'");
    }
    if (value.empty()) throw ConfigError(where + "field '" + key + "' has no value");
    if (raw.count(key)) throw ConfigError(where + "field '" + key + "' given twice");
    raw[key] = value;
  }

  RunConfig cfg;
  cfg.echo = raw;
  auto has = [&](const char* key) { return raw.count(key) > 0; };
  auto quantity = [&](const char* key, double fallback) {
    return has(key) ? parse_quantity(key, raw.at(key)) : fallback;
  };
  auto integer = [&](const char* key, long long fallback, long long lo) {
    if (!has(key)) return fallback;
    const long long v = parse_integer(key, raw.at(key));
    if (v < lo) throw ConfigError("field '" + std::string(key) + "' must be at least " + std::to_string(lo));
    return v;
  };

  if (mode_override) {
    if (has("mode") && parse_mode(raw.at("mode")) != *mode_override) {
      throw ConfigError("field 'mode': '" + raw.at("mode") + "' conflicts with the subcommand '" +
                        to_string(*mode_override) + "'");
    }
    cfg.mode = *mode_override;
  } else if (has("mode")) {
    cfg.mode = parse_mode(raw.at("mode"));
  } else {
    throw ConfigError("field 'mode' is required");
  }

  const double two_pi = constants::kTwoPi;
  dynamics::DetectorParams& dp = cfg.detector;
  dp.g = quantity("g", two_pi * 30e6);
  dp.delta_p = quantity("delta_p", 0.0);
  dp.Gamma10 = quantity("Gamma10", two_pi * 1e6);
  dp.Gamma11 = quantity("Gamma11", 5.0 * dp.Gamma10);
  dp.kappa = quantity("kappa", two_pi * 1e3);
  dp.beta = quantity("beta", 1.0);
  dp.t_rr = quantity("t_rr", 300e-9);
  dp.gamma1 = quantity("gamma1", 0.0);
  dp.t_cpt = quantity("t_cpt", 0.0);
  if (has("gamma0") && has("gamma0_ratio")) {
    throw ConfigError("fields 'gamma0' and 'gamma0_ratio' are mutually exclusive");
  }
  if (has("gamma0")) {
    dp.gamma0 = quantity("gamma0", 0.0);
  } else {
    cfg.gamma0_ratio = quantity("gamma0_ratio", 1e-3);
    if (*cfg.gamma0_ratio < 0.0) throw ConfigError("field 'gamma0_ratio' must be non-negative");
    dp.gamma0 = *cfg.gamma0_ratio * dp.gamma1;
  }
  if (!(dp.beta >= 0.0 && dp.beta <= 1.0)) throw ConfigError("field 'beta' must lie in [0, 1]");

  const std::string source = has("detector_source") ? raw.at("detector_source") : "direct";
  if (source == "direct") {
    cfg.source = DetectorSource::Direct;
  } else if (source == "circuit") {
    cfg.source = DetectorSource::Circuit;
    for (const char* key : {"g", "delta_p", "gamma0", "gamma1", "gamma0_ratio"}) {
      if (has(key)) {
        throw ConfigError("field '" + std::string(key) +
                          "' cannot be set when detector_source = circuit");
      }
    }
    cfg.gamma0_ratio.reset();
  } else {
    throw ConfigError("field 'detector_source': expected direct or circuit, got '" + source + "'");
  }

  const bool wants_circuit = cfg.mode == Mode::Circuit || cfg.source == DetectorSource::Circuit;
  const bool any_circuit_key = has("C_p") || has("L_G") || has("I_0") || has("C_c") ||
                               has("C_r") || has("L_r") || has("phi_b");
  if (wants_circuit) {
    circuit::CircuitParams cp;
    for (const char* key : {"C_p", "L_G", "I_0"}) {
      if (!has(key)) throw ConfigError("field '" + std::string(key) + "' is required for the circuit");
    }
    cp.C_p = quantity("C_p", 0.0);
    cp.L_G = quantity("L_G", 0.0);
    cp.I_0 = quantity("I_0", 0.0);
    cp.C_r = quantity("C_r", 1e-12);
    cp.L_r = quantity("L_r", 1e-9);
    cp.C_c = quantity("C_c", 0.0);
    cp.phi_b = quantity("phi_b", 0.0);
    if (cfg.source == DetectorSource::Circuit && !has("phi_b")) {
      throw ConfigError("field 'phi_b' is required when detector_source = circuit");
    }
    try {
      cp.validate();
    } catch (const InvalidArgument& e) {
      throw ConfigError(e.what());
    }
    cfg.circuit = cp;
  } else if (any_circuit_key) {
    throw ConfigError("circuit fields require mode = circuit or detector_source = circuit");
  }

  cfg.techniques = parse_techniques(has("technique") ? raw.at("technique") : "both");
  cfg.M = static_cast<int>(integer("M", 5, 1));
  if (has("M_list")) {
    std::stringstream list(raw.at("M_list"));
    std::string item;
    while (std::getline(list, item, ',')) {
      const long long v = parse_integer("M_list", trim(item));
      if (v < 1) throw ConfigError("field 'M_list': entries must be at least 1");
      cfg.M_list.push_back(static_cast<int>(v));
    }
  } else {
    cfg.M_list = {cfg.M};
  }
  cfg.n_max = static_cast<int>(integer("n_max", 0, 1));

  cfg.state.kind = has("state") ? raw.at("state") : "fock";
  if (cfg.state.kind != "fock" && cfg.state.kind != "coherent" && cfg.state.kind != "squeezed") {
    throw ConfigError("field 'state': expected fock, coherent or squeezed, got '" + cfg.state.kind + "'");
  }
  cfg.state.n = static_cast<int>(integer("state_n", 0, 0));
  cfg.state.mu = quantity("state_mu", 0.0);
  cfg.state.r = quantity("state_r", 0.0);
  if (cfg.state.mu < 0.0) throw ConfigError("field 'state_mu' must be non-negative");
  cfg.renormalize_ideal = has("renormalize_ideal") && parse_bool("renormalize_ideal", raw.at("renormalize_ideal"));

  cfg.phi_b_min = quantity("phi_b_min", 2.5);
  cfg.phi_b_max = quantity("phi_b_max", 3.8);
  cfg.phi_b_points = static_cast<int>(integer("phi_b_points", 131, 1));

  cfg.gamma1_min = quantity("gamma1_min", two_pi * 30e6);
  cfg.gamma1_max = quantity("gamma1_max", two_pi * 300e6);
  cfg.gamma1_points = static_cast<int>(integer("gamma1_points", 24, 1));
  cfg.t_cpt_min = quantity("t_cpt_min", 5e-9);
  cfg.t_cpt_max = quantity("t_cpt_max", 50e-9);
  cfg.t_cpt_points = static_cast<int>(integer("t_cpt_points", 24, 1));
  if (cfg.gamma1_min <= 0.0 || cfg.gamma1_max < cfg.gamma1_min) {
    throw ConfigError("fields 'gamma1_min'/'gamma1_max' must form a positive range");
  }
  if (cfg.t_cpt_min <= 0.0 || cfg.t_cpt_max < cfg.t_cpt_min) {
    throw ConfigError("fields 't_cpt_min'/'t_cpt_max' must form a positive range");
  }

  cfg.r_min = quantity("r_min", 0.1);
  cfg.r_max = quantity("r_max", 1.0);
  cfg.r_points = static_cast<int>(integer("r_points", 10, 1));
  if (cfg.r_max < cfg.r_min) throw ConfigError("fields 'r_min'/'r_max' must be ordered");
  cfg.de_population = static_cast<int>(integer("de_population", 40, 4));
  cfg.de_generations = static_cast<int>(integer("de_generations", 300, 1));
  cfg.compare_ideal = !has("compare_ideal") || parse_bool("compare_ideal", raw.at("compare_ideal"));
  cfg.seed = static_cast<std::uint64_t>(integer("seed", 0, 0));

  const bool needs_point = cfg.mode == Mode::Povm || cfg.mode == Mode::Stats ||
                           cfg.mode == Mode::Nonclassicality;
  if (needs_point) {
    if (!has("t_cpt")) throw ConfigError("field 't_cpt' is required for mode " + to_string(cfg.mode));
    if (cfg.source == DetectorSource::Direct && !has("gamma1")) {
      throw ConfigError("field 'gamma1' is required for mode " + to_string(cfg.mode));
    }
  }
  if (cfg.source == DetectorSource::Direct) {
    // The sweep and circuit modes leave t_cpt unset.
    dynamics::DetectorParams probe = cfg.detector;
    if (probe.t_cpt == 0.0) probe.t_cpt = 1.0;
    try {
      probe.validate();
    } catch (const InvalidArgument& e) {
      throw ConfigError(e.what());
    }
  }
  return cfg;
}

RunConfig parse_config(const std::string& path, std::optional<Mode> mode_override) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str(), mode_override);
}

dynamics::DetectorParams resolve_detector(const RunConfig& cfg) {
  dynamics::DetectorParams dp = cfg.detector;
  if (cfg.source == DetectorSource::Circuit) {
    const circuit::EffectiveParams ep = circuit::effective_params(*cfg.circuit);
    dp.g = ep.g;
    dp.delta_p = ep.omega_p - ep.omega_r;
    dp.gamma0 = ep.gamma0;
    dp.gamma1 = ep.gamma1;
  }
  return dp;
}

}  // namespace jpmcount::cli
