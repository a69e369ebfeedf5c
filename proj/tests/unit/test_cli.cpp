#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "commands.hpp"
#include "config.hpp"
#include "jpmcount/constants.hpp"

namespace {

namespace fs = std::filesystem;
using namespace jpmcount;
using namespace jpmcount::cli;
using constants::kTwoPi;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("jpmcount_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int run_cli(const std::string& args) {
  const int status = std::system((std::string(JPMCOUNT_CLI_PATH) + " " + args + " >/dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(Config, Quantities) {
  EXPECT_NEAR(parse_quantity("g", "30 MHz"), kTwoPi * 30e6, 1e-3);
  EXPECT_DOUBLE_EQ(parse_quantity("t_cpt", "17.4 ns"), 17.4e-9);
  EXPECT_DOUBLE_EQ(parse_quantity("C_p", "1 pF"), 1e-12);
  EXPECT_DOUBLE_EQ(parse_quantity("I_0", "1.2 uA"), 1.2e-6);
  EXPECT_DOUBLE_EQ(parse_quantity("L_G", "0.5 nH"), 0.5e-9);
  EXPECT_THROW(parse_quantity("g", "30 MHZz"), ConfigError);
  EXPECT_THROW(parse_quantity("g", "fast"), ConfigError);
}

TEST(Config, EmptyFileNeedsMode) {
  try {
    parse_config_text("");
    FAIL() << "empty config accepted";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("mode"), std::string::npos);
  }
  const RunConfig c = parse_config_text("", Mode::Resolution);
  EXPECT_EQ(c.mode, Mode::Resolution);
  EXPECT_EQ(c.gamma1_points, 24);
}

TEST(Config, DefaultsFilled) {
  const RunConfig c = parse_config_text("mode = povm\ngamma1 = 162.3 MHz\nt_cpt = 17.4 ns\n");
  EXPECT_NEAR(c.detector.g, kTwoPi * 30e6, 1e-3);
  EXPECT_NEAR(c.detector.Gamma10, kTwoPi * 1e6, 1e-6);
  EXPECT_DOUBLE_EQ(c.detector.Gamma11, 5 * c.detector.Gamma10);
  EXPECT_NEAR(c.detector.kappa, kTwoPi * 1e3, 1e-9);
  EXPECT_EQ(c.detector.delta_p, 0.0);
  EXPECT_DOUBLE_EQ(c.detector.t_rr, 300e-9);
}

TEST(Config, Rejections) {
  EXPECT_THROW(parse_config_text("mode = povm\nbogus = 1\n"), ConfigError);
  EXPECT_THROW(parse_config_text("mode = povm\ng = 1 MHz\ng = 2 MHz\n"), ConfigError);
  EXPECT_THROW(parse_config_text("mode = povm\nt_cpt = 1 ns\n"), ConfigError);
  EXPECT_THROW(parse_config_text("mode = warp\n"), ConfigError);
  EXPECT_THROW(parse_config_text("mode = povm\ngamma1 = 1 MHz\nt_cpt = 1 ns\nkappa = -3 kHz\n"),
               ConfigError);
}

TEST(Config, CircuitSourceDerivesDetector) {
  const RunConfig c = parse_config_text(
      "mode = povm\ndetector_source = circuit\nt_cpt = 17.4 ns\nC_p = 1 pF\nL_G = 0.5 nH\n"
      "I_0 = 1.2 uA\nC_c = 0.01 pF\nphi_b = 2.72 rad\n");
  const auto dp = resolve_detector(c);
  EXPECT_GT(dp.g, 0.0);
  EXPECT_GT(dp.gamma1, dp.gamma0);
  EXPECT_THROW(parse_config_text("mode = povm\ndetector_source = circuit\ng = 1 MHz\nt_cpt = 1 ns\n"
                                 "C_p = 1 pF\nL_G = 0.5 nH\nI_0 = 1.2 uA\nphi_b = 2.7 rad\n"),
               ConfigError);
}

TEST(Cli, ExitCodes) {
  const fs::path dir = scratch("exit");
  std::ofstream(dir / "bad.cfg") << "mode = stats\ng = 30 MHZz\n";
  EXPECT_EQ(run_cli("stats --config " + (dir / "bad.cfg").string() + " --out " + dir.string()), 2);
  EXPECT_EQ(run_cli("stats --config " + (dir / "missing.cfg").string()), 2);
  std::ofstream(dir / "leak.cfg") << "mode = stats\ngamma1 = 162.3 MHz\nt_cpt = 17.4 ns\n"
                                     "state = coherent\nstate_mu = 3\nn_max = 6\n";
  EXPECT_EQ(run_cli("stats --config " + (dir / "leak.cfg").string() + " --out " + dir.string()), 3);
}

TEST(Cli, DeterministicOutputsAndManifest) {
  const fs::path a = scratch("det_a"), b = scratch("det_b");
  const std::string cfg = "mode = stats\ngamma1 = 162.3 MHz\nt_cpt = 17.4 ns\nkappa = 10 kHz\n"
                          "state = squeezed\nstate_r = 0.5\nM = 5\n";
  std::ofstream(a / "run.cfg") << cfg;
  for (const fs::path& d : {a, b}) {
    ASSERT_EQ(run_cli("stats --config " + (a / "run.cfg").string() + " --out " + d.string() +
                      " --seed 7 --technique both"),
              0);
  }
  for (const auto& entry : fs::directory_iterator(a)) {
    if (entry.path().extension() != ".csv") continue;
    EXPECT_EQ(slurp(entry.path()), slurp(b / entry.path().filename())) << entry.path();
  }
  const std::string manifest = slurp(a / "manifest.json");
  for (const char* key : {"\"version\"", "\"seed\"", "\"wall_time_s\"", "\"config\""})
    EXPECT_NE(manifest.find(key), std::string::npos) << key;
}

TEST(Cli, JsonFormat) {
  const fs::path d = scratch("json");
  std::ofstream(d / "run.cfg") << "mode = povm\ngamma1 = 162.3 MHz\nt_cpt = 17.4 ns\nM = 3\n";
  ASSERT_EQ(run_cli("povm --config " + (d / "run.cfg").string() + " --out " + d.string() +
                    " --format json --technique geometric"),
            0);
  EXPECT_TRUE(fs::exists(d / "povm.json"));
}

}  // namespace
