#include <sys/wait.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>

#include <gtest/gtest.h>
#include <json.hpp>

#include "commands.hpp"
#include "straintomo/field_io.hpp"
#include "straintomo/sinogram.hpp"
#include "test_support.hpp"

using namespace straintomo;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

int run_tool(const std::string& args, const std::string& env = "") {
  const std::string cmd =
      env + " " + std::string(STRAIN_TOMO_BIN) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

json read_json(const fs::path& p) {
  std::ifstream is(p);
  return json::parse(is);
}

cli::RunConfig small_config(const fs::path& dir) {
  cli::RunConfig c;
  c.out_dir = dir;
  c.nx = 64;
  c.plots = false;
  return c;
}

}  // namespace

TEST(CliHelpers, LogLogSlopeOfExactPowerLaw) {
  std::vector<double> x{25, 50, 100, 200, 400}, y;
  for (double v : x) y.push_back(3.0 * std::pow(v, -0.5));
  EXPECT_NEAR(cli::loglog_slope(x, y), -0.5, 1e-12);
  EXPECT_THROW(cli::loglog_slope({1.0}, {1.0}), ValidationError);
}

TEST(CliHelpers, ThreadCapFromEnvironment) {
  ::setenv("STRAIN_TOMO_THREADS", "1", 1);
  EXPECT_EQ(cli::configure_threads(), 1);
  ::setenv("STRAIN_TOMO_THREADS", "zero", 1);
  EXPECT_THROW(cli::configure_threads(), ValidationError);
  ::setenv("STRAIN_TOMO_THREADS", "0", 1);
  EXPECT_THROW(cli::configure_threads(), ValidationError);
  ::unsetenv("STRAIN_TOMO_THREADS");
}

TEST(CliPipeline, PhantomProjectReconstructTraceIncompat) {
  testsupport::TempDir tmp;
  cli::RunConfig c = small_config(tmp.path());

  c.subcommand = "phantom";
  const json ph = cli::run(c);
  EXPECT_TRUE(fs::exists(tmp / "airy.stf"));
  EXPECT_TRUE(fs::exists(tmp / "airy.csv"));
  EXPECT_TRUE(fs::exists(tmp / "airy_mask.csv"));
  const json saved = read_json(tmp / "airy_manifest.json");
  EXPECT_EQ(saved["tool"], "strain-tomo");
  EXPECT_EQ(saved["outputs"], ph["outputs"]);

  c.subcommand = "project";
  c.field = tmp / "airy.stf";
  c.n_angles = 120;
  cli::run(c);
  EXPECT_TRUE(fs::exists(tmp / "sinogram.sgm"));
  EXPECT_TRUE(fs::exists(tmp / "sinogram.csv"));
  EXPECT_EQ(read_sinogram(tmp / "sinogram.sgm").n_angles(), 120);

  c.subcommand = "reconstruct";
  c.sinogram = tmp / "sinogram.sgm";
  c.reference = tmp / "airy.stf";
  c.route = "both";
  c.target_h = 0.06;
  const json rec = cli::run(c);
  const json& reports = rec["metrics"]["reports"];
  EXPECT_LT(reports["hooke"]["rel_rms_error"].get<double>(), 0.05);
  EXPECT_LT(reports["fem"]["rel_rms_error"].get<double>(), 0.2);
  EXPECT_FALSE(rec["metrics"]["traction_violation_suspected"].get<bool>());
  EXPECT_TRUE(fs::exists(tmp / "recon_hooke.stf"));
  EXPECT_TRUE(fs::exists(tmp / "recon_fem.csv"));
  EXPECT_TRUE(fs::exists(tmp / "recon_report.json"));
  EXPECT_TRUE(fs::exists(tmp / "recon_manifest.json"));

  c.subcommand = "trace";
  const json tr = cli::run(c);
  EXPECT_LT(tr["metrics"]["relative_rms_vs_stress_trace"].get<double>(), 0.05);
  EXPECT_TRUE(fs::exists(tmp / "trace_manifest.json"));

  c.subcommand = "incompat";
  c.field = tmp / "recon_hooke.stf";
  const json inc = cli::run(c);
  EXPECT_LT(inc["metrics"]["relative_rms_difference"].get<double>(), 0.3);
  EXPECT_TRUE(fs::exists(tmp / "incompat.csv"));
  EXPECT_TRUE(fs::exists(tmp / "incompat_manifest.json"));
}

TEST(CliPipeline, HydrostaticAxisymIsFlagged) {
  testsupport::TempDir tmp;
  cli::RunConfig c = small_config(tmp.path());
  c.subcommand = "phantom";
  c.phantom = "axisym";
  c.hydrostatic = 0.2;
  const json ph = cli::run(c);
  EXPECT_NEAR(ph["metrics"]["radial_stress_at_boundary"].get<double>(), 0.0, 1e-12);

  c.subcommand = "project";
  c.field = tmp / "axisym.stf";
  c.n_angles = 90;
  cli::run(c);

  c.subcommand = "reconstruct";
  c.sinogram = tmp / "sinogram.sgm";
  c.reference = tmp / "axisym.stf";
  const json rec = cli::run(c);
  EXPECT_TRUE(rec["metrics"]["traction_violation_suspected"].get<bool>());
}

TEST(CliBinary, ExitCodes) {
  testsupport::TempDir tmp;
  const std::string out = " -o " + tmp.path().string();
  EXPECT_EQ(run_tool("--help"), 0);
  EXPECT_EQ(run_tool(""), 1);
  EXPECT_EQ(run_tool("bogus"), 1);
  EXPECT_EQ(run_tool("phantom airy --alpha 0 --nx 32" + out), 1);
  EXPECT_EQ(run_tool("phantom airy --nu 0.7 --nx 32" + out), 1);
  EXPECT_EQ(run_tool("project --field missing.stf" + out), 1);
  EXPECT_EQ(run_tool("phantom airy --nx 32 --no-plots" + out, "STRAIN_TOMO_THREADS=x"), 1);
  EXPECT_EQ(run_tool("phantom airy --nx 32 --no-plots" + out, "STRAIN_TOMO_THREADS=1"), 0);
  EXPECT_TRUE(fs::exists(tmp / "airy_manifest.json"));
  EXPECT_EQ(read_json(tmp / "airy_manifest.json")["threads"], 1);

  // Finite data that overflows in the ramp filter is a numerical failure.
  Sinogram big(uniform_angles(8, std::numbers::pi), {65, 0.05}, SinogramKind::lrt_integral);
  std::fill(big.data.begin(), big.data.end(), 1e307);
  write_sinogram(big, tmp / "big.sgm");
  EXPECT_EQ(run_tool("reconstruct --sinogram " + (tmp / "big.sgm").string() + " --nx 32" + out), 2);
}

TEST(CliBinary, PngAndCsvOutputs) {
  testsupport::TempDir tmp;
  const std::string out = " -o " + tmp.path().string();
  ASSERT_EQ(run_tool("phantom axisym --nx 48" + out), 0);
  EXPECT_TRUE(fs::exists(tmp / "axisym.png"));
  EXPECT_TRUE(fs::exists(tmp / "axisym.csv"));
  ASSERT_EQ(run_tool("project --field " + (tmp / "axisym.stf").string() +
                     " --angles golden_50 --noise 0.01 --seed 3" + out),
            0);
  EXPECT_TRUE(fs::exists(tmp / "sinogram.png"));
  const json m = read_json(tmp / "sinogram_manifest.json");
  EXPECT_EQ(m["config"]["angle_scheme"], "golden_50");
}

TEST(CliBinary, NoiseSweepSmall) {
  testsupport::TempDir tmp;
  ASSERT_EQ(run_tool("noise-sweep --nx 40 --ladder 20,40,80 -o " + tmp.path().string()), 0);
  const json m = read_json(tmp / "sweep_manifest.json");
  EXPECT_EQ(m["metrics"]["ladder"].size(), 3u);
  EXPECT_TRUE(fs::exists(tmp / "sweep.csv"));
  EXPECT_TRUE(fs::exists(tmp / "sweep.png"));
  std::ifstream is(tmp / "sweep.csv");
  std::string header;
  std::getline(is, header);
  EXPECT_EQ(header, "n_angles,error_noisy,error_noiseless,floor,used_in_fit");
}
