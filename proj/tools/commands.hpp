// Subcommands of the strain-tomo command-line tool. Each command writes its
// outputs into `out_dir` and returns the JSON manifest it also saves there.
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "straintomo/material.hpp"

namespace straintomo::cli {

namespace fs = std::filesystem;

struct RunConfig {
  std::string subcommand;
  std::filesystem::path out_dir = ".";
  std::string name;  // output stem; empty picks a per-command default

  // phantom
  std::string phantom = "airy";  // airy | axisym | file
  double alpha = 15.0;
  double hydrostatic = 0.0;
  int nx = 400;
  double spacing = 0.0;  // 0 -> 2.4 / nx (grid spans about [-1.2, 1.2])

  ElasticConstants constants{1.0, 0.34, PlaneMode::plane_stress};

  // inputs
  fs::path input;      // external field for `phantom file`
  fs::path field;      // tensor field (project, incompat)
  fs::path sinogram;   // SGM1 or CSV (reconstruct, trace)
  fs::path reference;  // ground-truth strain field for metrics
  fs::path mask;       // polygon CSV
  fs::path like;       // field whose grid defines the reconstruction grid
  double support_tol = 1e-9;

  // angles and noise
  std::string angle_scheme = "uniform_360";  // uniform_360 | golden_50 | explicit_list
  int n_angles = 200;
  fs::path angles_file;
  double golden_start = 0.0;
  double noise = 0.0;
  std::uint64_t seed = 1;

  // reconstruction
  std::string input_kind = "lrt";  // lrt | average
  std::string route = "hooke";     // hooke | fem | both
  std::string window = "ram-lak";  // ram-lak | cosine
  double cutoff = 0.0;             // 0 -> 1.0 noiseless, 0.7 noisy
  int pad_factor = 2;
  double target_h = 0.0;
  double traction_threshold = 0.05;
  bool write_mesh = false;

  // noise sweep
  std::vector<int> ladder{25, 50, 100, 200, 400, 800};
  bool full_floor = false;

  bool plots = true;

  void validate() const;
};

nlohmann::json cmd_phantom(const RunConfig& cfg);
nlohmann::json cmd_project(const RunConfig& cfg);
nlohmann::json cmd_reconstruct(const RunConfig& cfg);
nlohmann::json cmd_incompat(const RunConfig& cfg);
nlohmann::json cmd_trace(const RunConfig& cfg);
nlohmann::json cmd_noise_sweep(const RunConfig& cfg);

/// Dispatches on cfg.subcommand.
nlohmann::json run(const RunConfig& cfg);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Applies STRAIN_TOMO_THREADS (when set) as the OpenMP thread cap and
/// returns the resulting thread count.
int configure_threads();

}  // namespace straintomo::cli
