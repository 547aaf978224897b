// strain-tomo: phantom generation, projection, reconstruction and diagnostics.
#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "commands.hpp"
#include "straintomo/fields.hpp"

using straintomo::cli::RunConfig;

namespace {

void add_constants(CLI::App* app, RunConfig& c, std::string& mode) {
  app->add_option("--E", c.constants.E, "Young's modulus");
  app->add_option("--nu", c.constants.nu, "Poisson's ratio");
  app->add_option("--mode", mode, "plane_stress or plane_strain")
      ->check(CLI::IsMember({"plane_stress", "plane_strain"}));
}

void add_output(CLI::App* app, RunConfig& c) {
  app->add_option("-o,--out-dir", c.out_dir, "Output directory");
  app->add_option("--name", c.name, "Output file stem");
  app->add_flag("!--no-plots", c.plots, "Skip PNG output");
}

void add_recon(CLI::App* app, RunConfig& c) {
  app->add_option("--sinogram", c.sinogram, "SGM1 or CSV sinogram")->required();
  app->add_option("--input-kind", c.input_kind, "lrt or average")
      ->check(CLI::IsMember({"lrt", "average"}));
  app->add_option("--like", c.like, "Field whose grid the output uses");
  app->add_option("--reference", c.reference, "Ground-truth strain field");
  app->add_option("--mask", c.mask, "Mask polygon CSV");
  app->add_option("--support-tol", c.support_tol, "Relative support threshold");
  app->add_option("--nx", c.nx, "Grid size when no --like/--reference");
  app->add_option("--spacing", c.spacing, "Grid spacing");
  app->add_option("--window", c.window)->check(CLI::IsMember({"ram-lak", "cosine"}));
  app->add_option("--noise", c.noise, "Noise level of the input (selects the default cutoff)");
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  std::string mode = "plane_stress";
  std::string ladder;

  CLI::App app{"Tensor strain tomography from longitudinal ray transforms"};
  app.require_subcommand(1, 1);

  auto* phantom = app.add_subcommand("phantom", "Write a phantom strain field and its mask");
  phantom->add_option("kind", cfg.phantom, "airy, axisym or file")
      ->check(CLI::IsMember({"airy", "axisym", "file"}));
  phantom->add_option("--alpha", cfg.alpha, "Airy Gaussian sharpness");
  phantom->add_option("--nx", cfg.nx, "Grid points per side");
  phantom->add_option("--spacing", cfg.spacing, "Grid spacing (default 2.4/nx)");
  phantom->add_option("--hydrostatic", cfg.hydrostatic, "Add magnitude * I inside the mask");
  phantom->add_option("--input", cfg.input, "External STF1 field (kind file)");
  phantom->add_option("--mask", cfg.mask, "Mask polygon for an external field");
  phantom->add_option("--support-tol", cfg.support_tol);
  add_constants(phantom, cfg, mode);
  add_output(phantom, cfg);

  auto* project = app.add_subcommand("project", "Longitudinal ray transform of a field");
  project->add_option("--field", cfg.field)->required();
  project->add_option("--angles", cfg.angle_scheme, "uniform_360, golden_50 or explicit_list")
      ->check(CLI::IsMember({"uniform_360", "golden_50", "explicit_list"}));
  project->add_option("--n-angles", cfg.n_angles);
  project->add_option("--angles-file", cfg.angles_file);
  project->add_option("--golden-start", cfg.golden_start);
  project->add_option("--noise", cfg.noise, "Noise std as a fraction of max |LRT|");
  project->add_option("--seed", cfg.seed);
  project->add_option("--output-kind", cfg.input_kind, "lrt or average")
      ->check(CLI::IsMember({"lrt", "average"}));
  project->add_option("--mask", cfg.mask, "Mask polygon (needed for average output)");
  add_output(project, cfg);

  auto* reconstruct = app.add_subcommand("reconstruct", "Recover strain from a sinogram");
  add_recon(reconstruct, cfg);
  reconstruct->add_option("--route", cfg.route)->check(CLI::IsMember({"hooke", "fem", "both"}));
  reconstruct->add_option("--cutoff", cfg.cutoff, "Spectral cutoff fraction");
  reconstruct->add_option("--pad-factor", cfg.pad_factor);
  reconstruct->add_option("--target-h", cfg.target_h, "FEM element size");
  reconstruct->add_option("--traction-threshold", cfg.traction_threshold);
  reconstruct->add_flag("--write-mesh", cfg.write_mesh);
  add_constants(reconstruct, cfg, mode);
  add_output(reconstruct, cfg);

  auto* incompat = app.add_subcommand("incompat", "Saint-Venant incompatibility map");
  incompat->add_option("--field", cfg.field)->required();
  incompat->add_option("--reference", cfg.reference, "Field to compare against");
  incompat->add_option("--mask", cfg.mask);
  incompat->add_option("--cutoff", cfg.cutoff);
  incompat->add_option("--pad-factor", cfg.pad_factor);
  add_output(incompat, cfg);

  auto* trace = app.add_subcommand("trace", "Trace of the solenoidal part by scalar FBP");
  add_recon(trace, cfg);
  add_constants(trace, cfg, mode);
  add_output(trace, cfg);

  auto* sweep = app.add_subcommand("noise-sweep", "Error against projection count");
  int sweep_nx = 200;
  double sweep_noise = 0.1;
  sweep->add_option("--nx", sweep_nx);
  sweep->add_option("--spacing", cfg.spacing);
  sweep->add_option("--alpha", cfg.alpha);
  sweep->add_option("--noise", sweep_noise);
  sweep->add_option("--seed", cfg.seed);
  sweep->add_option("--ladder", ladder, "Comma-separated projection counts");
  sweep->add_option("--route", cfg.route)->check(CLI::IsMember({"hooke", "fem"}));
  sweep->add_option("--cutoff", cfg.cutoff);
  sweep->add_flag("--full-floor", cfg.full_floor, "50000-projection floor run");
  add_constants(sweep, cfg, mode);
  add_output(sweep, cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    cfg.subcommand = app.get_subcommands().front()->get_name();
    cfg.constants.mode = straintomo::parse_plane_mode(mode);
    if (cfg.subcommand == "noise-sweep") {
      cfg.nx = sweep_nx;
      cfg.noise = sweep_noise;
      if (!ladder.empty()) {
        cfg.ladder.clear();
        for (const auto& tok : CLI::detail::split(ladder, ',')) cfg.ladder.push_back(std::stoi(tok));
      }
    }
    const int threads = straintomo::cli::configure_threads();
    const auto manifest = straintomo::cli::run(cfg);
    std::cout << cfg.subcommand << ": ok (" << threads << " threads)\n";
    if (manifest.contains("metrics")) std::cout << manifest["metrics"].dump(2) << '\n';
    return 0;
  } catch (const straintomo::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: bad number: " << e.what() << '\n';
    return 1;
  } catch (const straintomo::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
