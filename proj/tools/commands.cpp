#include "commands.hpp"

#include <omp.h>

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <numbers>
#include <optional>
#include <variant>
#include <sstream>

#include "straintomo/elasticity.hpp"
#include "straintomo/field_io.hpp"
#include "straintomo/fields.hpp"
#include "straintomo/lrt.hpp"
#include "straintomo/mask.hpp"
#include "straintomo/phantoms.hpp"
#include "straintomo/render.hpp"
#include "straintomo/sinogram.hpp"
#include "straintomo/spectral.hpp"

namespace straintomo::cli {

using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

void require(bool ok, const std::string& msg) {
  if (!ok) throw ValidationError(msg);
}

std::string stem(const RunConfig& cfg, const std::string& fallback) {
  return cfg.name.empty() ? fallback : cfg.name;
}

fs::path out(const RunConfig& cfg, const std::string& file) { return cfg.out_dir / file; }

json grid_json(const Grid2& g) {
  return {{"nx", g.nx}, {"ny", g.ny}, {"dx", g.dx}, {"dy", g.dy}, {"ox", g.ox}, {"oy", g.oy}};
}

json config_json(const RunConfig& c) {
  return {{"subcommand", c.subcommand},
          {"out_dir", c.out_dir.string()},
          {"name", c.name},
          {"phantom", c.phantom},
          {"alpha", c.alpha},
          {"hydrostatic", c.hydrostatic},
          {"nx", c.nx},
          {"spacing", c.spacing},
          {"E", c.constants.E},
          {"nu", c.constants.nu},
          {"mode", to_string(c.constants.mode)},
          {"input", c.input.string()},
          {"field", c.field.string()},
          {"sinogram", c.sinogram.string()},
          {"reference", c.reference.string()},
          {"mask", c.mask.string()},
          {"like", c.like.string()},
          {"support_tol", c.support_tol},
          {"angle_scheme", c.angle_scheme},
          {"n_angles", c.n_angles},
          {"angles_file", c.angles_file.string()},
          {"golden_start", c.golden_start},
          {"noise_sigma_fraction", c.noise},
          {"seed", c.seed},
          {"input_kind", c.input_kind},
          {"route", c.route},
          {"window", c.window},
          {"cutoff_fraction", c.cutoff},
          {"pad_factor", c.pad_factor},
          {"target_h", c.target_h},
          {"traction_threshold", c.traction_threshold},
          {"ladder", c.ladder},
          {"full_floor", c.full_floor},
          {"plots", c.plots}};
}

json new_manifest(const RunConfig& cfg) {
  std::ostringstream eigen;
  eigen << EIGEN_WORLD_VERSION << '.' << EIGEN_MAJOR_VERSION << '.' << EIGEN_MINOR_VERSION;
  return {{"tool", "strain-tomo"},
          {"version", kVersion},
          {"versions", {{"eigen", eigen.str()}, {"openmp", _OPENMP}, {"cxx", __cplusplus}}},
          {"threads", omp_get_max_threads()},
          {"config", config_json(cfg)},
          {"outputs", json::array()},
          {"metrics", json::object()}};
}

void save_manifest(json& m, const RunConfig& cfg, const std::string& s) {
  const fs::path p = out(cfg, s + "_manifest.json");
  m["outputs"].push_back(p.string());
  std::ofstream os(p);
  if (!os) throw ValidationError("cannot write manifest: " + p.string());
  os << m.dump(2) << '\n';
}

void emit_tensor(json& m, const RunConfig& cfg, const TensorField2& f, const std::string& s,
                 const Mask2* outline) {
  write_field(f, out(cfg, s + ".stf"));
  write_field_csv(f, out(cfg, s + ".csv"));
  m["outputs"].push_back(out(cfg, s + ".stf").string());
  m["outputs"].push_back(out(cfg, s + ".csv").string());
  if (cfg.plots) {
    render::write_tensor_heatmap(f, out(cfg, s + ".png"), outline);
    m["outputs"].push_back(out(cfg, s + ".png").string());
  }
}

void emit_scalar(json& m, const RunConfig& cfg, const ScalarField2& f, const std::string& s,
                 const Mask2* outline) {
  write_field(f, out(cfg, s + ".stf"));
  write_field_csv(f, out(cfg, s + ".csv"));
  m["outputs"].push_back(out(cfg, s + ".stf").string());
  m["outputs"].push_back(out(cfg, s + ".csv").string());
  if (cfg.plots) {
    render::write_heatmap({f}, out(cfg, s + ".png"), outline);
    m["outputs"].push_back(out(cfg, s + ".png").string());
  }
}

Grid2 config_grid(const RunConfig& cfg) {
  require(cfg.nx >= 2, "--nx must be >= 2");
  const double h = cfg.spacing > 0.0 ? cfg.spacing : 2.4 / cfg.nx;
  return Grid2::centered(cfg.nx, h);
}

// Grid of the reconstruction: --like, else --reference, else --nx/--spacing.
Grid2 target_grid(const RunConfig& cfg) {
  if (!cfg.like.empty()) {
    const AnyField f = read_field(cfg.like);
    return std::visit([](const auto& v) { return v.grid; }, f);
  }
  if (!cfg.reference.empty()) return read_tensor_field(cfg.reference).grid;
  return config_grid(cfg);
}

std::vector<double> config_angles(const RunConfig& cfg) {
  if (cfg.angle_scheme == "uniform_360") {
    require(cfg.n_angles >= 2, "--n-angles must be >= 2");
    return uniform_angles(cfg.n_angles, 2.0 * std::numbers::pi);
  }
  if (cfg.angle_scheme == "golden_50") return golden_angles(50, cfg.golden_start);
  if (cfg.angle_scheme == "explicit_list") {
    require(!cfg.angles_file.empty(), "explicit_list needs --angles-file");
    std::ifstream is(cfg.angles_file);
    require(static_cast<bool>(is), "cannot read angles file: " + cfg.angles_file.string());
    std::vector<double> a;
    std::string tok;
    while (is >> tok) {
      std::replace(tok.begin(), tok.end(), ',', ' ');
      std::istringstream ts(tok);
      double v;
      while (ts >> v) a.push_back(v);
    }
    validate_angles(a);
    require(a.size() >= 2, "angles file must list at least 2 angles");
    return a;
  }
  throw ValidationError("unknown angle scheme: " + cfg.angle_scheme);
}

Sinogram load_sinogram(const RunConfig& cfg) {
  require(!cfg.sinogram.empty(), "--sinogram is required");
  const SinogramKind kind =
      cfg.input_kind == "average" ? SinogramKind::average_strain : SinogramKind::lrt_integral;
  Sinogram sg = cfg.sinogram.extension() == ".csv" ? read_sinogram_csv(cfg.sinogram, kind)
                                                   : read_sinogram(cfg.sinogram);
  if (cfg.input_kind == "average" && sg.kind != SinogramKind::average_strain) {
    throw ValidationError("--input-kind average but the file holds " + to_string(sg.kind));
  }
  if (cfg.input_kind == "lrt" && sg.kind == SinogramKind::average_strain) {
    throw ValidationError("sinogram holds average strain; pass --input-kind average");
  }
  return sg;
}

// --mask polygon, else the support of --reference, else none.
std::optional<Mask2> load_mask(const RunConfig& cfg, const Grid2& grid,
                               const std::optional<TensorField2>& reference) {
  if (!cfg.mask.empty()) return read_mask_polygon(grid, cfg.mask);
  if (reference) return mask_from_support(*reference, cfg.support_tol);
  return std::nullopt;
}

SpectralPlan config_plan(const RunConfig& cfg, const Grid2& grid, bool noisy) {
  SpectralPlan p;
  p.pad_factor = cfg.pad_factor;
  p.cutoff_fraction = cfg.cutoff > 0.0 ? cfg.cutoff : (noisy ? kNoisyCutoff : 1.0);
  p.grid = grid;
  p.validate();
  return p;
}

FbpOptions config_fbp(const RunConfig& cfg) {
  FbpOptions o;
  o.window = cfg.window == "cosine" ? RampWindow::cosine : RampWindow::ram_lak;
  return o;
}

json report_json(const ReconReport& r) {
  json meta = json::object();
  for (const auto& [k, v] : r.metadata) meta[k] = v;
  return {{"rel_rms_error", r.rel_rms_error},
          {"exterior_interior_ratio", r.exterior_interior_ratio},
          {"per_component_max_error", r.per_component_max_error},
          {"metadata", meta}};
}

}  // namespace

void RunConfig::validate() const {
  constants.validate();
  require(noise >= 0.0, "--noise must be >= 0");
  require(n_angles >= 2, "--n-angles must be >= 2");
  require(cutoff == 0.0 || (cutoff > 0.0 && cutoff <= 1.0), "--cutoff must lie in (0, 1]");
  require(pad_factor >= 1, "--pad-factor must be >= 1");
  require(target_h >= 0.0, "--target-h must be >= 0");
  require(support_tol >= 0.0, "--support-tol must be >= 0");
  require(route == "hooke" || route == "fem" || route == "both", "--route: hooke, fem or both");
  require(window == "ram-lak" || window == "cosine", "--window: ram-lak or cosine");
  require(input_kind == "lrt" || input_kind == "average", "--input-kind: lrt or average");
  for (int n : ladder) require(n >= 2, "ladder entries must be >= 2");
}

json cmd_phantom(const RunConfig& cfg) {
  cfg.validate();
  json m = new_manifest(cfg);
  TensorField2 f;
  Mask2 mask;
  if (cfg.phantom == "airy") {
    AirySpec spec;
    spec.alpha = cfg.alpha;
    spec.constants = cfg.constants;
    spec.grid = config_grid(cfg);
    spec.validate();
    f = strain_from_airy(spec);
    mask = disk_mask(spec.grid, 1.0);
  } else if (cfg.phantom == "axisym") {
    f = axisym_phantom(cfg.constants.nu, config_grid(cfg));
    mask = disk_mask(f.grid, 1.0);
  } else if (cfg.phantom == "file") {
    require(!cfg.input.empty(), "phantom file needs --input");
    f = read_tensor_field(cfg.input);
    mask = cfg.mask.empty() ? mask_from_support(f, cfg.support_tol)
                            : read_mask_polygon(f.grid, cfg.mask);
  } else {
    throw ValidationError("unknown phantom: " + cfg.phantom);
  }
  if (cfg.hydrostatic != 0.0) f = add_hydrostatic(f, mask, cfg.hydrostatic);

  const std::string s = stem(cfg, cfg.phantom);
  emit_tensor(m, cfg, f, s, &mask);
  write_mask_polygon(mask, out(cfg, s + "_mask.csv"));
  m["outputs"].push_back(out(cfg, s + "_mask.csv").string());

  double fmax = 0.0;
  for (std::size_t k = 0; k < f.grid.size(); ++k) fmax = std::max(fmax, frobenius_at(f, k));
  m["metrics"] = {{"grid", grid_json(f.grid)},
                  {"mask_cells", mask.count_inside()},
                  {"mask_area", static_cast<double>(mask.count_inside()) * f.grid.dx * f.grid.dy},
                  {"max_frobenius", fmax}};
  if (cfg.phantom == "axisym") {
    const auto edge = axisym_polar(cfg.constants.nu, 1.0);
    const auto s_edge = stress_from_strain(cfg.constants, edge[0], edge[1], 0.0);
    m["metrics"]["radial_stress_at_boundary"] = s_edge[0];
  }
  save_manifest(m, cfg, s);
  return m;
}

json cmd_project(const RunConfig& cfg) {
  cfg.validate();
  require(!cfg.field.empty(), "--field is required");
  json m = new_manifest(cfg);
  const TensorField2 f = read_tensor_field(cfg.field);
  const std::vector<double> angles = config_angles(cfg);
  Sinogram sg = lrt_forward(f, angles, default_offsets(f.grid));
  const double clean_max = sg.max_abs();
  if (cfg.noise > 0.0) sg = add_gaussian_noise(sg, cfg.noise, cfg.seed);
  if (cfg.input_kind == "average") {
    require(!cfg.mask.empty(), "average output needs --mask");
    sg = lrt_to_average(sg, read_mask_polygon(f.grid, cfg.mask));
  }

  const std::string s = stem(cfg, "sinogram");
  write_sinogram(sg, out(cfg, s + ".sgm"));
  write_sinogram_csv(sg, out(cfg, s + ".csv"));
  m["outputs"].push_back(out(cfg, s + ".sgm").string());
  m["outputs"].push_back(out(cfg, s + ".csv").string());
  if (cfg.plots) {
    Grid2 sg_grid{sg.n_s(), sg.n_angles(), 1.0, 1.0, 0.0, 0.0};
    render::write_heatmap({ScalarField2(sg_grid, sg.data)}, out(cfg, s + ".png"));
    m["outputs"].push_back(out(cfg, s + ".png").string());
  }
  m["metrics"] = {{"n_angles", sg.n_angles()},
                  {"n_s", sg.n_s()},
                  {"ds", sg.offsets.ds},
                  {"kind", to_string(sg.kind)},
                  {"max_abs_clean", clean_max},
                  {"noise_std", cfg.noise * clean_max}};
  save_manifest(m, cfg, s);
  return m;
}

json cmd_reconstruct(const RunConfig& cfg) {
  cfg.validate();
  json m = new_manifest(cfg);
  Sinogram sg = load_sinogram(cfg);
  const Grid2 grid = target_grid(cfg);
  std::optional<TensorField2> reference;
  if (!cfg.reference.empty()) {
    reference = read_tensor_field(cfg.reference);
    require_same_grid(reference->grid, grid, "reference field");
  }
  const std::optional<Mask2> mask = load_mask(cfg, grid, reference);
  if (sg.kind == SinogramKind::average_strain) {
    require(mask.has_value(), "average-strain input needs --mask or --reference");
    sg = average_to_lrt(sg, *mask);
  }
  const bool noisy = cfg.noise > 0.0;
  const SpectralPlan plan = config_plan(cfg, grid, noisy);
  const std::string s = stem(cfg, "recon");
  const Mask2* outline = mask ? &*mask : nullptr;

  const TensorField2 sf = tensor_fbp(sg, grid, config_fbp(cfg));
  emit_tensor(m, cfg, sf, s + "_solenoidal", outline);

  json metrics = {{"grid", grid_json(grid)}, {"n_angles", sg.n_angles()}};
  const double gscale = gradient_scale(sf, plan);
  metrics["solenoidal_divergence_ratio"] = gscale > 0.0 ? divergence_rms(sf, plan) / gscale : 0.0;

  std::optional<TensorField2> sf_reference;
  if (reference) {
    const double scale =
        cfg.constants.mode == PlaneMode::plane_stress ? 1.0 / cfg.constants.E
                                                      : (1.0 - cfg.constants.nu * cfg.constants.nu) / cfg.constants.E;
    sf_reference = scale * stress_from_strain(cfg.constants, *reference);
  }
  if (mask) {
    const double ext = exterior_ratio(sf, *mask);
    metrics["exterior_ratio"] = ext;
    metrics["traction_violation_suspected"] = ext > cfg.traction_threshold;
    if (sf_reference) metrics["solenoidal"] = report_json(make_report(sf, *sf_reference, *mask));
  }

  json reports = json::object();
  auto finish = [&](const std::string& route, const TensorField2& eps) {
    emit_tensor(m, cfg, eps, s + "_" + route, outline);
    if (reference && mask) {
      ReconReport r = make_report(eps, *reference, *mask);
      r.exterior_interior_ratio = exterior_ratio(sf, *mask);
      r.metadata = {{"route", route},
                    {"n_angles", std::to_string(sg.n_angles())},
                    {"noise_sigma_fraction", std::to_string(cfg.noise)}};
      reports[route] = report_json(r);
    }
  };
  if (cfg.route == "hooke" || cfg.route == "both") finish("hooke", hooke_recover(sf, cfg.constants));
  if (cfg.route == "fem" || cfg.route == "both") {
    require(mask.has_value(), "the fem route needs --mask or --reference");
    const FemReconstruction fem = reconstruct_fem(sf, *mask, cfg.constants, plan, cfg.target_h);
    finish("fem", fem.strain);
    const HelmholtzReport h = helmholtz_check(sf, fem.domega, *mask, plan);
    metrics["fem"] = {{"vertices", fem.solution.mesh.vertices.size()},
                      {"triangles", fem.solution.mesh.triangles.size()},
                      {"relative_residual", fem.solution.relative_residual},
                      {"solenoidal_potential_inner", h.normalized_inner}};
    if (cfg.write_mesh) {
      write_mesh_off(fem.solution.mesh, out(cfg, s + "_mesh.off"));
      m["outputs"].push_back(out(cfg, s + "_mesh.off").string());
    }
  }
  metrics["reports"] = reports;
  if (!reports.empty()) {
    std::ofstream os(out(cfg, s + "_report.json"));
    os << reports.dump(2) << '\n';
    m["outputs"].push_back(out(cfg, s + "_report.json").string());
  }
  m["metrics"] = metrics;
  save_manifest(m, cfg, s);
  return m;
}

json cmd_incompat(const RunConfig& cfg) {
  cfg.validate();
  require(!cfg.field.empty(), "--field is required");
  json m = new_manifest(cfg);
  const TensorField2 f = read_tensor_field(cfg.field);
  const SpectralPlan plan = config_plan(cfg, f.grid, cfg.noise > 0.0);
  const ScalarField2 w = saint_venant(f, plan);
  const std::string s = stem(cfg, "incompat");
  std::optional<Mask2> mask;
  if (!cfg.mask.empty()) mask = read_mask_polygon(f.grid, cfg.mask);
  emit_scalar(m, cfg, w, s, mask ? &*mask : nullptr);

  const Mask2 region = mask ? *mask : full_mask(f.grid);
  json metrics = {{"grid", grid_json(f.grid)}, {"rms", masked_rms(w, region)}};
  if (!cfg.reference.empty()) {
    const TensorField2 ref = read_tensor_field(cfg.reference);
    require_same_grid(ref.grid, f.grid, "reference field");
    const ScalarField2 wr = saint_venant(ref, plan);
    const double den = masked_rms(wr, region);
    require(den > 0.0, "reference incompatibility vanishes on the mask");
    metrics["reference_rms"] = den;
    metrics["relative_rms_difference"] = masked_rms(w - wr, region) / den;
  }
  m["metrics"] = metrics;
  save_manifest(m, cfg, s);
  return m;
}

json cmd_trace(const RunConfig& cfg) {
  cfg.validate();
  json m = new_manifest(cfg);
  Sinogram sg = load_sinogram(cfg);
  const Grid2 grid = target_grid(cfg);
  std::optional<TensorField2> reference;
  if (!cfg.reference.empty()) {
    reference = read_tensor_field(cfg.reference);
    require_same_grid(reference->grid, grid, "reference field");
  }
  const std::optional<Mask2> mask = load_mask(cfg, grid, reference);
  if (sg.kind == SinogramKind::average_strain) {
    require(mask.has_value(), "average-strain input needs --mask or --reference");
    sg = average_to_lrt(sg, *mask);
  }
  const ScalarField2 tr = trace_fbp(sg, grid, config_fbp(cfg));
  const std::string s = stem(cfg, "trace");
  emit_scalar(m, cfg, tr, s, mask ? &*mask : nullptr);

  json metrics = {{"grid", grid_json(grid)}, {"n_angles", sg.n_angles()}};
  if (reference && mask) {
    // Target tr(sigma) / E, times (1 - nu^2) under plane strain.
    const TensorField2 sig = stress_from_strain(cfg.constants, *reference);
    double scale = 1.0 / cfg.constants.E;
    if (cfg.constants.mode == PlaneMode::plane_strain) scale *= 1.0 - cfg.constants.nu * cfg.constants.nu;
    ScalarField2 target = sig.trace();
    for (double& v : target.values) v *= scale;
    const double den = masked_rms(target, *mask);
    require(den > 0.0, "reference stress trace vanishes on the mask");
    metrics["relative_rms_vs_stress_trace"] = masked_rms(tr - target, *mask) / den;
  }
  m["metrics"] = metrics;
  save_manifest(m, cfg, s);
  return m;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  require(x.size() == y.size() && x.size() >= 2, "slope fit needs at least two points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    require(x[k] > 0.0 && y[k] > 0.0, "slope fit needs positive data");
    const double lx = std::log(x[k]), ly = std::log(y[k]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double den = n * sxx - sx * sx;
  require(den > 0.0, "slope fit needs distinct x values");
  return (n * sxy - sx * sy) / den;
}

json cmd_noise_sweep(const RunConfig& cfg) {
  cfg.validate();
  require(!cfg.ladder.empty(), "empty ladder");
  json m = new_manifest(cfg);
  AirySpec spec;
  spec.alpha = cfg.alpha;
  spec.constants = cfg.constants;
  spec.grid = config_grid(cfg);
  spec.validate();
  const TensorField2 eps = strain_from_airy(spec);
  const Mask2 mask = disk_mask(spec.grid, 1.0);
  const OffsetSpec off = default_offsets(spec.grid);
  const bool use_fem = cfg.route == "fem";
  const SpectralPlan plan = config_plan(cfg, spec.grid, cfg.noise > 0.0);

  auto error_of = [&](const Sinogram& sg) {
    const TensorField2 sf = tensor_fbp(sg, spec.grid, config_fbp(cfg));
    const TensorField2 rec = use_fem ? reconstruct_fem(sf, mask, cfg.constants, plan, cfg.target_h).strain
                                     : hooke_recover(sf, cfg.constants);
    return rel_rms_error(rec, eps, mask);
  };

  const int floor_angles = cfg.full_floor ? 50000 : 5000;
  const double floor = error_of(lrt_forward(eps, uniform_angles(floor_angles, 2.0 * std::numbers::pi), off));

  // Ladder entries are independent; inner kernels run serially inside the
  // worker (nested parallelism stays off), results are stored by index.
  const auto n = static_cast<long>(cfg.ladder.size());
  std::vector<double> noisy(n), clean(n);
  std::vector<std::exception_ptr> errors(n);
#pragma omp parallel for schedule(dynamic, 1)
  for (long k = 0; k < n; ++k) {
    try {
      const int na = cfg.ladder[k];
      const Sinogram sg = lrt_forward(eps, uniform_angles(na, 2.0 * std::numbers::pi), off);
      clean[k] = error_of(sg);
      // Stream per ladder entry, derived from the user seed.
      const std::uint64_t seed = cfg.seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(na);
      noisy[k] = cfg.noise > 0.0 ? error_of(add_gaussian_noise(sg, cfg.noise, seed)) : clean[k];
    } catch (...) {
      errors[k] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  // Fit only the noise-dominated region, well above the discretization floor.
  std::vector<double> fx, fy;
  std::vector<bool> used(n, false);
  for (long k = 0; k < n; ++k) {
    if (noisy[k] > 3.0 * floor) {
      fx.push_back(cfg.ladder[k]);
      fy.push_back(noisy[k]);
      used[k] = true;
    }
  }
  json metrics = {{"grid", grid_json(spec.grid)}, {"floor", floor}, {"floor_angles", floor_angles}};
  metrics["fit_points"] = fx.size();
  metrics["slope"] = fx.size() >= 2 ? json(loglog_slope(fx, fy)) : json(nullptr);
  const auto [cmin, cmax] = std::minmax_element(clean.begin(), clean.end());
  metrics["noiseless_variation"] = (*cmax - *cmin) / *cmin;

  const std::string s = stem(cfg, "sweep");
  {
    std::ofstream os(out(cfg, s + ".csv"));
    require(static_cast<bool>(os), "cannot write sweep CSV");
    os << "n_angles,error_noisy,error_noiseless,floor,used_in_fit\n";
    for (long k = 0; k < n; ++k) {
      os << cfg.ladder[k] << ',' << format_exact(noisy[k]) << ',' << format_exact(clean[k]) << ','
         << format_exact(floor) << ',' << (used[k] ? 1 : 0) << '\n';
    }
  }
  m["outputs"].push_back(out(cfg, s + ".csv").string());
  if (cfg.plots) {
    std::vector<double> xs(cfg.ladder.begin(), cfg.ladder.end());
    render::write_loglog({{xs, noisy, {178, 24, 43}, false},
                          {xs, clean, {33, 102, 172}, false},
                          {xs, std::vector<double>(xs.size(), floor), {90, 90, 90}, true}},
                         out(cfg, s + ".png"));
    m["outputs"].push_back(out(cfg, s + ".png").string());
  }
  json rows = json::array();
  for (long k = 0; k < n; ++k) {
    rows.push_back({{"n_angles", cfg.ladder[k]}, {"error_noisy", noisy[k]}, {"error_noiseless", clean[k]}});
  }
  metrics["ladder"] = rows;
  m["metrics"] = metrics;
  save_manifest(m, cfg, s);
  return m;
}

json run(const RunConfig& cfg) {
  fs::create_directories(cfg.out_dir);
  if (cfg.subcommand == "phantom") return cmd_phantom(cfg);
  if (cfg.subcommand == "project") return cmd_project(cfg);
  if (cfg.subcommand == "reconstruct") return cmd_reconstruct(cfg);
  if (cfg.subcommand == "incompat") return cmd_incompat(cfg);
  if (cfg.subcommand == "trace") return cmd_trace(cfg);
  if (cfg.subcommand == "noise-sweep") return cmd_noise_sweep(cfg);
  throw ValidationError("unknown subcommand: " + cfg.subcommand);
}

int configure_threads() {
  if (const char* env = std::getenv("STRAIN_TOMO_THREADS"); env && *env) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    require(end && *end == '\0' && n >= 1, "STRAIN_TOMO_THREADS must be a positive integer");
    omp_set_num_threads(static_cast<int>(std::min<long>(n, omp_get_max_threads())));
  }
  return omp_get_max_threads();
}

}  // namespace straintomo::cli
