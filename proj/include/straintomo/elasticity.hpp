// Recovery of the full elastic strain from its solenoidal part.
//
// Two routes: pointwise Hooke's law, and the potential-part boundary value
// problem Div(C : d omega) = b, omega = 0 on the boundary, with
// b = -Div(C : sf), solved with constant-strain triangles.
#pragma once

#include <array>
#include <filesystem>
#include <functional>
#include <vector>

#include <Eigen/SparseCore>

#include "straintomo/fields.hpp"
#include "straintomo/material.hpp"
#include "straintomo/spectral.hpp"

namespace straintomo {

// ---- Hooke route ----

/// Full strain from the solenoidal part, using sf proportional to stress.
TensorField2 hooke_recover(const TensorField2& sf, const ElasticConstants& constants);

/// b = -Div(C : sf) with spectral first derivatives (plan cutoff applies).
VectorField2 body_force(const TensorField2& sf, const ElasticConstants& constants,
                        const SpectralPlan& plan);

// ---- mesh ----

/// Structured triangulation of a masked domain.
struct TriMesh {
  std::vector<Point2> vertices;
  std::vector<std::array<int, 3>> triangles;  // counter-clockwise
  std::vector<int> boundary_vertices;

  // Square lattice the mesh was cut from; used for point location.
  double x0 = 0.0, y0 = 0.0, hx = 0.0, hy = 0.0;
  int sx = 0, sy = 0;
  std::vector<int> square_first_triangle;  // -1 for squares outside the domain

  [[nodiscard]] double area(int t) const;
  [[nodiscard]] Point2 centroid(int t) const;
  /// Index of a triangle containing p, or -1.
  [[nodiscard]] int locate(const Point2& p) const;
  /// Nearest triangle by centroid among those near p, or -1.
  [[nodiscard]] int nearest(const Point2& p) const;
};

/// 0.5% of the larger side of the mask outline's bounding box.
double default_target_h(const Mask2& mask);

/// Squares of side <= target_h over the outline's bounding box; squares with
/// centres inside are kept and split in two; outer vertices are snapped onto
/// the outline unless that would collapse a neighbouring triangle.
TriMesh build_mesh(const Mask2& mask, double target_h);

/// OFF-style text: `OFF`, counts line, vertex rows `x y 0`, rows `3 a b c`.
void write_mesh_off(const TriMesh& mesh, const std::filesystem::path& path);

// ---- finite elements ----

struct FemSolution {
  TriMesh mesh;
  std::vector<Point2> omega;  // per-vertex displacement
  ElasticConstants constants;
  double relative_residual = 0.0;
};

using BodyForceFn = std::function<Point2(double x, double y)>;

/// Global stiffness of constant-strain triangles (2 dofs per vertex).
namespace assembly {
Eigen::SparseMatrix<double> serial(const TriMesh& mesh, const ElasticConstants& c);
Eigen::SparseMatrix<double> parallel(const TriMesh& mesh, const ElasticConstants& c);
}  // namespace assembly

/// Solves Div(C : d omega) = b with omega prescribed on the boundary
/// vertices (zero unless `boundary_values` is given, one entry per boundary
/// vertex in mesh order). b is evaluated at element centroids.
FemSolution fem_solve(const TriMesh& mesh, const BodyForceFn& b, const ElasticConstants& constants,
                      const std::vector<Point2>* boundary_values = nullptr);

/// Grid body force sampled bilinearly at element centroids.
FemSolution fem_solve(const TriMesh& mesh, const VectorField2& b, const ElasticConstants& constants);

/// Per-element constant strain of a displacement, evaluated per vertex-set.
std::array<double, 3> element_strain(const TriMesh& mesh, int t, const std::vector<Point2>& u);

/// Samples d omega onto grid points; zero outside the mesh (or outside the
/// mask when given). Mask points missed by point location take the nearest
/// element.
TensorField2 sym_gradient(const FemSolution& sol, const Grid2& grid, const Mask2* mask = nullptr);

struct FemReconstruction {
  TensorField2 strain;  // sf + d omega
  TensorField2 domega;
  FemSolution solution;
};

/// body_force -> build_mesh -> fem_solve -> sym_gradient; target_h <= 0
/// selects default_target_h(mask).
FemReconstruction reconstruct_fem(const TensorField2& sf, const Mask2& mask,
                                  const ElasticConstants& constants, const SpectralPlan& plan,
                                  double target_h = 0.0);

struct HelmholtzReport {
  /// |<sf, d omega>| / (|sf| |d omega|) over the mask; 0 when either vanishes.
  double normalized_inner = 0.0;
  double divergence_rms = 0.0;
  double gradient_scale = 0.0;
  /// divergence_rms / gradient_scale.
  double divergence_ratio = 0.0;
};

HelmholtzReport helmholtz_check(const TensorField2& sf, const TensorField2& domega,
                                const Mask2& mask, const SpectralPlan& plan = {});

}  // namespace straintomo
