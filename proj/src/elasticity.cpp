#include "straintomo/elasticity.hpp"

#include <cmath>
#include <string>

#include <Eigen/SparseCholesky>

#include "straintomo/kernels.hpp"

namespace straintomo {

TensorField2 hooke_recover(const TensorField2& sf, const ElasticConstants& constants) {
  constants.validate();
  const double nu = constants.nu;
  TensorField2 out(sf.grid);
  // sf = stress / E (plane stress) or stress * (1 - nu^2) / E (plane strain);
  // apply the compliance to the matching stress.
  double a = 1.0, b = -nu, g = 1.0 + nu;
  if (constants.mode == PlaneMode::plane_strain) {
    b = -nu / (1.0 - nu);
    g = 1.0 / (1.0 - nu);
  }
  for (std::size_t k = 0; k < sf.grid.size(); ++k) {
    out.c11[k] = a * sf.c11[k] + b * sf.c22[k];
    out.c22[k] = a * sf.c22[k] + b * sf.c11[k];
    out.c12[k] = g * sf.c12[k];
  }
  return out;
}

VectorField2 body_force(const TensorField2& sf, const ElasticConstants& constants,
                        const SpectralPlan& plan) {
  constants.validate();
  VectorField2 d = divergence(stress_from_strain(constants, sf), plan);
  for (double& v : d.x.values) v = -v;
  for (double& v : d.y.values) v = -v;
  return d;
}

namespace {

using Mat3 = std::array<std::array<double, 3>, 3>;

// Voigt stiffness acting on (e11, e22, 2 e12).
Mat3 voigt_stiffness(const ElasticConstants& c) {
  const double E = c.E, nu = c.nu;
  if (c.mode == PlaneMode::plane_stress) {
    const double f = E / (1.0 - nu * nu);
    return {{{f, f * nu, 0.0}, {f * nu, f, 0.0}, {0.0, 0.0, f * 0.5 * (1.0 - nu)}}};
  }
  const double f = E / ((1.0 + nu) * (1.0 - 2.0 * nu));
  return {{{f * (1.0 - nu), f * nu, 0.0},
           {f * nu, f * (1.0 - nu), 0.0},
           {0.0, 0.0, f * 0.5 * (1.0 - 2.0 * nu)}}};
}

struct ShapeGradients {
  std::array<double, 3> dx, dy;
  double area;
};

ShapeGradients shape_gradients(const TriMesh& m, int t) {
  const auto& tri = m.triangles[t];
  const Point2& p0 = m.vertices[tri[0]];
  const Point2& p1 = m.vertices[tri[1]];
  const Point2& p2 = m.vertices[tri[2]];
  const double a = m.area(t);
  if (!(a > 0.0)) throw NumericalError("degenerate triangle " + std::to_string(t));
  const double inv = 1.0 / (2.0 * a);
  return {{(p1.y - p2.y) * inv, (p2.y - p0.y) * inv, (p0.y - p1.y) * inv},
          {(p2.x - p1.x) * inv, (p0.x - p2.x) * inv, (p1.x - p0.x) * inv},
          a};
}

// Writes the 36 entries of one element stiffness matrix.
void element_triplets(const TriMesh& m, int t, const Mat3& D,
                      Eigen::Triplet<double>* out) {
  const ShapeGradients sg = shape_gradients(m, t);
  // B is 3 x 6, dof order (u0, v0, u1, v1, u2, v2).
  double B[3][6] = {};
  for (int a = 0; a < 3; ++a) {
    B[0][2 * a] = sg.dx[a];
    B[1][2 * a + 1] = sg.dy[a];
    B[2][2 * a] = sg.dy[a];
    B[2][2 * a + 1] = sg.dx[a];
  }
  double DB[3][6];
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 6; ++c) {
      DB[r][c] = D[r][0] * B[0][c] + D[r][1] * B[1][c] + D[r][2] * B[2][c];
    }
  }
  const auto& tri = m.triangles[t];
  int k = 0;
  for (int r = 0; r < 6; ++r) {
    const int gr = 2 * tri[r / 2] + r % 2;
    for (int c = 0; c < 6; ++c) {
      const int gc = 2 * tri[c / 2] + c % 2;
      const double v = sg.area * (B[0][r] * DB[0][c] + B[1][r] * DB[1][c] + B[2][r] * DB[2][c]);
      out[k++] = Eigen::Triplet<double>(gr, gc, v);
    }
  }
}

Eigen::SparseMatrix<double> from_triplets(const TriMesh& m,
                                          const std::vector<Eigen::Triplet<double>>& trips) {
  const auto n = static_cast<Eigen::Index>(2 * m.vertices.size());
  Eigen::SparseMatrix<double> K(n, n);
  K.setFromTriplets(trips.begin(), trips.end());
  return K;
}

}  // namespace

namespace assembly {

Eigen::SparseMatrix<double> serial(const TriMesh& mesh, const ElasticConstants& c) {
  c.validate();
  const Mat3 D = voigt_stiffness(c);
  std::vector<Eigen::Triplet<double>> trips(36 * mesh.triangles.size());
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    element_triplets(mesh, static_cast<int>(t), D, trips.data() + 36 * t);
  }
  return from_triplets(mesh, trips);
}

Eigen::SparseMatrix<double> parallel(const TriMesh& mesh, const ElasticConstants& c) {
  c.validate();
  const Mat3 D = voigt_stiffness(c);
  // Each element owns a fixed slot, so the triplet order (and therefore the
  // summation order in setFromTriplets) matches the serial path.
  std::vector<Eigen::Triplet<double>> trips(36 * mesh.triangles.size());
  const auto nt = static_cast<long>(mesh.triangles.size());
  bool degenerate = false;
#pragma omp parallel for schedule(static)
  for (long t = 0; t < nt; ++t) {
    try {
      element_triplets(mesh, static_cast<int>(t), D, trips.data() + 36 * t);
    } catch (const NumericalError&) {
#pragma omp atomic write
      degenerate = true;
    }
  }
  if (degenerate) throw NumericalError("mesh contains degenerate triangles");
  return from_triplets(mesh, trips);
}

}  // namespace assembly

FemSolution fem_solve(const TriMesh& mesh, const BodyForceFn& b, const ElasticConstants& constants,
                      const std::vector<Point2>* boundary_values) {
  constants.validate();
  if (mesh.triangles.empty()) throw ValidationError("fem_solve: empty mesh");
  if (boundary_values && boundary_values->size() != mesh.boundary_vertices.size()) {
    throw ValidationError("fem_solve: one boundary value per boundary vertex required");
  }
  const std::size_t nv = mesh.vertices.size();
  const std::size_t ndof = 2 * nv;

  // Load vector: -integral of b . phi with one-point (centroid) quadrature.
  Eigen::VectorXd load = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(ndof));
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const Point2 c = mesh.centroid(static_cast<int>(t));
    const Point2 f = b(c.x, c.y);
    if (!std::isfinite(f.x) || !std::isfinite(f.y)) {
      throw ValidationError("fem_solve: body force is not finite");
    }
    const double w = mesh.area(static_cast<int>(t)) / 3.0;
    for (int v : mesh.triangles[t]) {
      load[2 * v] -= w * f.x;
      load[2 * v + 1] -= w * f.y;
    }
  }

  Eigen::VectorXd prescribed = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(ndof));
  std::vector<int> free_index(ndof, 0);
  for (std::size_t k = 0; k < mesh.boundary_vertices.size(); ++k) {
    const int v = mesh.boundary_vertices[k];
    free_index[2 * v] = free_index[2 * v + 1] = -1;
    if (boundary_values) {
      prescribed[2 * v] = (*boundary_values)[k].x;
      prescribed[2 * v + 1] = (*boundary_values)[k].y;
    }
  }
  int nfree = 0;
  for (int& f : free_index) {
    if (f == 0) f = nfree++;
  }

  FemSolution sol{mesh, std::vector<Point2>(nv), constants, 0.0};
  for (std::size_t k = 0; k < mesh.boundary_vertices.size(); ++k) {
    const int v = mesh.boundary_vertices[k];
    sol.omega[v] = {prescribed[2 * v], prescribed[2 * v + 1]};
  }
  if (nfree == 0) return sol;

  const Eigen::SparseMatrix<double> K = assembly::parallel(mesh, constants);
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(K.nonZeros()));
  Eigen::VectorXd rhs(nfree);
  for (std::size_t d = 0; d < ndof; ++d) {
    if (free_index[d] >= 0) rhs[free_index[d]] = load[static_cast<Eigen::Index>(d)];
  }
  for (Eigen::Index col = 0; col < K.outerSize(); ++col) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(K, col); it; ++it) {
      const int r = free_index[static_cast<std::size_t>(it.row())];
      if (r < 0) continue;
      const int c = free_index[static_cast<std::size_t>(col)];
      if (c >= 0) {
        trips.emplace_back(r, c, it.value());
      } else {
        rhs[r] -= it.value() * prescribed[col];
      }
    }
  }
  Eigen::SparseMatrix<double> Kff(nfree, nfree);
  Kff.setFromTriplets(trips.begin(), trips.end());

  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(Kff);
  if (ldlt.info() != Eigen::Success) throw NumericalError("fem_solve: factorization failed");
  Eigen::VectorXd u = ldlt.solve(rhs);
  const double rhs_norm = rhs.norm();
  double residual = 0.0;
  if (rhs_norm > 0.0) {
    // A couple of refinement sweeps recover digits lost to conditioning.
    for (int sweep = 0; sweep < 3; ++sweep) {
      const Eigen::VectorXd r = rhs - Kff * u;
      residual = r.norm() / rhs_norm;
      if (residual <= 1e-12) break;
      u += ldlt.solve(r);
    }
    residual = (rhs - Kff * u).norm() / rhs_norm;
  }
  if (!std::isfinite(residual) || residual > 1e-10) {
    throw NumericalError("fem_solve: relative residual " + std::to_string(residual) +
                         " exceeds 1e-10");
  }
  for (std::size_t v = 0; v < nv; ++v) {
    const int fx = free_index[2 * v];
    if (fx >= 0) sol.omega[v] = {u[fx], u[free_index[2 * v + 1]]};
  }
  sol.relative_residual = residual;
  return sol;
}

FemSolution fem_solve(const TriMesh& mesh, const VectorField2& b,
                      const ElasticConstants& constants) {
  require_same_grid(b.x.grid, b.y.grid, "fem_solve body force");
  require_finite(b.x.values, "body force x");
  require_finite(b.y.values, "body force y");
  const Grid2& g = b.x.grid;
  return fem_solve(
      mesh,
      [&](double x, double y) {
        return Point2{kernels::sample_bilinear(g, b.x.values.data(), x, y),
                      kernels::sample_bilinear(g, b.y.values.data(), x, y)};
      },
      constants);
}

std::array<double, 3> element_strain(const TriMesh& mesh, int t, const std::vector<Point2>& u) {
  const ShapeGradients sg = shape_gradients(mesh, t);
  const auto& tri = mesh.triangles[t];
  double e11 = 0.0, e22 = 0.0, g12 = 0.0;
  for (int a = 0; a < 3; ++a) {
    const Point2& d = u[tri[a]];
    e11 += sg.dx[a] * d.x;
    e22 += sg.dy[a] * d.y;
    g12 += sg.dy[a] * d.x + sg.dx[a] * d.y;
  }
  return {e11, e22, 0.5 * g12};
}

TensorField2 sym_gradient(const FemSolution& sol, const Grid2& grid, const Mask2* mask) {
  grid.validate();
  if (mask) require_same_grid(mask->grid, grid, "sym_gradient mask");
  const TriMesh& m = sol.mesh;
  std::vector<std::array<double, 3>> strain(m.triangles.size());
  for (std::size_t t = 0; t < strain.size(); ++t) {
    strain[t] = element_strain(m, static_cast<int>(t), sol.omega);
  }
  TensorField2 out(grid);
#pragma omp parallel for schedule(static)
  for (int j = 0; j < grid.ny; ++j) {
    for (int i = 0; i < grid.nx; ++i) {
      const std::size_t k = grid.index(i, j);
      if (mask && !mask->inside[k]) continue;
      const Point2 p{grid.x(i), grid.y(j)};
      int t = m.locate(p);
      if (t < 0 && mask) t = m.nearest(p);
      if (t < 0) continue;
      out.c11[k] = strain[t][0];
      out.c22[k] = strain[t][1];
      out.c12[k] = strain[t][2];
    }
  }
  return out;
}

FemReconstruction reconstruct_fem(const TensorField2& sf, const Mask2& mask,
                                  const ElasticConstants& constants, const SpectralPlan& plan,
                                  double target_h) {
  require_same_grid(sf.grid, mask.grid, "reconstruct_fem");
  const VectorField2 b = body_force(sf, constants, plan);
  const TriMesh mesh = build_mesh(mask, target_h > 0.0 ? target_h : default_target_h(mask));
  FemSolution sol = fem_solve(mesh, b, constants);
  TensorField2 domega = sym_gradient(sol, sf.grid, &mask);
  TensorField2 strain = sf + domega;
  return {std::move(strain), std::move(domega), std::move(sol)};
}

HelmholtzReport helmholtz_check(const TensorField2& sf, const TensorField2& domega,
                                const Mask2& mask, const SpectralPlan& plan) {
  require_same_grid(sf.grid, domega.grid, "helmholtz_check");
  require_same_grid(sf.grid, mask.grid, "helmholtz_check mask");
  HelmholtzReport r;
  const double ns = std::sqrt(masked_inner(sf, sf, mask));
  const double nd = std::sqrt(masked_inner(domega, domega, mask));
  if (ns > 0.0 && nd > 0.0) r.normalized_inner = std::abs(masked_inner(sf, domega, mask)) / (ns * nd);
  r.divergence_rms = divergence_rms(sf, plan);
  r.gradient_scale = gradient_scale(sf, plan);
  r.divergence_ratio = r.gradient_scale > 0.0 ? r.divergence_rms / r.gradient_scale : 0.0;
  return r;
}

}  // namespace straintomo
