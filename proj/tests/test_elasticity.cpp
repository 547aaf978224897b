#include <cmath>
#include <fstream>
#include <numbers>

#include <gtest/gtest.h>

#include "straintomo/elasticity.hpp"
#include "straintomo/mask.hpp"
#include "straintomo/phantoms.hpp"
#include "test_support.hpp"

using namespace straintomo;

namespace {

Mask2 square_mask(const Grid2& g, double half) {
  return mask_from_predicate(g, [=](double x, double y) {
    return std::abs(x) < half && std::abs(y) < half;
  });
}

// Relative L2 difference of two per-vertex displacement lists.
double rel_l2(const std::vector<Point2>& a, const std::vector<Point2>& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    num += std::pow(a[k].x - b[k].x, 2) + std::pow(a[k].y - b[k].y, 2);
    den += b[k].x * b[k].x + b[k].y * b[k].y;
  }
  return std::sqrt(num / den);
}

}  // namespace

// ---- Hooke route ----

TEST(Hooke, PlaneStressInvertsStressOverE) {
  AirySpec spec;
  spec.grid = Grid2::centered(32, 0.075);
  spec.constants = {3.0, 0.28, PlaneMode::plane_stress};
  const TensorField2 sigma = airy_stress(spec);
  const TensorField2 sf = (1.0 / spec.constants.E) * sigma;
  const TensorField2 expected = strain_from_stress(spec.constants, sigma);
  const TensorField2 got = hooke_recover(sf, spec.constants);
  for (std::size_t k = 0; k < sf.c11.size(); ++k) {
    EXPECT_NEAR(got.c11[k], expected.c11[k], 1e-14);
    EXPECT_NEAR(got.c22[k], expected.c22[k], 1e-14);
    EXPECT_NEAR(got.c12[k], expected.c12[k], 1e-14);
  }
}

TEST(Hooke, PlaneStrainUsesEffectiveModulus) {
  // Under plane strain the solenoidal part is sigma (1 - nu^2) / E.
  const ElasticConstants c{2.0, 0.3, PlaneMode::plane_strain};
  const Grid2 g = Grid2::centered(8, 0.2);
  const TensorField2 sigma = testsupport::random_tensor(g, 4);
  const TensorField2 sf = ((1 - c.nu * c.nu) / c.E) * sigma;
  const TensorField2 expected = strain_from_stress(c, sigma);
  const TensorField2 got = hooke_recover(sf, c);
  for (std::size_t k = 0; k < g.size(); ++k) {
    EXPECT_NEAR(got.c11[k], expected.c11[k], 1e-14);
    EXPECT_NEAR(got.c22[k], expected.c22[k], 1e-14);
    EXPECT_NEAR(got.c12[k], expected.c12[k], 1e-14);
  }
  // Spot check the coefficient directly.
  TensorField2 unit(g);
  unit.c22[0] = 1.0;
  EXPECT_NEAR(hooke_recover(unit, c).c11[0], -c.nu / (1 - c.nu), 1e-15);
}

TEST(Hooke, IsLinearAndZeroPreserving) {
  const ElasticConstants c{1.0, 0.34, PlaneMode::plane_stress};
  const Grid2 g = Grid2::centered(6, 0.3);
  const TensorField2 a = testsupport::random_tensor(g, 1), b = testsupport::random_tensor(g, 2);
  const TensorField2 lhs = hooke_recover(2.0 * a + b, c);
  const TensorField2 rhs = 2.0 * hooke_recover(a, c) + hooke_recover(b, c);
  EXPECT_LT(rel_rms_error(lhs, rhs, full_mask(g)), 1e-15);
  const TensorField2 z = hooke_recover(TensorField2(g), c);
  for (double v : z.c11) EXPECT_EQ(v, 0.0);
}

TEST(BodyForce, VanishesForEquilibratedSolenoidalPart) {
  AirySpec spec;
  spec.grid = Grid2::centered(96, 0.025);
  const TensorField2 sf = airy_stress(spec);
  const VectorField2 b = body_force(sf, spec.constants, {});
  // C : sigma is not divergence-free in general, so b is nonzero but smooth;
  // its negative equals Div(C : sf) computed component-wise.
  const VectorField2 d = divergence(stress_from_strain(spec.constants, sf), {});
  for (std::size_t k = 0; k < b.x.values.size(); ++k) {
    EXPECT_EQ(b.x.values[k], -d.x.values[k]);
    EXPECT_EQ(b.y.values[k], -d.y.values[k]);
  }
}

// ---- mesh ----

TEST(Mesh, SquareDomainTilesExactly) {
  const Grid2 g = Grid2::centered(40, 0.05);
  const Mask2 m = square_mask(g, 0.6);
  const TriMesh mesh = build_mesh(m, 0.1);
  double area = 0.0;
  for (int t = 0; t < static_cast<int>(mesh.triangles.size()); ++t) {
    EXPECT_GT(mesh.area(t), 0.0);
    area += mesh.area(t);
  }
  double poly = 0.0;
  for (const Loop& l : m.boundary) poly += std::abs(loop_area(l));
  // The traced outline chamfers the four corners; the mesh cannot follow them.
  EXPECT_NEAR(area, poly, 0.005 * poly);
  for (int v : mesh.boundary_vertices) {
    EXPECT_LT(distance_to_loops(m.boundary, mesh.vertices[v]), 0.1);
  }
}

TEST(Mesh, DiskMeshAreaAndLocation) {
  const Grid2 g = Grid2::centered(120, 0.02);
  const Mask2 m = disk_mask(g, 1.0);
  EXPECT_NEAR(default_target_h(m), 0.005 * 2.0, 0.005 * 2 * g.dx);
  const TriMesh mesh = build_mesh(m, 0.05);
  double area = 0.0;
  for (int t = 0; t < static_cast<int>(mesh.triangles.size()); ++t) area += mesh.area(t);
  EXPECT_NEAR(area, std::numbers::pi, 0.02 * std::numbers::pi);
  for (int t = 0; t < static_cast<int>(mesh.triangles.size()); t += 17) {
    const int found = mesh.locate(mesh.centroid(t));
    EXPECT_EQ(found, t);
  }
  EXPECT_EQ(mesh.locate({3.0, 3.0}), -1);
  EXPECT_GE(mesh.nearest({0.99, 0.0}), 0);
}

TEST(Mesh, OffOutput) {
  testsupport::TempDir tmp;
  const Grid2 g = Grid2::centered(20, 0.1);
  const TriMesh mesh = build_mesh(square_mask(g, 0.5), 0.25);
  write_mesh_off(mesh, tmp / "m.off");
  std::ifstream is(tmp / "m.off");
  std::string magic;
  std::size_t nv = 0, nt = 0, ne = 0;
  is >> magic >> nv >> nt >> ne;
  EXPECT_EQ(magic, "OFF");
  EXPECT_EQ(nv, mesh.vertices.size());
  EXPECT_EQ(nt, mesh.triangles.size());
}

TEST(Mesh, RejectsBadSize) {
  const Grid2 g = Grid2::centered(20, 0.1);
  EXPECT_THROW(build_mesh(square_mask(g, 0.5), 0.0), ValidationError);
}

// ---- assembly ----

TEST(Assembly, SerialAndParallelAgreeAndAreSymmetric) {
  const Grid2 g = Grid2::centered(60, 0.04);
  const TriMesh mesh = build_mesh(disk_mask(g, 1.0), 0.1);
  for (PlaneMode mode : {PlaneMode::plane_stress, PlaneMode::plane_strain}) {
    const ElasticConstants c{1.5, 0.3, mode};
    const Eigen::SparseMatrix<double> ks = assembly::serial(mesh, c);
    const Eigen::SparseMatrix<double> kp = assembly::parallel(mesh, c);
    EXPECT_EQ((ks - kp).norm(), 0.0);
    const Eigen::SparseMatrix<double> kt = ks.transpose();
    EXPECT_LT((ks - kt).norm(), 1e-12 * ks.norm());
  }
}

TEST(Assembly, RigidMotionsAreInTheNullSpace) {
  const Grid2 g = Grid2::centered(60, 0.04);
  const TriMesh mesh = build_mesh(disk_mask(g, 1.0), 0.1);
  const Eigen::SparseMatrix<double> k = assembly::serial(mesh, {1.0, 0.25});
  const auto n = static_cast<Eigen::Index>(mesh.vertices.size());
  Eigen::VectorXd tx = Eigen::VectorXd::Zero(2 * n), rot = tx, stretch = tx;
  for (Eigen::Index v = 0; v < n; ++v) {
    tx(2 * v) = 1.0;
    rot(2 * v) = -mesh.vertices[v].y;
    rot(2 * v + 1) = mesh.vertices[v].x;
    stretch(2 * v) = mesh.vertices[v].x;
  }
  EXPECT_LT((k * tx).norm(), 1e-10 * k.norm());
  EXPECT_LT((k * rot).norm(), 1e-10 * k.norm());
  EXPECT_GT((k * stretch).norm(), 1e-3);
}

// ---- solver ----

TEST(Fem, PatchTestReproducesLinearField) {
  const Grid2 g = Grid2::centered(60, 0.04);
  const TriMesh mesh = build_mesh(disk_mask(g, 1.0), 0.08);
  auto u = [](const Point2& p) {
    return Point2{0.3 * p.x - 0.2 * p.y + 0.05, 0.1 * p.x + 0.4 * p.y - 0.02};
  };
  std::vector<Point2> bv;
  for (int v : mesh.boundary_vertices) bv.push_back(u(mesh.vertices[v]));
  const ElasticConstants c{2.0, 0.3};
  const FemSolution sol = fem_solve(mesh, [](double, double) { return Point2{0, 0}; }, c, &bv);
  for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
    const Point2 e = u(mesh.vertices[v]);
    EXPECT_NEAR(sol.omega[v].x, e.x, 1e-10);
    EXPECT_NEAR(sol.omega[v].y, e.y, 1e-10);
  }
  for (int t = 0; t < static_cast<int>(mesh.triangles.size()); t += 13) {
    const auto s = element_strain(mesh, t, sol.omega);
    EXPECT_NEAR(s[0], 0.3, 1e-10);
    EXPECT_NEAR(s[1], 0.4, 1e-10);
    EXPECT_NEAR(s[2], -0.05, 1e-10);
  }
  EXPECT_LT(sol.relative_residual, 1e-10);
}

TEST(Fem, ManufacturedSolutionOnSquare) {
  // u* vanishes on |x| = a and |y| = a. b = Div(C : d u*) is built by central
  // differences of the closed-form stress, independently of the library.
  const double a = 0.7;
  const ElasticConstants c{1.0, 0.3, PlaneMode::plane_stress};
  auto ustar = [a](double x, double y) {
    const double bub = (a * a - x * x) * (a * a - y * y);
    return Point2{bub, x * bub};
  };
  auto stress = [&](double x, double y) {
    const double px = -2 * x * (a * a - y * y), py = -2 * y * (a * a - x * x);
    const double bub = (a * a - x * x) * (a * a - y * y);
    const double u1x = px, u1y = py, u2x = bub + x * px, u2y = x * py;
    return stress_from_strain(c, u1x, u2y, 0.5 * (u1y + u2x));
  };
  auto b = [&](double x, double y) {
    const double h = 1e-5;
    const auto sxp = stress(x + h, y), sxm = stress(x - h, y);
    const auto syp = stress(x, y + h), sym = stress(x, y - h);
    return Point2{(sxp[0] - sxm[0]) / (2 * h) + (syp[2] - sym[2]) / (2 * h),
                  (sxp[2] - sxm[2]) / (2 * h) + (syp[1] - sym[1]) / (2 * h)};
  };

  const Grid2 g = Grid2::centered(40, 0.04);
  const TriMesh mesh = build_mesh(square_mask(g, a), 0.04);
  std::vector<Point2> bv;
  for (int v : mesh.boundary_vertices) bv.push_back(ustar(mesh.vertices[v].x, mesh.vertices[v].y));
  const FemSolution sol = fem_solve(mesh, b, c, &bv);
  std::vector<Point2> exact;
  for (const Point2& p : mesh.vertices) exact.push_back(ustar(p.x, p.y));
  EXPECT_LT(rel_l2(sol.omega, exact), 0.01);
}

TEST(Fem, RejectsNonFiniteLoadAndBadBoundaryData) {
  const Grid2 g = Grid2::centered(20, 0.1);
  const TriMesh mesh = build_mesh(square_mask(g, 0.5), 0.25);
  const ElasticConstants c{1.0, 0.3};
  EXPECT_THROW(fem_solve(mesh, [](double, double) { return Point2{std::nan(""), 0.0}; }, c),
               ValidationError);
  std::vector<Point2> wrong(1);
  EXPECT_THROW(fem_solve(mesh, [](double, double) { return Point2{0, 0}; }, c, &wrong),
               ValidationError);
}

TEST(Fem, AiryPotentialPartIsMinusNuHessian) {
  // eps - sigma/E = -(nu/E) d^2 psi in plane stress, so d omega should match it.
  AirySpec spec;
  spec.alpha = 15.0;
  // Constant-strain elements converge at first order in h while h stays
  // above the grid spacing, so the grid is kept finer than the mesh.
  spec.grid = Grid2::centered(200, 0.012);
  spec.constants = {1.0, 0.34, PlaneMode::plane_stress};
  const Mask2 disk = disk_mask(spec.grid, 1.0);
  const TensorField2 sf = airy_stress(spec);
  const TensorField2 expected = (-spec.constants.nu / spec.constants.E) * airy_hessian(spec);
  const FemReconstruction coarse = reconstruct_fem(sf, disk, spec.constants, {}, 0.04);
  const FemReconstruction rec = reconstruct_fem(sf, disk, spec.constants, {}, 0.012);
  const double e_coarse = rel_rms_error(coarse.domega, expected, disk);
  const double e_fine = rel_rms_error(rec.domega, expected, disk);
  EXPECT_LT(e_fine, 0.05);
  EXPECT_LT(e_fine, 0.7 * e_coarse);
  EXPECT_LT(rel_rms_error(rec.strain, strain_from_airy(spec), disk), 0.05);

  const HelmholtzReport h = helmholtz_check(sf, rec.domega, disk);
  EXPECT_LT(h.divergence_ratio, 1e-2);
  EXPECT_LT(h.normalized_inner, 0.1);

  // Outside the mask the sampled gradient is left at zero.
  for (std::size_t k = 0; k < disk.inside.size(); ++k) {
    if (!disk.inside[k]) EXPECT_EQ(rec.domega.c11[k], 0.0);
  }
}
