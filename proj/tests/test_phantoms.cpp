#include <cmath>

#include <gtest/gtest.h>

#include "straintomo/fields.hpp"
#include "straintomo/mask.hpp"
#include "straintomo/material.hpp"
#include "straintomo/phantoms.hpp"
#include "straintomo/spectral.hpp"
#include "test_support.hpp"

using namespace straintomo;

namespace {

// Closed-form psi for the oracle: two opposite-sign Gaussians at x = -1/4, +1/4.
double psi_exact(double a, double x, double y) {
  return std::exp(-a * ((x + 0.25) * (x + 0.25) + y * y)) -
         std::exp(-a * ((x - 0.25) * (x - 0.25) + y * y));
}

}  // namespace

// ---- material ----

TEST(Material, StressStrainRoundTripBothModes) {
  for (PlaneMode mode : {PlaneMode::plane_stress, PlaneMode::plane_strain}) {
    for (double nu : {-0.5, 0.0, 0.3, 0.49}) {
      const ElasticConstants c{2.5, nu, mode};
      const auto s = stress_from_strain(c, 0.3, -0.7, 0.2);
      const auto e = strain_from_stress(c, s[0], s[1], s[2]);
      EXPECT_NEAR(e[0], 0.3, 1e-13);
      EXPECT_NEAR(e[1], -0.7, 1e-13);
      EXPECT_NEAR(e[2], 0.2, 1e-13);
    }
  }
}

TEST(Material, PlaneStrainMatchesThreeDimensionalHooke) {
  // 3D isotropic Hooke with e33 = 0, evaluated with Lame constants.
  const double E = 3.0, nu = 0.27;
  const double lambda = E * nu / ((1 + nu) * (1 - 2 * nu));
  const double mu = E / (2 * (1 + nu));
  const double e11 = 0.1, e22 = -0.04, e12 = 0.07;
  const auto s = stress_from_strain({E, nu, PlaneMode::plane_strain}, e11, e22, e12);
  EXPECT_NEAR(s[0], lambda * (e11 + e22) + 2 * mu * e11, 1e-14);
  EXPECT_NEAR(s[1], lambda * (e11 + e22) + 2 * mu * e22, 1e-14);
  EXPECT_NEAR(s[2], 2 * mu * e12, 1e-14);
}

TEST(Material, PlaneStressHasZeroOutOfPlaneStress) {
  // Recover e33 from s33 = 0 in 3D and check the in-plane stresses agree.
  const double E = 1.7, nu = 0.33;
  const double lambda = E * nu / ((1 + nu) * (1 - 2 * nu));
  const double mu = E / (2 * (1 + nu));
  const double e11 = -0.02, e22 = 0.05, e12 = 0.01;
  const double e33 = -lambda * (e11 + e22) / (lambda + 2 * mu);
  const double tr = e11 + e22 + e33;
  const auto s = stress_from_strain({E, nu, PlaneMode::plane_stress}, e11, e22, e12);
  EXPECT_NEAR(s[0], lambda * tr + 2 * mu * e11, 1e-14);
  EXPECT_NEAR(s[1], lambda * tr + 2 * mu * e22, 1e-14);
}

TEST(Material, ValidatesConstantsAndModes) {
  EXPECT_THROW((ElasticConstants{0.0, 0.3}.validate()), ValidationError);
  EXPECT_THROW((ElasticConstants{1.0, 0.5}.validate()), ValidationError);
  EXPECT_THROW((ElasticConstants{1.0, -1.0}.validate()), ValidationError);
  EXPECT_EQ(parse_plane_mode("plane_strain"), PlaneMode::plane_strain);
  EXPECT_THROW(parse_plane_mode("3d"), ValidationError);
}

// ---- Airy ----

TEST(Airy, DerivativesMatchFiniteDifferences) {
  const double a = 18.0, h = 1e-4;
  for (double x : {-0.4, -0.1, 0.05, 0.3}) {
    for (double y : {-0.2, 0.0, 0.15}) {
      const auto d = airy_derivatives(a, x, y);
      EXPECT_NEAR(d.psi, psi_exact(a, x, y), 1e-15);
      const double fxx =
          (psi_exact(a, x + h, y) - 2 * psi_exact(a, x, y) + psi_exact(a, x - h, y)) / (h * h);
      const double fyy =
          (psi_exact(a, x, y + h) - 2 * psi_exact(a, x, y) + psi_exact(a, x, y - h)) / (h * h);
      const double fxy = (psi_exact(a, x + h, y + h) - psi_exact(a, x + h, y - h) -
                          psi_exact(a, x - h, y + h) + psi_exact(a, x - h, y - h)) /
                         (4 * h * h);
      const double fx = (psi_exact(a, x + h, y) - psi_exact(a, x - h, y)) / (2 * h);
      EXPECT_NEAR(d.px, fx, 1e-6);
      EXPECT_NEAR(d.pxx, fxx, 1e-4);
      EXPECT_NEAR(d.pyy, fyy, 1e-4);
      EXPECT_NEAR(d.pxy, fxy, 1e-4);
    }
  }
}

TEST(Airy, StressIsDivergenceFree) {
  // Closed-form third derivatives cancel; check with finite differences of the stress.
  const double a = 18.0, h = 1e-5;
  auto sig = [&](double x, double y) {
    const auto d = airy_derivatives(a, x, y);
    return std::array<double, 3>{d.pyy, d.pxx, -d.pxy};
  };
  for (double x : {-0.3, 0.0, 0.2}) {
    for (double y : {-0.1, 0.25}) {
      const double div1 = (sig(x + h, y)[0] - sig(x - h, y)[0]) / (2 * h) +
                          (sig(x, y + h)[2] - sig(x, y - h)[2]) / (2 * h);
      const double div2 = (sig(x + h, y)[2] - sig(x - h, y)[2]) / (2 * h) +
                          (sig(x, y + h)[1] - sig(x, y - h)[1]) / (2 * h);
      EXPECT_NEAR(div1, 0.0, 1e-4);
      EXPECT_NEAR(div2, 0.0, 1e-4);
    }
  }
}

TEST(Airy, SampledFieldsAreConsistent) {
  AirySpec spec;
  spec.grid = Grid2::centered(64, 2.4 / 64);
  spec.constants = {2.0, 0.3, PlaneMode::plane_stress};
  const TensorField2 sigma = airy_stress(spec);
  const TensorField2 hess = airy_hessian(spec);
  const TensorField2 eps = strain_from_airy(spec);
  const TensorField2 eps2 = strain_from_stress(spec.constants, sigma);
  for (std::size_t k = 0; k < sigma.c11.size(); ++k) {
    EXPECT_EQ(sigma.c11[k], hess.c22[k]);
    EXPECT_EQ(sigma.c22[k], hess.c11[k]);
    EXPECT_EQ(sigma.c12[k], -hess.c12[k]);
    EXPECT_NEAR(eps.c11[k], eps2.c11[k], 1e-15);
    EXPECT_NEAR(eps.c12[k], eps2.c12[k], 1e-15);
  }
}

TEST(Airy, SpectralPathMatchesAnalytic) {
  AirySpec spec;
  spec.grid = Grid2::centered(128, 2.4 / 128);
  const TensorField2 analytic = strain_from_airy(spec);
  const TensorField2 spectral = strain_from_airy(airy_potential(spec), spec.constants, {});
  EXPECT_LT(rel_rms_error(spectral, analytic, disk_mask(spec.grid, 1.0)), 1e-6);
}

TEST(Airy, RejectsBadAlpha) {
  AirySpec spec;
  spec.grid = Grid2::centered(16, 0.1);
  spec.alpha = 0.0;
  EXPECT_THROW(airy_stress(spec), ValidationError);
  spec.alpha = -2.0;
  EXPECT_THROW(strain_from_airy(spec), ValidationError);
}

// ---- axisymmetric disk ----

TEST(Axisym, PolarStrainsAtCentreAndRim) {
  for (double nu : {0.0, 0.25, 0.34, 0.45}) {
    const auto c = axisym_polar(nu, 0.0);
    EXPECT_NEAR(c[0], (7 + 5 * nu) / 12.0 - 1.0, 1e-15);
    EXPECT_NEAR(c[1], c[0], 1e-15);
    const auto rim = axisym_polar(nu, 1.0);
    EXPECT_NEAR(rim[0], -nu / 6.0, 1e-15);
    EXPECT_NEAR(rim[1], 1.0 / 6.0, 1e-15);
  }
}

TEST(Axisym, FieldIsIncompatible) {
  // A residual strain: d(r e_tt)/dr - e_rr = 2 r (1 - r), not zero.
  const double nu = 0.34, h = 1e-6;
  for (double r : {0.1, 0.4, 0.75}) {
    const double d =
        ((r + h) * axisym_polar(nu, r + h)[1] - (r - h) * axisym_polar(nu, r - h)[1]) / (2 * h);
    EXPECT_NEAR(d - axisym_polar(nu, r)[0], 2 * r * (1 - r), 1e-8);
  }
}

TEST(Axisym, PolarStressIsInEquilibriumAndTractionFree) {
  const double h = 1e-6;
  for (double nu : {0.1, 0.3, 0.34}) {
    const double f = 1.0 / (1.0 - nu * nu);
    auto srr = [&](double r) {
      const auto e = axisym_polar(nu, r);
      return f * (e[0] + nu * e[1]);
    };
    auto stt = [&](double r) {
      const auto e = axisym_polar(nu, r);
      return f * (e[1] + nu * e[0]);
    };
    EXPECT_NEAR(srr(1.0), 0.0, 1e-15);
    for (double r : {0.2, 0.5, 0.9}) {
      const double eq = (srr(r + h) - srr(r - h)) / (2 * h) + (srr(r) - stt(r)) / r;
      EXPECT_NEAR(eq, 0.0, 1e-8);
    }
  }
}

TEST(Axisym, CartesianFieldRotatesPolarStrains) {
  const double nu = 0.34;
  const Grid2 g = Grid2::centered(41, 0.06);
  const TensorField2 f = axisym_phantom(nu, g);
  for (int j = 0; j < g.ny; j += 5) {
    for (int i = 0; i < g.nx; i += 3) {
      const double x = g.x(i), y = g.y(j), r = std::hypot(x, y);
      const std::size_t k = g.index(i, j);
      if (r > 1.0) {
        EXPECT_EQ(frobenius_at(f, k), 0.0);
        continue;
      }
      const auto e = axisym_polar(nu, r);
      // Trace and determinant are rotation invariants.
      EXPECT_NEAR(f.c11[k] + f.c22[k], e[0] + e[1], 1e-14);
      EXPECT_NEAR(f.c11[k] * f.c22[k] - f.c12[k] * f.c12[k], e[0] * e[1], 1e-14);
      if (r > 0.0) {
        // Radial direction is an eigenvector with eigenvalue e_rr.
        const double cx = x / r, cy = y / r;
        EXPECT_NEAR(f.c11[k] * cx + f.c12[k] * cy, e[0] * cx, 1e-14);
        EXPECT_NEAR(f.c12[k] * cx + f.c22[k] * cy, e[0] * cy, 1e-14);
      }
    }
  }
}

TEST(Axisym, HydrostaticAddsOnlyInsideMask) {
  const Grid2 g = Grid2::centered(30, 0.08);
  const TensorField2 f = axisym_phantom(0.3, g);
  const Mask2 m = mask_from_support(f);
  const TensorField2 h = add_hydrostatic(f, m, 0.2);
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double add = m.inside[k] ? 0.2 : 0.0;
    EXPECT_DOUBLE_EQ(h.c11[k], f.c11[k] + add);
    EXPECT_DOUBLE_EQ(h.c22[k], f.c22[k] + add);
    EXPECT_EQ(h.c12[k], f.c12[k]);
  }
}

TEST(Axisym, RejectsBadPoisson) {
  EXPECT_THROW(axisym_phantom(0.5, Grid2::centered(8, 0.3)), ValidationError);
}
