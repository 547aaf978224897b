// Closed-form test strain fields.
#pragma once

#include "straintomo/fields.hpp"
#include "straintomo/material.hpp"

namespace straintomo {

struct SpectralPlan;

/// Two-Gaussian Airy potential exp(-a((x+1/4)^2+y^2)) - exp(-a((x-1/4)^2+y^2)).
struct AirySpec {
  double alpha = 15.0;
  ElasticConstants constants{1.0, 0.34, PlaneMode::plane_stress};
  Grid2 grid = Grid2::centered(400, 0.006);

  void validate() const;
};

/// Value and derivatives of the Airy potential at a point.
struct AiryDerivatives {
  double psi, px, py, pxx, pyy, pxy;
};

AiryDerivatives airy_derivatives(double alpha, double x, double y);

ScalarField2 airy_potential(const AirySpec& spec);

/// Equilibrium stress (d_perp)^2 psi: s11 = psi_yy, s22 = psi_xx, s12 = -psi_xy.
TensorField2 airy_stress(const AirySpec& spec);

/// Hessian d^2 psi: (psi_xx, psi_yy, psi_xy).
TensorField2 airy_hessian(const AirySpec& spec);

/// Elastic strain of the Airy phantom from closed-form second derivatives.
TensorField2 strain_from_airy(const AirySpec& spec);

/// Elastic strain for an arbitrary sampled potential via spectral derivatives.
TensorField2 strain_from_airy(const ScalarField2& psi, const ElasticConstants& constants,
                              const SpectralPlan& plan);

/// Traction-free axisymmetric plane-stress strain on the unit disk, zero
/// outside. Cartesian components from the polar closed form.
TensorField2 axisym_phantom(double nu, const Grid2& grid);

/// Polar components (e_rr, e_tt) of the axisymmetric phantom at radius r <= 1.
std::array<double, 2> axisym_polar(double nu, double r);

/// Adds magnitude * I inside the mask.
TensorField2 add_hydrostatic(const TensorField2& f, const Mask2& mask, double magnitude);

}  // namespace straintomo
