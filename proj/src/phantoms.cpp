#include "straintomo/phantoms.hpp"

#include <cmath>

#include "straintomo/spectral.hpp"

namespace straintomo {

void AirySpec::validate() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ValidationError("alpha must be > 0");
  constants.validate();
  grid.validate();
}

AiryDerivatives airy_derivatives(double alpha, double x, double y) {
  AiryDerivatives d{0, 0, 0, 0, 0, 0};
  // psi = G(x + 1/4) - G(x - 1/4) with G(u) = exp(-alpha (u^2 + y^2)).
  const double shifts[2] = {0.25, -0.25};
  const double signs[2] = {1.0, -1.0};
  for (int k = 0; k < 2; ++k) {
    const double u = x + shifts[k];
    const double G = signs[k] * std::exp(-alpha * (u * u + y * y));
    d.psi += G;
    d.px += -2.0 * alpha * u * G;
    d.py += -2.0 * alpha * y * G;
    d.pxx += (4.0 * alpha * alpha * u * u - 2.0 * alpha) * G;
    d.pyy += (4.0 * alpha * alpha * y * y - 2.0 * alpha) * G;
    d.pxy += 4.0 * alpha * alpha * u * y * G;
  }
  return d;
}

ScalarField2 airy_potential(const AirySpec& spec) {
  spec.validate();
  return sample_scalar(spec.grid,
                       [&](double x, double y) { return airy_derivatives(spec.alpha, x, y).psi; });
}

TensorField2 airy_stress(const AirySpec& spec) {
  spec.validate();
  return sample_tensor(spec.grid, [&](double x, double y) {
    const auto d = airy_derivatives(spec.alpha, x, y);
    return std::array<double, 3>{d.pyy, d.pxx, -d.pxy};
  });
}

TensorField2 airy_hessian(const AirySpec& spec) {
  spec.validate();
  return sample_tensor(spec.grid, [&](double x, double y) {
    const auto d = airy_derivatives(spec.alpha, x, y);
    return std::array<double, 3>{d.pxx, d.pyy, d.pxy};
  });
}

TensorField2 strain_from_airy(const AirySpec& spec) {
  spec.validate();
  return sample_tensor(spec.grid, [&](double x, double y) {
    const auto d = airy_derivatives(spec.alpha, x, y);
    return strain_from_stress(spec.constants, d.pyy, d.pxx, -d.pxy);
  });
}

TensorField2 strain_from_airy(const ScalarField2& psi, const ElasticConstants& constants,
                              const SpectralPlan& plan) {
  constants.validate();
  require_finite(psi.values, "strain_from_airy");
  return strain_from_stress(constants, perp_second_gradient(psi, plan));
}

std::array<double, 2> axisym_polar(double nu, double r) {
  const double common = (1.0 - r) * (1.0 - r);
  const double err = (7.0 + 5.0 * nu + (1.0 + nu) * (9.0 * r - 16.0) * r) / 12.0 - common;
  const double ett = (7.0 + 5.0 * nu + (1.0 + nu) * (3.0 * r - 8.0) * r) / 12.0 - common;
  return {err, ett};
}

TensorField2 axisym_phantom(double nu, const Grid2& grid) {
  if (!(nu > -1.0 && nu < 0.5)) throw ValidationError("nu must lie in (-1, 0.5)");
  grid.validate();
  return sample_tensor(grid, [nu](double x, double y) {
    const double r = std::hypot(x, y);
    if (r > 1.0) return std::array<double, 3>{0.0, 0.0, 0.0};
    const auto [err, ett] = axisym_polar(nu, r);
    // theta is taken as 0 on the axis, where err == ett.
    const double c = r > 0.0 ? x / r : 1.0;
    const double s = r > 0.0 ? y / r : 0.0;
    return std::array<double, 3>{err * c * c + ett * s * s, err * s * s + ett * c * c,
                                 (err - ett) * s * c};
  });
}

TensorField2 add_hydrostatic(const TensorField2& f, const Mask2& mask, double magnitude) {
  require_same_grid(f.grid, mask.grid, "add_hydrostatic");
  TensorField2 out = f;
  for (std::size_t k = 0; k < out.c11.size(); ++k) {
    if (!mask.inside[k]) continue;
    out.c11[k] += magnitude;
    out.c22[k] += magnitude;
  }
  return out;
}

}  // namespace straintomo
