// Fourier-domain differential operators on compactly supported grid fields.
//
// Every operator zero-pads the input by `pad_factor` along each axis,
// transforms, applies a multiplier, transforms back and crops. Modes with
// |kappa| > cutoff_fraction * max|kappa| are discarded (brick-wall cutoff).
#pragma once

#include <complex>
#include <functional>

#include "straintomo/fields.hpp"

namespace straintomo {

inline constexpr double kNoisyCutoff = 0.7;

struct SpectralPlan {
  int pad_factor = 2;
  double cutoff_fraction = 1.0;
  /// Optional; when set (nx > 0) inputs must live on this grid.
  Grid2 grid{};

  void validate() const;
};

enum class Axis { x, y };

/// Multiplier m(kx, ky) with angular wavenumbers.
using Multiplier = std::function<std::complex<double>(double kx, double ky)>;

/// Applies an arbitrary Fourier multiplier; the real part of the result is kept.
ScalarField2 spectral_filter(const ScalarField2& f, const SpectralPlan& plan, const Multiplier& m);

/// d^order f / d axis^order, order in {1, 2}.
ScalarField2 fft_derivative(const ScalarField2& f, Axis axis, int order, const SpectralPlan& plan);

/// d^2 f / dx dy in a single pass.
ScalarField2 fft_mixed_derivative(const ScalarField2& f, const SpectralPlan& plan);

ScalarField2 laplacian(const ScalarField2& f, const SpectralPlan& plan);
ScalarField2 bilaplacian(const ScalarField2& f, const SpectralPlan& plan);

/// Row-wise divergence: (d f11/dx + d f12/dy, d f12/dx + d f22/dy).
VectorField2 divergence(const TensorField2& f, const SpectralPlan& plan);

/// W(f) = d2 f11/dy2 + d2 f22/dx2 - 2 d2 f12/dxdy, the single independent
/// Saint-Venant component on the plane.
ScalarField2 saint_venant(const TensorField2& f, const SpectralPlan& plan);

/// (d_perp)^2 psi = (psi_yy, psi_xx, -psi_xy).
TensorField2 perp_second_gradient(const ScalarField2& psi, const SpectralPlan& plan);

/// d^2 psi = (psi_xx, psi_yy, psi_xy).
TensorField2 second_gradient(const ScalarField2& psi, const SpectralPlan& plan);

/// Symmetrised gradient of a vector field.
TensorField2 sym_gradient_spectral(const VectorField2& u, const SpectralPlan& plan);

/// RMS over the grid of |Div f|.
double divergence_rms(const TensorField2& f, const SpectralPlan& plan);

/// RMS over the grid of the full first-derivative tensor of f (Frobenius,
/// shear counted twice). Scale used to normalise divergence checks.
double gradient_scale(const TensorField2& f, const SpectralPlan& plan);

struct AiryFromStressResult {
  ScalarField2 psi;
  /// divergence_rms(sigma) / gradient_scale(sigma).
  double divergence_ratio = 0.0;
  /// Set when the divergence ratio exceeds the tolerance; psi is then
  /// dependent on the integration path.
  bool path_dependent = false;
};

inline constexpr double kAiryDivergenceTol = 1e-2;

/// psi(x, y) = integral of sigma12 over {s < x, t > y}, by cumulative
/// trapezoidal summation from the (x_min, y_max) corner.
AiryFromStressResult airy_from_stress(const TensorField2& sigma, const SpectralPlan& plan = {});

/// Laplacian^2 psi - E * (d2 sf11/dy2 - 2 d2 sf12/dxdy + d2 sf22/dx2).
ScalarField2 biharmonic_residual(const ScalarField2& psi, const TensorField2& sf, double E,
                                 const SpectralPlan& plan);

}  // namespace straintomo
