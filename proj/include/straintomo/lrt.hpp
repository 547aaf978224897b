// Forward ray transforms and filtered back projection for scalar and
// symmetric-tensor fields.
#pragma once

#include <vector>

#include "straintomo/fields.hpp"
#include "straintomo/sinogram.hpp"

namespace straintomo {

/// Scalar Radon transform by bilinear line sampling at step min(dx, dy)/2.
/// Throws ValidationError when the offsets do not reach the field support.
Sinogram radon_forward(const ScalarField2& f, const std::vector<double>& angles,
                       const OffsetSpec& offsets);

/// Longitudinal ray transform: the Radon transform of xi^T eps xi per angle.
Sinogram lrt_forward(const TensorField2& eps, const std::vector<double>& angles,
                     const OffsetSpec& offsets);

/// Chord length L(s, theta) of every ray through the mask outline.
std::vector<double> chord_lengths(const Sinogram& layout, const Mask2& mask);

/// Multiplies path-averaged strain by L; rays missing the domain become 0.
Sinogram average_to_lrt(const Sinogram& avg, const Mask2& mask);

/// Divides ray integrals by L where L > 0; rays missing the domain become 0.
Sinogram lrt_to_average(const Sinogram& lrt, const Mask2& mask);

/// Angular quadrature: half the cyclic gap to each neighbour. The period is
/// 2 pi when any angle reaches pi, otherwise pi. Weights sum to the period.
struct AngularQuadrature {
  std::vector<double> gap_weights;
  double period = 0.0;
};
AngularQuadrature angular_quadrature(const std::vector<double>& angles);

/// Back-projection weights normalised so that scalar FBP is the identity:
/// gap * (pi / period).
std::vector<double> fbp_angle_weights(const std::vector<double>& angles);

enum class RampWindow { ram_lak, cosine };

struct FbpOptions {
  RampWindow window = RampWindow::ram_lak;
};

/// Ram-Lak filtered rows (zero-padded to at least twice n_s), same layout as
/// the input data.
std::vector<double> ramp_filter(const Sinogram& sg, RampWindow window = RampWindow::ram_lak);

/// Unfiltered weighted back-projection: out(x) = sum_a w[a] * p(a, x . xi_perp).
ScalarField2 backproject(const Sinogram& sg, const Grid2& grid, const std::vector<double>& weights);

/// Standard parallel-beam filtered back projection onto `grid`.
ScalarField2 fbp_scalar(const Sinogram& sg, const Grid2& grid, const FbpOptions& opts = {});

/// Solenoidal part of a strain field from its LRT: component-wise FBP with
/// xi xi^T weights.
TensorField2 tensor_fbp(const Sinogram& sg, const Grid2& grid, const FbpOptions& opts = {});

/// Trace of tensor_fbp computed directly as one scalar FBP.
ScalarField2 trace_fbp(const Sinogram& sg, const Grid2& grid, const FbpOptions& opts = {});

/// Solenoidal part via the Fourier-domain form
///   (1/2pi) |k| [c0 + c1 (I - k k^T / |k|^2) tr] g,  c0 = 3/4, c1 = -1/4,
/// where g is the unfiltered xi xi^T back-projection over the full circle,
/// evaluated on a 2x zero-extended grid.
TensorField2 sharafutdinov_inverse(const Sinogram& sg, const Grid2& grid);

}  // namespace straintomo
