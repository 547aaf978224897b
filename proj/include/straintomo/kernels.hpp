// Projection and back-projection kernels.
//
// Each kernel exists twice: `serial::` is the plain reference loop kept for
// testing and benchmarking, `parallel::` is the OpenMP version used by the
// library. Both produce bit-identical results: the parallel forward projector
// splits over angles (one output row each) and the parallel back-projector
// splits over image rows, so no floating-point reduction is reordered.
#pragma once

#include <span>
#include <vector>

#include "straintomo/fields.hpp"
#include "straintomo/sinogram.hpp"

namespace straintomo::kernels {

/// Bilinear sample of an x-fastest plane with zero extension beyond the grid.
double sample_bilinear(const Grid2& g, const double* plane, double x, double y);

/// Line integral of `plane` along ray (theta, s) with step `dt`.
double ray_integral(const Grid2& g, const double* plane, double cos_t, double sin_t, double s,
                    double dt);

/// Integration step used by the projectors: min(dx, dy) / 2.
double default_step(const Grid2& g);

/// Per-angle directional weights for back-projection: out_c += w[c][a] * q_a.
struct BackprojectionWeights {
  std::vector<std::vector<double>> per_channel;  // channel -> angle -> weight
};

namespace serial {

/// Scalar Radon transform of one plane into `out` (n_angles x n_s).
void radon(const Grid2& g, std::span<const double> plane, std::span<const double> angles,
           const OffsetSpec& off, std::span<double> out);

/// LRT of a tensor field: for each angle, projects
/// cos^2 c11 + 2 sin cos c12 + sin^2 c22.
void lrt(const TensorField2& f, std::span<const double> angles, const OffsetSpec& off,
         std::span<double> out);

/// Linear-interpolating back-projection of `rows` (n_angles x n_s) onto g.
void backproject(const Grid2& g, std::span<const double> rows, std::span<const double> angles,
                 const OffsetSpec& off, const BackprojectionWeights& w,
                 std::span<std::vector<double>> outs);

}  // namespace serial

namespace parallel {

void radon(const Grid2& g, std::span<const double> plane, std::span<const double> angles,
           const OffsetSpec& off, std::span<double> out);

void lrt(const TensorField2& f, std::span<const double> angles, const OffsetSpec& off,
         std::span<double> out);

void backproject(const Grid2& g, std::span<const double> rows, std::span<const double> angles,
                 const OffsetSpec& off, const BackprojectionWeights& w,
                 std::span<std::vector<double>> outs);

}  // namespace parallel

}  // namespace straintomo::kernels
