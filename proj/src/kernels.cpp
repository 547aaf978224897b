#include "straintomo/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace straintomo::kernels {

double sample_bilinear(const Grid2& g, const double* plane, double x, double y) {
  const double fx = (x - g.ox) / g.dx;
  const double fy = (y - g.oy) / g.dy;
  const double flx = std::floor(fx);
  const double fly = std::floor(fy);
  const int i0 = static_cast<int>(flx);
  const int j0 = static_cast<int>(fly);
  const double tx = fx - flx;
  const double ty = fy - fly;
  if (i0 >= 0 && j0 >= 0 && i0 < g.nx - 1 && j0 < g.ny - 1) {
    const double* p = plane + g.index(i0, j0);
    const double* q = p + g.nx;
    return (1.0 - ty) * ((1.0 - tx) * p[0] + tx * p[1]) + ty * ((1.0 - tx) * q[0] + tx * q[1]);
  }
  if (i0 < -1 || j0 < -1 || i0 >= g.nx || j0 >= g.ny) return 0.0;
  auto at = [&](int i, int j) {
    return (i < 0 || j < 0 || i >= g.nx || j >= g.ny) ? 0.0 : plane[g.index(i, j)];
  };
  return (1.0 - ty) * ((1.0 - tx) * at(i0, j0) + tx * at(i0 + 1, j0)) +
         ty * ((1.0 - tx) * at(i0, j0 + 1) + tx * at(i0 + 1, j0 + 1));
}

namespace {

// Restricts [tmin, tmax] to parameters where p0 + t*d lies within [lo, hi].
bool clip_slab(double p0, double d, double lo, double hi, double& tmin, double& tmax) {
  if (std::abs(d) < 1e-14) return p0 >= lo && p0 <= hi;
  double t0 = (lo - p0) / d;
  double t1 = (hi - p0) / d;
  if (t0 > t1) std::swap(t0, t1);
  tmin = std::max(tmin, t0);
  tmax = std::min(tmax, t1);
  return tmin <= tmax;
}

void backproject_row(const Grid2& g, int j, std::span<const double> rows,
                     std::span<const double> angles, const OffsetSpec& off,
                     const BackprojectionWeights& w, std::span<std::vector<double>> outs) {
  const int n_s = off.n_s;
  const double centre = 0.5 * (n_s - 1);
  const double y = g.y(j);
  const std::size_t base = g.index(0, j);
  const std::size_t channels = outs.size();
  for (std::size_t a = 0; a < angles.size(); ++a) {
    const double c = std::cos(angles[a]);
    const double sn = std::sin(angles[a]);
    const double* row = rows.data() + a * static_cast<std::size_t>(n_s);
    // Fractional detector index, advancing linearly along the image row.
    const double f0 = (-g.ox * sn + y * c) / off.ds + centre;
    const double step = -g.dx * sn / off.ds;
    for (int i = 0; i < g.nx; ++i) {
      const double f = f0 + i * step;
      const double fl = std::floor(f);
      const int k0 = static_cast<int>(fl);
      if (k0 < -1 || k0 >= n_s) continue;
      const double t = f - fl;
      const double lo = k0 >= 0 ? row[k0] : 0.0;
      const double hi = k0 + 1 < n_s ? row[k0 + 1] : 0.0;
      const double q = (1.0 - t) * lo + t * hi;
      for (std::size_t ch = 0; ch < channels; ++ch) {
        outs[ch][base + i] += w.per_channel[ch][a] * q;
      }
    }
  }
}

void check_backprojection_args(const Grid2& g, std::span<const double> rows,
                               std::span<const double> angles, const OffsetSpec& off,
                               const BackprojectionWeights& w,
                               std::span<std::vector<double>> outs) {
  if (rows.size() != angles.size() * static_cast<std::size_t>(off.n_s)) {
    throw ValidationError("backproject: sinogram size mismatch");
  }
  if (w.per_channel.size() != outs.size()) throw ValidationError("backproject: channel mismatch");
  for (std::size_t c = 0; c < outs.size(); ++c) {
    if (w.per_channel[c].size() != angles.size()) {
      throw ValidationError("backproject: weight count mismatch");
    }
    outs[c].assign(g.size(), 0.0);
  }
}

void lrt_plane(const TensorField2& f, double theta, std::vector<double>& plane) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const double w11 = c * c;
  const double w22 = s * s;
  const double w12 = 2.0 * s * c;
  plane.resize(f.c11.size());
  for (std::size_t k = 0; k < plane.size(); ++k) {
    plane[k] = w11 * f.c11[k] + w22 * f.c22[k] + w12 * f.c12[k];
  }
}

void project_angle(const Grid2& g, const double* plane, double theta, const OffsetSpec& off,
                   double* out) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const double dt = default_step(g);
  for (int k = 0; k < off.n_s; ++k) out[k] = ray_integral(g, plane, c, s, off.s(k), dt);
}

}  // namespace

double default_step(const Grid2& g) { return 0.5 * std::min(g.dx, g.dy); }

double ray_integral(const Grid2& g, const double* plane, double cos_t, double sin_t, double s,
                    double dt) {
  const double x0 = -s * sin_t;
  const double y0 = s * cos_t;
  double tmin = -std::numeric_limits<double>::infinity();
  double tmax = std::numeric_limits<double>::infinity();
  // One cell of margin: bilinear support extends a cell past the last sample.
  if (!clip_slab(x0, cos_t, g.ox - g.dx, g.x_max() + g.dx, tmin, tmax)) return 0.0;
  if (!clip_slab(y0, sin_t, g.oy - g.dy, g.y_max() + g.dy, tmin, tmax)) return 0.0;
  const auto k0 = static_cast<long>(std::ceil(tmin / dt));
  const auto k1 = static_cast<long>(std::floor(tmax / dt));
  double sum = 0.0;
  for (long k = k0; k <= k1; ++k) {
    const double t = k * dt;
    sum += sample_bilinear(g, plane, x0 + t * cos_t, y0 + t * sin_t);
  }
  return sum * dt;
}

namespace serial {

void radon(const Grid2& g, std::span<const double> plane, std::span<const double> angles,
           const OffsetSpec& off, std::span<double> out) {
  for (std::size_t a = 0; a < angles.size(); ++a) {
    project_angle(g, plane.data(), angles[a], off, out.data() + a * off.n_s);
  }
}

void lrt(const TensorField2& f, std::span<const double> angles, const OffsetSpec& off,
         std::span<double> out) {
  std::vector<double> plane;
  for (std::size_t a = 0; a < angles.size(); ++a) {
    lrt_plane(f, angles[a], plane);
    project_angle(f.grid, plane.data(), angles[a], off, out.data() + a * off.n_s);
  }
}

void backproject(const Grid2& g, std::span<const double> rows, std::span<const double> angles,
                 const OffsetSpec& off, const BackprojectionWeights& w,
                 std::span<std::vector<double>> outs) {
  check_backprojection_args(g, rows, angles, off, w, outs);
  for (int j = 0; j < g.ny; ++j) backproject_row(g, j, rows, angles, off, w, outs);
}

}  // namespace serial

namespace parallel {

void radon(const Grid2& g, std::span<const double> plane, std::span<const double> angles,
           const OffsetSpec& off, std::span<double> out) {
  const auto n = static_cast<long>(angles.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (long a = 0; a < n; ++a) {
    project_angle(g, plane.data(), angles[a], off, out.data() + a * off.n_s);
  }
}

void lrt(const TensorField2& f, std::span<const double> angles, const OffsetSpec& off,
         std::span<double> out) {
  const auto n = static_cast<long>(angles.size());
#pragma omp parallel
  {
    std::vector<double> plane;
#pragma omp for schedule(dynamic, 1)
    for (long a = 0; a < n; ++a) {
      lrt_plane(f, angles[a], plane);
      project_angle(f.grid, plane.data(), angles[a], off, out.data() + a * off.n_s);
    }
  }
}

void backproject(const Grid2& g, std::span<const double> rows, std::span<const double> angles,
                 const OffsetSpec& off, const BackprojectionWeights& w,
                 std::span<std::vector<double>> outs) {
  check_backprojection_args(g, rows, angles, off, w, outs);
#pragma omp parallel for schedule(static)
  for (int j = 0; j < g.ny; ++j) backproject_row(g, j, rows, angles, off, w, outs);
}

}  // namespace parallel

}  // namespace straintomo::kernels
