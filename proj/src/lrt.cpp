#include "straintomo/lrt.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "straintomo/fft.hpp"
#include "straintomo/kernels.hpp"
#include "straintomo/mask.hpp"

namespace straintomo {

namespace {

constexpr double kPi = std::numbers::pi;

void check_offsets_cover(const Grid2& g, const std::vector<const std::vector<double>*>& planes,
                         const OffsetSpec& off) {
  if (off.n_s < 2 || !(off.ds > 0.0)) throw ValidationError("offsets: need n_s >= 2 and ds > 0");
  double vmax = 0.0;
  for (const auto* p : planes) {
    for (double v : *p) vmax = std::max(vmax, std::abs(v));
  }
  if (vmax == 0.0) return;
  const double tol = 1e-12 * vmax;
  double rmax = 0.0;
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const std::size_t k = g.index(i, j);
      for (const auto* p : planes) {
        if (std::abs((*p)[k]) > tol) {
          rmax = std::max(rmax, std::hypot(g.x(i), g.y(j)));
          break;
        }
      }
    }
  }
  if (rmax > off.s_max() + 0.5 * off.ds) {
    throw ValidationError("offset range does not cover the field support");
  }
}

void check_reconstruction_input(const Sinogram& sg, const Grid2& grid) {
  sg.validate();
  grid.validate();
  if (sg.n_angles() < 2) throw ValidationError("reconstruction needs at least 2 angles");
  if (sg.kind == SinogramKind::average_strain) {
    throw ValidationError("average-strain sinograms must be converted with average_to_lrt first");
  }
}

void require_half_turn(const std::vector<double>& angles) {
  const double span = angles.back() - angles.front();
  const double mean_gap = span / static_cast<double>(angles.size() - 1);
  if (span + mean_gap < kPi * (1.0 - 1e-9)) {
    throw ValidationError("tensor reconstruction needs angles spanning at least 180 degrees");
  }
}

}  // namespace

Sinogram radon_forward(const ScalarField2& f, const std::vector<double>& angles,
                       const OffsetSpec& offsets) {
  f.grid.validate();
  require_finite(f.values, "radon_forward");
  validate_angles(angles);
  check_offsets_cover(f.grid, {&f.values}, offsets);
  Sinogram sg(angles, offsets, SinogramKind::scalar_integral);
  kernels::parallel::radon(f.grid, f.values, sg.angles, offsets, sg.data);
  return sg;
}

Sinogram lrt_forward(const TensorField2& eps, const std::vector<double>& angles,
                     const OffsetSpec& offsets) {
  eps.grid.validate();
  for (const auto* c : eps.components()) require_finite(*c, "lrt_forward");
  validate_angles(angles);
  check_offsets_cover(eps.grid, {&eps.c11, &eps.c22, &eps.c12}, offsets);
  Sinogram sg(angles, offsets, SinogramKind::lrt_integral);
  kernels::parallel::lrt(eps, sg.angles, offsets, sg.data);
  return sg;
}

std::vector<double> chord_lengths(const Sinogram& layout, const Mask2& mask) {
  if (mask.boundary.empty()) throw ValidationError("mask has no outline");
  double area = 0.0;
  for (const Loop& l : mask.boundary) area += std::abs(loop_area(l));
  if (!(area > 0.0)) throw ValidationError("mask outline is degenerate");
  std::vector<double> L(layout.data.size());
  const int n_s = layout.n_s();
#pragma omp parallel for schedule(dynamic, 1)
  for (int a = 0; a < layout.n_angles(); ++a) {
    const double c = std::cos(layout.angles[a]);
    const double s = std::sin(layout.angles[a]);
    for (int k = 0; k < n_s; ++k) {
      const double off = layout.s(k);
      L[static_cast<std::size_t>(a) * n_s + k] =
          chord_length(mask.boundary, {-off * s, off * c}, {c, s});
    }
  }
  return L;
}

Sinogram average_to_lrt(const Sinogram& avg, const Mask2& mask) {
  avg.validate();
  if (avg.kind != SinogramKind::average_strain) {
    throw ValidationError("average_to_lrt expects an average-strain sinogram");
  }
  const auto L = chord_lengths(avg, mask);
  Sinogram out = avg;
  out.kind = SinogramKind::lrt_integral;
  for (std::size_t k = 0; k < out.data.size(); ++k) out.data[k] = L[k] > 0.0 ? avg.data[k] * L[k] : 0.0;
  return out;
}

Sinogram lrt_to_average(const Sinogram& lrt, const Mask2& mask) {
  lrt.validate();
  if (lrt.kind != SinogramKind::lrt_integral) {
    throw ValidationError("lrt_to_average expects an LRT sinogram");
  }
  const auto L = chord_lengths(lrt, mask);
  Sinogram out = lrt;
  out.kind = SinogramKind::average_strain;
  for (std::size_t k = 0; k < out.data.size(); ++k) out.data[k] = L[k] > 0.0 ? lrt.data[k] / L[k] : 0.0;
  return out;
}

AngularQuadrature angular_quadrature(const std::vector<double>& angles) {
  validate_angles(angles);
  AngularQuadrature q;
  q.period = angles.back() >= kPi - 1e-12 ? 2.0 * kPi : kPi;
  const std::size_t n = angles.size();
  q.gap_weights.resize(n);
  if (n == 1) {
    q.gap_weights[0] = q.period;
    return q;
  }
  for (std::size_t a = 0; a < n; ++a) {
    const double prev = a == 0 ? angles[n - 1] - q.period : angles[a - 1];
    const double next = a + 1 == n ? angles[0] + q.period : angles[a + 1];
    q.gap_weights[a] = 0.5 * (next - prev);
  }
  return q;
}

std::vector<double> fbp_angle_weights(const std::vector<double>& angles) {
  auto q = angular_quadrature(angles);
  for (double& w : q.gap_weights) w *= kPi / q.period;
  return q.gap_weights;
}

std::vector<double> ramp_filter(const Sinogram& sg, RampWindow window) {
  const int n_s = sg.n_s();
  int P = 2 * n_s;
  if (P % 2) ++P;
  const double ds = sg.offsets.ds;

  // Band-limited ramp from its sampled spatial kernel, so the DC term is exact.
  std::vector<fft::cplx> h(static_cast<std::size_t>(P));
  for (int m = 0; m < P; ++m) {
    const int n = m <= P / 2 ? m : m - P;
    double v = 0.0;
    if (n == 0) {
      v = 1.0 / (4.0 * ds * ds);
    } else if (n % 2 != 0) {
      v = -1.0 / (kPi * kPi * static_cast<double>(n) * n * ds * ds);
    }
    h[m] = v;
  }
  fft::transform_rows(h, P, 1, fft::Direction::forward);
  std::vector<double> H(static_cast<std::size_t>(P));
  for (int m = 0; m < P; ++m) {
    const int n = m <= P / 2 ? m : m - P;
    double win = 1.0;
    if (window == RampWindow::cosine) win = std::cos(0.5 * kPi * std::abs(n) / (0.5 * P));
    // ds: the discrete convolution approximates an integral over s.
    H[m] = h[m].real() * ds * win / P;
  }

  const int rows = sg.n_angles();
  std::vector<fft::cplx> buf(static_cast<std::size_t>(rows) * P);
  for (int a = 0; a < rows; ++a) {
    const auto r = sg.row(a);
    std::copy(r.begin(), r.end(), buf.begin() + static_cast<std::ptrdiff_t>(a) * P);
  }
  fft::transform_rows(buf, P, rows, fft::Direction::forward);
  for (int a = 0; a < rows; ++a) {
    for (int m = 0; m < P; ++m) buf[static_cast<std::size_t>(a) * P + m] *= H[m];
  }
  fft::transform_rows(buf, P, rows, fft::Direction::backward);
  std::vector<double> out(sg.data.size());
  for (int a = 0; a < rows; ++a) {
    for (int k = 0; k < n_s; ++k) {
      out[static_cast<std::size_t>(a) * n_s + k] = buf[static_cast<std::size_t>(a) * P + k].real();
    }
  }
  // Finite input can still overflow in the transform.
  for (double v : out) {
    if (!std::isfinite(v)) throw NumericalError("ramp filter overflowed; sinogram values too large");
  }
  return out;
}

ScalarField2 backproject(const Sinogram& sg, const Grid2& grid, const std::vector<double>& weights) {
  sg.validate();
  grid.validate();
  kernels::BackprojectionWeights w{{weights}};
  std::vector<std::vector<double>> outs(1);
  kernels::parallel::backproject(grid, sg.data, sg.angles, sg.offsets, w, outs);
  return ScalarField2(grid, std::move(outs[0]));
}

ScalarField2 fbp_scalar(const Sinogram& sg, const Grid2& grid, const FbpOptions& opts) {
  check_reconstruction_input(sg, grid);
  const auto q = ramp_filter(sg, opts.window);
  kernels::BackprojectionWeights w{{fbp_angle_weights(sg.angles)}};
  std::vector<std::vector<double>> outs(1);
  kernels::parallel::backproject(grid, q, sg.angles, sg.offsets, w, outs);
  return ScalarField2(grid, std::move(outs[0]));
}

TensorField2 tensor_fbp(const Sinogram& sg, const Grid2& grid, const FbpOptions& opts) {
  check_reconstruction_input(sg, grid);
  require_half_turn(sg.angles);
  const auto q = ramp_filter(sg, opts.window);
  const auto base = fbp_angle_weights(sg.angles);
  kernels::BackprojectionWeights w;
  w.per_channel.assign(3, std::vector<double>(base.size()));
  for (std::size_t a = 0; a < base.size(); ++a) {
    const double c = std::cos(sg.angles[a]);
    const double s = std::sin(sg.angles[a]);
    w.per_channel[0][a] = base[a] * c * c;
    w.per_channel[1][a] = base[a] * s * s;
    w.per_channel[2][a] = base[a] * s * c;
  }
  std::vector<std::vector<double>> outs(3);
  kernels::parallel::backproject(grid, q, sg.angles, sg.offsets, w, outs);
  TensorField2 out(grid);
  out.c11 = std::move(outs[0]);
  out.c22 = std::move(outs[1]);
  out.c12 = std::move(outs[2]);
  return out;
}

ScalarField2 trace_fbp(const Sinogram& sg, const Grid2& grid, const FbpOptions& opts) {
  check_reconstruction_input(sg, grid);
  const auto q = ramp_filter(sg, opts.window);
  auto w = fbp_angle_weights(sg.angles);
  for (std::size_t a = 0; a < w.size(); ++a) {
    const double c = std::cos(sg.angles[a]);
    const double s = std::sin(sg.angles[a]);
    w[a] = w[a] * c * c + w[a] * s * s;
  }
  kernels::BackprojectionWeights bw{{w}};
  std::vector<std::vector<double>> outs(1);
  kernels::parallel::backproject(grid, q, sg.angles, sg.offsets, bw, outs);
  return ScalarField2(grid, std::move(outs[0]));
}

TensorField2 sharafutdinov_inverse(const Sinogram& sg, const Grid2& grid) {
  check_reconstruction_input(sg, grid);
  require_half_turn(sg.angles);
  constexpr double c0 = 0.75;
  constexpr double c1 = -0.25;

  // Zero-extended grid with the target grid in its middle.
  const int px = grid.nx / 2;
  const int py = grid.ny / 2;
  Grid2 big{2 * grid.nx, 2 * grid.ny, grid.dx, grid.dy, grid.ox - px * grid.dx,
            grid.oy - py * grid.dy};

  // Full-circle measure: scale the gap weights to integrate over 2 pi.
  auto quad = angular_quadrature(sg.angles);
  kernels::BackprojectionWeights w;
  w.per_channel.assign(3, std::vector<double>(sg.angles.size()));
  for (std::size_t a = 0; a < sg.angles.size(); ++a) {
    const double wa = quad.gap_weights[a] * (2.0 * kPi / quad.period);
    const double c = std::cos(sg.angles[a]);
    const double s = std::sin(sg.angles[a]);
    w.per_channel[0][a] = wa * c * c;
    w.per_channel[1][a] = wa * s * s;
    w.per_channel[2][a] = wa * s * c;
  }
  std::vector<std::vector<double>> g(3);
  kernels::parallel::backproject(big, sg.data, sg.angles, sg.offsets, w, g);

  const int nx = big.nx;
  const int ny = big.ny;
  const std::size_t n = big.size();
  std::vector<std::vector<fft::cplx>> hat(3, std::vector<fft::cplx>(n));
#pragma omp parallel for schedule(static)
  for (int c = 0; c < 3; ++c) {
    std::copy(g[c].begin(), g[c].end(), hat[c].begin());
    fft::transform_2d(hat[c], nx, ny, fft::Direction::forward);
  }
  for (int my = 0; my < ny; ++my) {
    const double ky = fft::wavenumber(my, ny, big.dy);
    for (int mx = 0; mx < nx; ++mx) {
      const double kx = fft::wavenumber(mx, nx, big.dx);
      const std::size_t k = static_cast<std::size_t>(my) * nx + mx;
      const double k2 = kx * kx + ky * ky;
      if (k2 == 0.0) {
        // |k| = 0 annihilates the mode; the projector term is undefined there.
        hat[0][k] = hat[1][k] = hat[2][k] = 0.0;
        continue;
      }
      const double kabs = std::sqrt(k2);
      const fft::cplx tr = hat[0][k] + hat[1][k];
      const double f = kabs / (2.0 * kPi) / static_cast<double>(n);
      const fft::cplx a11 = c0 * hat[0][k] + c1 * (1.0 - kx * kx / k2) * tr;
      const fft::cplx a22 = c0 * hat[1][k] + c1 * (1.0 - ky * ky / k2) * tr;
      const fft::cplx a12 = c0 * hat[2][k] + c1 * (-kx * ky / k2) * tr;
      hat[0][k] = f * a11;
      hat[1][k] = f * a22;
      hat[2][k] = f * a12;
    }
  }
  TensorField2 out(grid);
  auto comps = out.components();
#pragma omp parallel for schedule(static)
  for (int c = 0; c < 3; ++c) {
    fft::transform_2d(hat[c], nx, ny, fft::Direction::backward);
    auto& dst = *comps[c];
    for (int j = 0; j < grid.ny; ++j) {
      for (int i = 0; i < grid.nx; ++i) {
        dst[grid.index(i, j)] = hat[c][static_cast<std::size_t>(j + py) * nx + (i + px)].real();
      }
    }
  }
  return out;
}

}  // namespace straintomo
