#include "straintomo/spectral.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <utility>

#include "straintomo/fft.hpp"

namespace straintomo {

using fft::cplx;

void SpectralPlan::validate() const {
  if (pad_factor < 1) throw ValidationError("spectral plan: pad_factor must be >= 1");
  if (!(cutoff_fraction > 0.0 && cutoff_fraction <= 1.0)) {
    throw ValidationError("spectral plan: cutoff_fraction must lie in (0, 1]");
  }
}

namespace {

const cplx I{0.0, 1.0};

/// Zero-padded spectrum of one scalar plane.
class Spectrum {
 public:
  Spectrum(const std::vector<double>& values, const Grid2& g, const SpectralPlan& plan)
      : grid_(g), nx_(g.nx * plan.pad_factor), ny_(g.ny * plan.pad_factor) {
    plan.validate();
    if (plan.grid.nx > 0) require_same_grid(plan.grid, g, "spectral operator");
    data_.assign(static_cast<std::size_t>(nx_) * ny_, cplx{});
    for (int j = 0; j < g.ny; ++j) {
      for (int i = 0; i < g.nx; ++i) {
        data_[static_cast<std::size_t>(j) * nx_ + i] = values[g.index(i, j)];
      }
    }
    fft::transform_2d(data_, nx_, ny_, fft::Direction::forward);
    kx_.resize(nx_);
    ky_.resize(ny_);
    for (int m = 0; m < nx_; ++m) kx_[m] = fft::wavenumber(m, nx_, g.dx);
    for (int m = 0; m < ny_; ++m) ky_[m] = fft::wavenumber(m, ny_, g.dy);
    const double kxm = std::abs(fft::wavenumber(nx_ / 2, nx_, g.dx));
    const double kym = std::abs(fft::wavenumber(ny_ / 2, ny_, g.dy));
    const double cut = plan.cutoff_fraction * std::hypot(kxm, kym);
    cut2_ = cut * cut;
    full_ = plan.cutoff_fraction >= 1.0;
  }

  [[nodiscard]] int nx() const { return nx_; }
  [[nodiscard]] int ny() const { return ny_; }
  [[nodiscard]] const Grid2& grid() const { return grid_; }
  [[nodiscard]] double kx(int m) const { return kx_[m]; }
  [[nodiscard]] double ky(int m) const { return ky_[m]; }
  [[nodiscard]] cplx operator[](std::size_t k) const { return data_[k]; }
  [[nodiscard]] bool kept(int mx, int my) const {
    return full_ || kx_[mx] * kx_[mx] + ky_[my] * ky_[my] <= cut2_;
  }

 private:
  Grid2 grid_;
  int nx_, ny_;
  std::vector<cplx> data_;
  std::vector<double> kx_, ky_;
  double cut2_ = 0.0;
  bool full_ = true;
};

/// Evaluates modal(k, kx, ky) on the kept modes of the padded lattice, inverts
/// and crops back to the original grid.
template <typename Fn>
std::vector<double> synthesize(const Spectrum& ref, Fn&& modal) {
  const int nx = ref.nx();
  const int ny = ref.ny();
  std::vector<cplx> out(static_cast<std::size_t>(nx) * ny);
  for (int my = 0; my < ny; ++my) {
    for (int mx = 0; mx < nx; ++mx) {
      const std::size_t k = static_cast<std::size_t>(my) * nx + mx;
      out[k] = ref.kept(mx, my) ? modal(k, ref.kx(mx), ref.ky(my)) : cplx{};
    }
  }
  fft::transform_2d(out, nx, ny, fft::Direction::backward);
  const Grid2& g = ref.grid();
  const double norm = 1.0 / (static_cast<double>(nx) * ny);
  std::vector<double> values(g.size());
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      values[g.index(i, j)] = out[static_cast<std::size_t>(j) * nx + i].real() * norm;
    }
  }
  return values;
}

std::array<std::optional<Spectrum>, 3> tensor_spectra(const TensorField2& f,
                                                      const SpectralPlan& plan) {
  std::array<std::optional<Spectrum>, 3> s;
  const auto comps = f.components();
#pragma omp parallel for schedule(static)
  for (int c = 0; c < 3; ++c) s[c].emplace(*comps[c], f.grid, plan);
  return s;
}

}  // namespace

ScalarField2 spectral_filter(const ScalarField2& f, const SpectralPlan& plan, const Multiplier& m) {
  Spectrum s(f.values, f.grid, plan);
  return ScalarField2(f.grid, synthesize(s, [&](std::size_t k, double kx, double ky) {
                        return m(kx, ky) * s[k];
                      }));
}

ScalarField2 fft_derivative(const ScalarField2& f, Axis axis, int order, const SpectralPlan& plan) {
  if (order != 1 && order != 2) throw ValidationError("fft_derivative: order must be 1 or 2");
  Spectrum s(f.values, f.grid, plan);
  return ScalarField2(f.grid, synthesize(s, [&](std::size_t k, double kx, double ky) {
                        const double kk = axis == Axis::x ? kx : ky;
                        return (order == 1 ? I * kk : cplx(-kk * kk, 0.0)) * s[k];
                      }));
}

ScalarField2 fft_mixed_derivative(const ScalarField2& f, const SpectralPlan& plan) {
  Spectrum s(f.values, f.grid, plan);
  return ScalarField2(f.grid, synthesize(s, [&](std::size_t k, double kx, double ky) {
                        return -kx * ky * s[k];
                      }));
}

ScalarField2 laplacian(const ScalarField2& f, const SpectralPlan& plan) {
  Spectrum s(f.values, f.grid, plan);
  return ScalarField2(f.grid, synthesize(s, [&](std::size_t k, double kx, double ky) {
                        return -(kx * kx + ky * ky) * s[k];
                      }));
}

ScalarField2 bilaplacian(const ScalarField2& f, const SpectralPlan& plan) {
  Spectrum s(f.values, f.grid, plan);
  return ScalarField2(f.grid, synthesize(s, [&](std::size_t k, double kx, double ky) {
                        const double k2 = kx * kx + ky * ky;
                        return k2 * k2 * s[k];
                      }));
}

VectorField2 divergence(const TensorField2& f, const SpectralPlan& plan) {
  const auto s = tensor_spectra(f, plan);
  const Spectrum& s11 = *s[0];
  const Spectrum& s22 = *s[1];
  const Spectrum& s12 = *s[2];
  VectorField2 out;
  out.x = ScalarField2(f.grid, synthesize(s11, [&](std::size_t k, double kx, double ky) {
                         return I * (kx * s11[k] + ky * s12[k]);
                       }));
  out.y = ScalarField2(f.grid, synthesize(s11, [&](std::size_t k, double kx, double ky) {
                         return I * (kx * s12[k] + ky * s22[k]);
                       }));
  return out;
}

ScalarField2 saint_venant(const TensorField2& f, const SpectralPlan& plan) {
  const auto s = tensor_spectra(f, plan);
  const Spectrum& s11 = *s[0];
  const Spectrum& s22 = *s[1];
  const Spectrum& s12 = *s[2];
  return ScalarField2(f.grid, synthesize(s11, [&](std::size_t k, double kx, double ky) {
                        return -ky * ky * s11[k] - kx * kx * s22[k] + 2.0 * kx * ky * s12[k];
                      }));
}

TensorField2 perp_second_gradient(const ScalarField2& psi, const SpectralPlan& plan) {
  Spectrum s(psi.values, psi.grid, plan);
  TensorField2 out(psi.grid);
  out.c11 = synthesize(s, [&](std::size_t k, double, double ky) { return -ky * ky * s[k]; });
  out.c22 = synthesize(s, [&](std::size_t k, double kx, double) { return -kx * kx * s[k]; });
  out.c12 = synthesize(s, [&](std::size_t k, double kx, double ky) { return kx * ky * s[k]; });
  return out;
}

TensorField2 second_gradient(const ScalarField2& psi, const SpectralPlan& plan) {
  Spectrum s(psi.values, psi.grid, plan);
  TensorField2 out(psi.grid);
  out.c11 = synthesize(s, [&](std::size_t k, double kx, double) { return -kx * kx * s[k]; });
  out.c22 = synthesize(s, [&](std::size_t k, double, double ky) { return -ky * ky * s[k]; });
  out.c12 = synthesize(s, [&](std::size_t k, double kx, double ky) { return -kx * ky * s[k]; });
  return out;
}

TensorField2 sym_gradient_spectral(const VectorField2& u, const SpectralPlan& plan) {
  require_same_grid(u.x.grid, u.y.grid, "sym_gradient_spectral");
  Spectrum sx(u.x.values, u.x.grid, plan);
  Spectrum sy(u.y.values, u.y.grid, plan);
  TensorField2 out(u.x.grid);
  out.c11 = synthesize(sx, [&](std::size_t k, double kx, double) { return I * kx * sx[k]; });
  out.c22 = synthesize(sx, [&](std::size_t k, double, double ky) { return I * ky * sy[k]; });
  out.c12 = synthesize(sx, [&](std::size_t k, double kx, double ky) {
    return 0.5 * I * (ky * sx[k] + kx * sy[k]);
  });
  return out;
}

double divergence_rms(const TensorField2& f, const SpectralPlan& plan) {
  const VectorField2 d = divergence(f, plan);
  double sum = 0.0;
  for (std::size_t k = 0; k < d.x.values.size(); ++k) {
    sum += d.x.values[k] * d.x.values[k] + d.y.values[k] * d.y.values[k];
  }
  return std::sqrt(sum / static_cast<double>(d.x.values.size()));
}

double gradient_scale(const TensorField2& f, const SpectralPlan& plan) {
  const auto s = tensor_spectra(f, plan);
  double sum = 0.0;
  const double weight[3] = {1.0, 1.0, 2.0};
  for (int c = 0; c < 3; ++c) {
    const Spectrum& sc = *s[c];
    const auto gx = synthesize(sc, [&](std::size_t k, double kx, double) { return I * kx * sc[k]; });
    const auto gy = synthesize(sc, [&](std::size_t k, double, double ky) { return I * ky * sc[k]; });
    for (std::size_t k = 0; k < gx.size(); ++k) sum += weight[c] * (gx[k] * gx[k] + gy[k] * gy[k]);
  }
  return std::sqrt(sum / static_cast<double>(f.grid.size()));
}

AiryFromStressResult airy_from_stress(const TensorField2& sigma, const SpectralPlan& plan) {
  const Grid2& g = sigma.grid;
  require_finite(sigma.c12, "airy_from_stress");
  // Column integrals from the top edge: T(i, j) ~ integral of s12 over t > y_j.
  std::vector<double> col(g.size(), 0.0);
  for (int i = 0; i < g.nx; ++i) {
    double above = 0.0;
    for (int j = g.ny - 1; j >= 0; --j) {
      const double v = sigma.c12[g.index(i, j)];
      col[g.index(i, j)] = g.dy * (above + 0.5 * v);
      above += v;
    }
  }
  AiryFromStressResult r;
  r.psi = ScalarField2(g);
  for (int j = 0; j < g.ny; ++j) {
    double left = 0.0;
    for (int i = 0; i < g.nx; ++i) {
      const double v = col[g.index(i, j)];
      r.psi.at(i, j) = g.dx * (left + 0.5 * v);
      left += v;
    }
  }
  const double scale = gradient_scale(sigma, plan);
  r.divergence_ratio = scale > 0.0 ? divergence_rms(sigma, plan) / scale : 0.0;
  r.path_dependent = r.divergence_ratio > kAiryDivergenceTol;
  return r;
}

ScalarField2 biharmonic_residual(const ScalarField2& psi, const TensorField2& sf, double E,
                                 const SpectralPlan& plan) {
  require_same_grid(psi.grid, sf.grid, "biharmonic_residual");
  ScalarField2 lhs = bilaplacian(psi, plan);
  const ScalarField2 rhs = saint_venant(sf, plan);
  for (std::size_t k = 0; k < lhs.values.size(); ++k) lhs.values[k] -= E * rhs.values[k];
  return lhs;
}

}  // namespace straintomo
