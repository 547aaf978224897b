#include "straintomo/fields.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace straintomo {

void Grid2::validate() const {
  if (nx < 2 || ny < 2) {
    throw ValidationError("grid needs at least 2 samples per axis");
  }
  if (!(dx > 0.0) || !(dy > 0.0) || !std::isfinite(dx) || !std::isfinite(dy)) {
    throw ValidationError("grid spacing must be positive and finite");
  }
  if (!std::isfinite(ox) || !std::isfinite(oy)) {
    throw ValidationError("grid origin must be finite");
  }
}

Grid2 Grid2::centered(int n, double spacing) {
  Grid2 g{n, n, spacing, spacing, -0.5 * (n - 1) * spacing, -0.5 * (n - 1) * spacing};
  g.validate();
  return g;
}

ScalarField2::ScalarField2(const Grid2& g, std::vector<double> v) : grid(g), values(std::move(v)) {
  if (values.size() != grid.size()) {
    throw ValidationError("scalar field size does not match its grid");
  }
}

ScalarField2 TensorField2::component(int k) const {
  return ScalarField2(grid, *components()[static_cast<std::size_t>(k)]);
}

ScalarField2 TensorField2::trace() const {
  ScalarField2 out(grid);
  for (std::size_t k = 0; k < out.values.size(); ++k) out.values[k] = c11[k] + c22[k];
  return out;
}

std::size_t Mask2::count_inside() const {
  return static_cast<std::size_t>(std::count(inside.begin(), inside.end(), 1));
}

void require_same_grid(const Grid2& a, const Grid2& b, const char* what) {
  if (!(a == b)) {
    throw ValidationError(std::string(what) + ": grid mismatch");
  }
}

void require_finite(const std::vector<double>& v, const char* what) {
  for (double x : v) {
    if (!std::isfinite(x)) throw ValidationError(std::string(what) + ": non-finite value");
  }
}

namespace {

template <typename Op>
TensorField2 combine(const TensorField2& a, const TensorField2& b, Op op) {
  require_same_grid(a.grid, b.grid, "tensor arithmetic");
  TensorField2 out(a.grid);
  for (std::size_t k = 0; k < a.c11.size(); ++k) {
    out.c11[k] = op(a.c11[k], b.c11[k]);
    out.c22[k] = op(a.c22[k], b.c22[k]);
    out.c12[k] = op(a.c12[k], b.c12[k]);
  }
  return out;
}

}  // namespace

TensorField2 operator+(const TensorField2& a, const TensorField2& b) {
  return combine(a, b, [](double u, double v) { return u + v; });
}

TensorField2 operator-(const TensorField2& a, const TensorField2& b) {
  return combine(a, b, [](double u, double v) { return u - v; });
}

TensorField2 operator*(double s, const TensorField2& a) {
  TensorField2 out = a;
  for (auto* c : out.components()) {
    for (double& v : *c) v *= s;
  }
  return out;
}

ScalarField2 operator-(const ScalarField2& a, const ScalarField2& b) {
  require_same_grid(a.grid, b.grid, "scalar arithmetic");
  ScalarField2 out(a.grid);
  for (std::size_t k = 0; k < out.values.size(); ++k) out.values[k] = a.values[k] - b.values[k];
  return out;
}

double frobenius_at(const TensorField2& f, std::size_t k) {
  return std::sqrt(f.c11[k] * f.c11[k] + f.c22[k] * f.c22[k] + 2.0 * f.c12[k] * f.c12[k]);
}

double masked_inner(const TensorField2& a, const TensorField2& b, const Mask2& mask) {
  require_same_grid(a.grid, b.grid, "inner product");
  require_same_grid(a.grid, mask.grid, "inner product mask");
  double sum = 0.0;
  for (std::size_t k = 0; k < a.c11.size(); ++k) {
    if (!mask.inside[k]) continue;
    sum += a.c11[k] * b.c11[k] + a.c22[k] * b.c22[k] + 2.0 * a.c12[k] * b.c12[k];
  }
  return sum;
}

double masked_rms(const ScalarField2& f, const Mask2& mask) {
  require_same_grid(f.grid, mask.grid, "masked rms");
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t k = 0; k < f.values.size(); ++k) {
    if (!mask.inside[k]) continue;
    sum += f.values[k] * f.values[k];
    ++n;
  }
  return n == 0 ? 0.0 : std::sqrt(sum / static_cast<double>(n));
}

TensorField2 sample_tensor(const Grid2& grid,
                           const std::function<std::array<double, 3>(double, double)>& fn) {
  TensorField2 out(grid);
#pragma omp parallel for schedule(static)
  for (int j = 0; j < grid.ny; ++j) {
    for (int i = 0; i < grid.nx; ++i) {
      const auto v = fn(grid.x(i), grid.y(j));
      const std::size_t k = grid.index(i, j);
      out.c11[k] = v[0];
      out.c22[k] = v[1];
      out.c12[k] = v[2];
    }
  }
  return out;
}

ScalarField2 sample_scalar(const Grid2& grid, const std::function<double(double, double)>& fn) {
  ScalarField2 out(grid);
#pragma omp parallel for schedule(static)
  for (int j = 0; j < grid.ny; ++j) {
    for (int i = 0; i < grid.nx; ++i) out.at(i, j) = fn(grid.x(i), grid.y(j));
  }
  return out;
}

double rel_rms_error(const TensorField2& a, const TensorField2& b, const Mask2& mask) {
  require_same_grid(a.grid, b.grid, "rel_rms_error");
  require_same_grid(a.grid, mask.grid, "rel_rms_error mask");
  double num = 0.0;
  double den = 0.0;
  for (std::size_t k = 0; k < a.c11.size(); ++k) {
    if (!mask.inside[k]) continue;
    const double r11 = a.c11[k] - b.c11[k];
    const double r22 = a.c22[k] - b.c22[k];
    const double r12 = a.c12[k] - b.c12[k];
    num += r11 * r11 + r22 * r22 + 2.0 * r12 * r12;
    den += b.c11[k] * b.c11[k] + b.c22[k] * b.c22[k] + 2.0 * b.c12[k] * b.c12[k];
  }
  if (den == 0.0) {
    throw ValidationError("rel_rms_error: reference field is zero inside the mask");
  }
  // The sample count cancels between the two RMS values.
  return std::sqrt(num / den);
}

double exterior_ratio(const TensorField2& f, const Mask2& mask) {
  require_same_grid(f.grid, mask.grid, "exterior_ratio");
  double max_in = 0.0;
  double sum_out = 0.0;
  std::size_t n_in = 0;
  std::size_t n_out = 0;
  for (std::size_t k = 0; k < f.c11.size(); ++k) {
    const double m = frobenius_at(f, k);
    if (mask.inside[k]) {
      max_in = std::max(max_in, m);
      ++n_in;
    } else {
      sum_out += m * m;
      ++n_out;
    }
  }
  if (n_in == 0) throw ValidationError("exterior_ratio: mask has an empty interior");
  if (n_out == 0 || sum_out == 0.0) return 0.0;
  if (max_in == 0.0) throw NumericalError("exterior_ratio: field vanishes inside the mask");
  return std::sqrt(sum_out / static_cast<double>(n_out)) / max_in;
}

ReconReport make_report(const TensorField2& recon, const TensorField2& reference,
                        const Mask2& mask) {
  ReconReport r;
  r.rel_rms_error = rel_rms_error(recon, reference, mask);
  r.exterior_interior_ratio = exterior_ratio(recon, mask);
  const auto rc = recon.components();
  const auto rf = reference.components();
  for (std::size_t c = 0; c < 3; ++c) {
    double max_err = 0.0;
    double max_ref = 0.0;
    for (std::size_t k = 0; k < recon.c11.size(); ++k) {
      if (!mask.inside[k]) continue;
      max_err = std::max(max_err, std::abs((*rc[c])[k] - (*rf[c])[k]));
      max_ref = std::max(max_ref, std::abs((*rf[c])[k]));
    }
    // Normalised by the largest reference component so the triple is dimensionless.
    r.per_component_max_error[c] = max_err;
    if (max_ref > 0.0) r.per_component_max_error[c] = max_err / max_ref;
  }
  return r;
}

}  // namespace straintomo
