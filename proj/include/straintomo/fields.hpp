// Grid-sampled scalar and symmetric-tensor fields, masks and error metrics.
#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace straintomo {

/// Input that violates a documented precondition (CLI exit code 1).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A computation that could not produce a trustworthy result (CLI exit code 2).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

/// Regular sampling lattice. Sample (i, j) sits at (ox + i*dx, oy + j*dy);
/// storage is x-fastest, index = j*nx + i.
struct Grid2 {
  int nx = 0;
  int ny = 0;
  double dx = 1.0;
  double dy = 1.0;
  double ox = 0.0;
  double oy = 0.0;

  [[nodiscard]] std::size_t size() const { return static_cast<std::size_t>(nx) * ny; }
  [[nodiscard]] std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(j) * nx + i;
  }
  [[nodiscard]] double x(int i) const { return ox + i * dx; }
  [[nodiscard]] double y(int j) const { return oy + j * dy; }
  [[nodiscard]] double x_max() const { return x(nx - 1); }
  [[nodiscard]] double y_max() const { return y(ny - 1); }

  /// Throws ValidationError unless nx, ny >= 2 and dx, dy > 0.
  void validate() const;

  /// n x n grid with spacing `spacing`, centred on the origin.
  static Grid2 centered(int n, double spacing);

  friend bool operator==(const Grid2&, const Grid2&) = default;
};

struct ScalarField2 {
  Grid2 grid;
  std::vector<double> values;

  ScalarField2() = default;
  explicit ScalarField2(const Grid2& g) : grid(g), values(g.size(), 0.0) {}
  ScalarField2(const Grid2& g, std::vector<double> v);

  [[nodiscard]] double at(int i, int j) const { return values[grid.index(i, j)]; }
  double& at(int i, int j) { return values[grid.index(i, j)]; }
};

/// Symmetric 2x2 tensor field; only c11, c22 and c12 are stored.
struct TensorField2 {
  Grid2 grid;
  std::vector<double> c11;
  std::vector<double> c22;
  std::vector<double> c12;

  TensorField2() = default;
  explicit TensorField2(const Grid2& g)
      : grid(g), c11(g.size(), 0.0), c22(g.size(), 0.0), c12(g.size(), 0.0) {}

  [[nodiscard]] std::array<const std::vector<double>*, 3> components() const {
    return {&c11, &c22, &c12};
  }
  [[nodiscard]] std::array<std::vector<double>*, 3> components() {
    return {&c11, &c22, &c12};
  }
  [[nodiscard]] ScalarField2 component(int k) const;
  [[nodiscard]] ScalarField2 trace() const;
};

struct VectorField2 {
  ScalarField2 x;
  ScalarField2 y;
};

/// Closed polygon; the last vertex connects back to the first.
using Loop = std::vector<Point2>;

/// Domain indicator on a grid together with its traced outline. The outline
/// may consist of several loops (holes, disjoint parts); point membership
/// follows the even-odd rule.
struct Mask2 {
  Grid2 grid;
  std::vector<unsigned char> inside;
  std::vector<Loop> boundary;

  [[nodiscard]] std::size_t count_inside() const;
  [[nodiscard]] bool contains(const Point2& p) const;
};

// ---- element-wise helpers ----

TensorField2 operator+(const TensorField2& a, const TensorField2& b);
TensorField2 operator-(const TensorField2& a, const TensorField2& b);
TensorField2 operator*(double s, const TensorField2& a);
ScalarField2 operator-(const ScalarField2& a, const ScalarField2& b);

void require_same_grid(const Grid2& a, const Grid2& b, const char* what);
void require_finite(const std::vector<double>& v, const char* what);

/// sqrt(c11^2 + c22^2 + 2 c12^2) at sample k.
double frobenius_at(const TensorField2& f, std::size_t k);

/// Frobenius inner product summed over the mask, c12 counted twice.
double masked_inner(const TensorField2& a, const TensorField2& b, const Mask2& mask);

/// Root-mean-square over the mask of a scalar field.
double masked_rms(const ScalarField2& f, const Mask2& mask);

/// Samples a closed-form tensor field on a grid.
TensorField2 sample_tensor(const Grid2& grid,
                           const std::function<std::array<double, 3>(double, double)>& fn);
ScalarField2 sample_scalar(const Grid2& grid, const std::function<double(double, double)>& fn);

// ---- metrics ----

/// RMS of (a - b) over all components inside the mask, divided by the RMS of
/// the reference b. Frobenius weighting (c12 counted twice).
double rel_rms_error(const TensorField2& a, const TensorField2& b, const Mask2& mask);

/// RMS Frobenius magnitude of f outside the mask divided by the maximum
/// Frobenius magnitude inside it. Zero when nothing lies outside.
double exterior_ratio(const TensorField2& f, const Mask2& mask);

struct ReconReport {
  double rel_rms_error = 0.0;
  double exterior_interior_ratio = 0.0;
  std::array<double, 3> per_component_max_error{0.0, 0.0, 0.0};
  std::vector<std::pair<std::string, std::string>> metadata;
};

/// Fills every metric of a report comparing `recon` against `reference`.
ReconReport make_report(const TensorField2& recon, const TensorField2& reference,
                        const Mask2& mask);

}  // namespace straintomo
