// Parallel-beam sinograms: (angle, offset)-indexed ray data and its file formats.
//
// Ray (theta, s) is the line { s * xi_perp + t * xi }, xi = (cos theta, sin theta),
// xi_perp = (-sin theta, cos theta), measured about the physical origin.
//
// SGM1 file: ASCII header `SGM1 <kind> <n_theta> <n_s> <ds>\n`, then n_theta
// little-endian doubles (angles, radians), then n_theta*n_s doubles, one row
// per angle. kind is one of scalar, lrt, average.
#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "straintomo/fields.hpp"

namespace straintomo {

enum class SinogramKind { scalar_integral, lrt_integral, average_strain };

std::string to_string(SinogramKind k);
SinogramKind parse_sinogram_kind(const std::string& s);

/// Detector offsets s_k = (k - (n_s - 1)/2) * ds, symmetric about zero.
struct OffsetSpec {
  int n_s = 0;
  double ds = 0.0;

  [[nodiscard]] double s(int k) const { return (k - 0.5 * (n_s - 1)) * ds; }
  [[nodiscard]] double s_max() const { return 0.5 * (n_s - 1) * ds; }
};

/// ds = min(dx, dy); n_s odd and large enough to cover every grid corner.
OffsetSpec default_offsets(const Grid2& grid);

struct Sinogram {
  std::vector<double> angles;
  OffsetSpec offsets;
  std::vector<double> data;  // n_angles x n_s, row per angle
  SinogramKind kind = SinogramKind::lrt_integral;

  Sinogram() = default;
  Sinogram(std::vector<double> angles, OffsetSpec offsets, SinogramKind kind);

  [[nodiscard]] int n_angles() const { return static_cast<int>(angles.size()); }
  [[nodiscard]] int n_s() const { return offsets.n_s; }
  [[nodiscard]] double s(int k) const { return offsets.s(k); }
  [[nodiscard]] std::span<const double> row(int a) const {
    return {data.data() + static_cast<std::size_t>(a) * offsets.n_s,
            static_cast<std::size_t>(offsets.n_s)};
  }
  [[nodiscard]] std::span<double> row(int a) {
    return {data.data() + static_cast<std::size_t>(a) * offsets.n_s,
            static_cast<std::size_t>(offsets.n_s)};
  }
  [[nodiscard]] double max_abs() const;

  /// Angles strictly increasing in [0, 2pi), n_s >= 2, ds > 0, finite data.
  void validate() const;
};

/// Validates an angle list: nonempty, strictly increasing, within [0, 2pi).
void validate_angles(const std::vector<double>& angles);

/// n equally spaced angles over [0, span).
std::vector<double> uniform_angles(int n, double span);

/// n angles advancing by the golden angle pi (3 - sqrt 5) modulo 2pi from
/// `start`, returned sorted.
std::vector<double> golden_angles(int n, double start = 0.0);

/// Adds i.i.d. N(0, (sigma_fraction * max|data|)^2) noise. Sample k uses a
/// counter-based stream keyed on (seed, k), so results do not depend on
/// thread count or evaluation order.
Sinogram add_gaussian_noise(const Sinogram& sg, double sigma_fraction, std::uint64_t seed);

/// Standard normal deviate number `counter` of stream `seed`.
double counter_normal(std::uint64_t seed, std::uint64_t counter);

void write_sinogram(const Sinogram& sg, const std::filesystem::path& path);
Sinogram read_sinogram(const std::filesystem::path& path);

/// CSV with header `theta,s,value`; rows may come in any order but must form
/// a complete (angle, offset) table with uniform, zero-symmetric offsets.
Sinogram read_sinogram_csv(const std::filesystem::path& path, SinogramKind kind);
void write_sinogram_csv(const Sinogram& sg, const std::filesystem::path& path);

}  // namespace straintomo
