#include "straintomo/sinogram.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include "straintomo/field_io.hpp"

namespace straintomo {

std::string to_string(SinogramKind k) {
  switch (k) {
    case SinogramKind::scalar_integral: return "scalar";
    case SinogramKind::lrt_integral: return "lrt";
    case SinogramKind::average_strain: return "average";
  }
  return "lrt";
}

SinogramKind parse_sinogram_kind(const std::string& s) {
  if (s == "scalar") return SinogramKind::scalar_integral;
  if (s == "lrt") return SinogramKind::lrt_integral;
  if (s == "average") return SinogramKind::average_strain;
  throw ValidationError("unknown sinogram kind: " + s);
}

OffsetSpec default_offsets(const Grid2& grid) {
  grid.validate();
  const double ds = std::min(grid.dx, grid.dy);
  double rmax = 0.0;
  for (double x : {grid.ox, grid.x_max()}) {
    for (double y : {grid.oy, grid.y_max()}) rmax = std::max(rmax, std::hypot(x, y));
  }
  const int half = static_cast<int>(std::ceil(rmax / ds)) + 1;
  return {2 * half + 1, ds};
}

Sinogram::Sinogram(std::vector<double> a, OffsetSpec o, SinogramKind k)
    : angles(std::move(a)), offsets(o), data(angles.size() * static_cast<std::size_t>(o.n_s), 0.0),
      kind(k) {}

double Sinogram::max_abs() const {
  double m = 0.0;
  for (double v : data) m = std::max(m, std::abs(v));
  return m;
}

void validate_angles(const std::vector<double>& angles) {
  if (angles.empty()) throw ValidationError("angle list is empty");
  for (std::size_t a = 0; a < angles.size(); ++a) {
    if (!std::isfinite(angles[a]) || angles[a] < 0.0 || angles[a] >= 2.0 * std::numbers::pi) {
      throw ValidationError("angles must lie in [0, 2pi)");
    }
    if (a > 0 && !(angles[a] > angles[a - 1])) {
      throw ValidationError("angles must be strictly increasing");
    }
  }
}

void Sinogram::validate() const {
  validate_angles(angles);
  if (offsets.n_s < 2 || !(offsets.ds > 0.0)) throw ValidationError("sinogram offsets invalid");
  if (data.size() != angles.size() * static_cast<std::size_t>(offsets.n_s)) {
    throw ValidationError("sinogram data size mismatch");
  }
  require_finite(data, "sinogram");
}

std::vector<double> uniform_angles(int n, double span) {
  if (n < 1) throw ValidationError("need at least one angle");
  std::vector<double> a(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) a[k] = span * k / n;
  return a;
}

std::vector<double> golden_angles(int n, double start) {
  if (n < 1) throw ValidationError("need at least one angle");
  const double two_pi = 2.0 * std::numbers::pi;
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  std::vector<double> a(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    double v = std::fmod(start + k * golden, two_pi);
    if (v < 0.0) v += two_pi;
    a[k] = v;
  }
  std::sort(a.begin(), a.end());
  return a;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

double to_unit_open(std::uint64_t bits) {
  // 53 random bits mapped into (0, 1).
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace

double counter_normal(std::uint64_t seed, std::uint64_t counter) {
  const std::uint64_t key = splitmix64(seed ^ splitmix64(counter));
  const double u1 = to_unit_open(splitmix64(key));
  const double u2 = to_unit_open(splitmix64(key ^ 0xD1B54A32D192ED03ull));
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Sinogram add_gaussian_noise(const Sinogram& sg, double sigma_fraction, std::uint64_t seed) {
  if (!(sigma_fraction >= 0.0)) throw ValidationError("noise fraction must be >= 0");
  Sinogram out = sg;
  if (sigma_fraction == 0.0) return out;
  const double sigma = sigma_fraction * sg.max_abs();
  const auto n = static_cast<std::int64_t>(out.data.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t k = 0; k < n; ++k) {
    out.data[k] += sigma * counter_normal(seed, static_cast<std::uint64_t>(k));
  }
  return out;
}

void write_sinogram(const Sinogram& sg, const std::filesystem::path& path) {
  sg.validate();
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ValidationError("cannot open for writing: " + path.string());
  os << "SGM1 " << to_string(sg.kind) << ' ' << sg.n_angles() << ' ' << sg.n_s() << ' '
     << format_exact(sg.offsets.ds) << '\n';
  write_le_doubles(os, sg.angles.data(), sg.angles.size());
  write_le_doubles(os, sg.data.data(), sg.data.size());
  if (!os) throw ValidationError("write failed: " + path.string());
}

Sinogram read_sinogram(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ValidationError("cannot open for reading: " + path.string());
  std::string line;
  if (!std::getline(is, line)) throw ValidationError("SGM1: missing header");
  std::istringstream hs(line);
  std::string magic, kind;
  int n_theta = 0;
  OffsetSpec off;
  if (!(hs >> magic >> kind >> n_theta >> off.n_s >> off.ds) || magic != "SGM1") {
    throw ValidationError("SGM1: malformed header");
  }
  if (n_theta < 1 || off.n_s < 2 || !(off.ds > 0.0)) throw ValidationError("SGM1: bad dimensions");
  std::vector<double> angles(static_cast<std::size_t>(n_theta));
  read_le_doubles(is, angles.data(), angles.size(), "SGM1");
  Sinogram sg(std::move(angles), off, parse_sinogram_kind(kind));
  read_le_doubles(is, sg.data.data(), sg.data.size(), "SGM1");
  if (is.peek() != std::char_traits<char>::eof()) throw ValidationError("SGM1: trailing bytes");
  sg.validate();
  return sg;
}

Sinogram read_sinogram_csv(const std::filesystem::path& path, SinogramKind kind) {
  std::ifstream is(path);
  if (!is) throw ValidationError("cannot open for reading: " + path.string());
  std::string line;
  if (!std::getline(is, line)) throw ValidationError("sinogram CSV: empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "theta,s,value") throw ValidationError("sinogram CSV: expected header theta,s,value");

  struct Row {
    double theta, s, value;
  };
  std::vector<Row> rows;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream ls(line);
    Row r{};
    char c1 = 0, c2 = 0;
    if (!(ls >> r.theta >> c1 >> r.s >> c2 >> r.value) || c1 != ',' || c2 != ',') {
      throw ValidationError("sinogram CSV: malformed row: " + line);
    }
    rows.push_back(r);
  }
  if (rows.empty()) throw ValidationError("sinogram CSV: no data rows");

  std::vector<double> thetas, offsets;
  for (const Row& r : rows) {
    thetas.push_back(r.theta);
    offsets.push_back(r.s);
  }
  auto unique_sorted = [](std::vector<double>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  };
  unique_sorted(thetas);
  unique_sorted(offsets);
  const int n_s = static_cast<int>(offsets.size());
  if (n_s < 2) throw ValidationError("sinogram CSV: need at least two offsets");
  const double ds = (offsets.back() - offsets.front()) / (n_s - 1);
  OffsetSpec off{n_s, ds};
  for (int k = 0; k < n_s; ++k) {
    if (std::abs(offsets[k] - off.s(k)) > 1e-6 * ds) {
      throw ValidationError("sinogram CSV: offsets must be uniform and symmetric about 0");
    }
  }
  if (rows.size() != thetas.size() * offsets.size()) {
    throw ValidationError("sinogram CSV: incomplete (theta, s) table");
  }
  Sinogram sg(thetas, off, kind);
  std::vector<unsigned char> seen(sg.data.size(), 0);
  for (const Row& r : rows) {
    const auto a = std::lower_bound(thetas.begin(), thetas.end(), r.theta) - thetas.begin();
    const auto k = static_cast<long>(std::lround(r.s / ds + 0.5 * (n_s - 1)));
    const std::size_t idx = static_cast<std::size_t>(a) * n_s + static_cast<std::size_t>(k);
    if (seen[idx]) throw ValidationError("sinogram CSV: duplicate (theta, s) entry");
    seen[idx] = 1;
    sg.data[idx] = r.value;
  }
  sg.validate();
  return sg;
}

void write_sinogram_csv(const Sinogram& sg, const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw ValidationError("cannot open for writing: " + path.string());
  os << "theta,s,value\n";
  for (int a = 0; a < sg.n_angles(); ++a) {
    const auto r = sg.row(a);
    for (int k = 0; k < sg.n_s(); ++k) {
      os << format_exact(sg.angles[a]) << ',' << format_exact(sg.s(k)) << ','
         << format_exact(r[k]) << '\n';
    }
  }
}

}  // namespace straintomo
