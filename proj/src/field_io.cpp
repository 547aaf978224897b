#include "straintomo/field_io.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

#include "straintomo/mask.hpp"

namespace straintomo {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ValidationError("cannot open for writing: " + path.string());
  return os;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ValidationError("cannot open for reading: " + path.string());
  return is;
}

void write_header(std::ostream& os, int ncomp, const Grid2& g) {
  os << "STF1 " << ncomp << ' ' << g.nx << ' ' << g.ny << ' ' << format_exact(g.dx) << ' '
     << format_exact(g.dy) << ' ' << format_exact(g.ox) << ' ' << format_exact(g.oy) << '\n';
}

}  // namespace

std::string format_exact(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_le_doubles(std::ostream& os, const double* data, std::size_t n) {
  if constexpr (std::endian::native == std::endian::little) {
    os.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(n * sizeof(double)));
  } else {
    for (std::size_t k = 0; k < n; ++k) {
      auto bits = std::bit_cast<std::uint64_t>(data[k]);
      unsigned char b[8];
      for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(bits >> (8 * i));
      os.write(reinterpret_cast<const char*>(b), 8);
    }
  }
}

void read_le_doubles(std::istream& is, double* data, std::size_t n, const char* what) {
  for (std::size_t k = 0; k < n; ++k) {
    unsigned char b[8];
    if (!is.read(reinterpret_cast<char*>(b), 8)) {
      throw ValidationError(std::string(what) + ": truncated payload");
    }
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    data[k] = std::bit_cast<double>(bits);
    if (!std::isfinite(data[k])) throw ValidationError(std::string(what) + ": non-finite value");
  }
}

void write_field(const ScalarField2& f, const std::filesystem::path& path) {
  require_finite(f.values, "write_field");
  auto os = open_out(path);
  write_header(os, 1, f.grid);
  write_le_doubles(os, f.values.data(), f.values.size());
  if (!os) throw ValidationError("write failed: " + path.string());
}

void write_field(const TensorField2& f, const std::filesystem::path& path) {
  auto os = open_out(path);
  write_header(os, 3, f.grid);
  for (const auto* c : f.components()) {
    require_finite(*c, "write_field");
    write_le_doubles(os, c->data(), c->size());
  }
  if (!os) throw ValidationError("write failed: " + path.string());
}

AnyField read_field(const std::filesystem::path& path) {
  auto is = open_in(path);
  std::string line;
  if (!std::getline(is, line)) throw ValidationError("STF1: missing header");
  std::istringstream hs(line);
  std::string magic;
  int ncomp = 0;
  Grid2 g;
  if (!(hs >> magic >> ncomp >> g.nx >> g.ny >> g.dx >> g.dy >> g.ox >> g.oy) || magic != "STF1") {
    throw ValidationError("STF1: malformed header");
  }
  std::string extra;
  if (hs >> extra) throw ValidationError("STF1: trailing tokens in header");
  g.validate();
  if (ncomp != 1 && ncomp != 3) throw ValidationError("STF1: ncomp must be 1 or 3");

  AnyField out;
  if (ncomp == 1) {
    ScalarField2 f(g);
    read_le_doubles(is, f.values.data(), f.values.size(), "STF1");
    out = std::move(f);
  } else {
    TensorField2 f(g);
    for (auto* c : f.components()) read_le_doubles(is, c->data(), c->size(), "STF1");
    out = std::move(f);
  }
  if (is.peek() != std::char_traits<char>::eof()) {
    throw ValidationError("STF1: payload longer than header declares");
  }
  return out;
}

TensorField2 read_tensor_field(const std::filesystem::path& path) {
  auto f = read_field(path);
  if (auto* t = std::get_if<TensorField2>(&f)) return std::move(*t);
  throw ValidationError("expected a tensor field (ncomp=3): " + path.string());
}

ScalarField2 read_scalar_field(const std::filesystem::path& path) {
  auto f = read_field(path);
  if (auto* s = std::get_if<ScalarField2>(&f)) return std::move(*s);
  throw ValidationError("expected a scalar field (ncomp=1): " + path.string());
}

void write_field_csv(const TensorField2& f, const std::filesystem::path& path) {
  auto os = open_out(path);
  os << "x,y,c11,c22,c12\n";
  const Grid2& g = f.grid;
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const std::size_t k = g.index(i, j);
      os << format_exact(g.x(i)) << ',' << format_exact(g.y(j)) << ',' << format_exact(f.c11[k])
         << ',' << format_exact(f.c22[k]) << ',' << format_exact(f.c12[k]) << '\n';
    }
  }
}

void write_field_csv(const ScalarField2& f, const std::filesystem::path& path) {
  auto os = open_out(path);
  os << "x,y,value\n";
  const Grid2& g = f.grid;
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      os << format_exact(g.x(i)) << ',' << format_exact(g.y(j)) << ','
         << format_exact(f.at(i, j)) << '\n';
    }
  }
}

void write_mask_polygon(const Mask2& mask, const std::filesystem::path& path) {
  auto os = open_out(path);
  os << "loop,x,y\n";
  for (std::size_t l = 0; l < mask.boundary.size(); ++l) {
    for (const Point2& p : mask.boundary[l]) {
      os << l << ',' << format_exact(p.x) << ',' << format_exact(p.y) << '\n';
    }
  }
}

Mask2 read_mask_polygon(const Grid2& grid, const std::filesystem::path& path) {
  auto is = open_in(path);
  std::string line;
  if (!std::getline(is, line) || line.rfind("loop,x,y", 0) != 0) {
    throw ValidationError("mask polygon: expected header loop,x,y");
  }
  std::map<long, Loop> loops;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    long id = 0;
    char c1 = 0, c2 = 0;
    Point2 p;
    if (!(ls >> id >> c1 >> p.x >> c2 >> p.y) || c1 != ',' || c2 != ',') {
      throw ValidationError("mask polygon: malformed row: " + line);
    }
    loops[id].push_back(p);
  }
  Mask2 m;
  m.grid = grid;
  for (auto& [id, loop] : loops) {
    if (loop.size() < 3) throw ValidationError("mask polygon: degenerate loop");
    m.boundary.push_back(std::move(loop));
  }
  if (m.boundary.empty()) throw ValidationError("mask polygon: no loops");
  m.inside.assign(grid.size(), 0);
  for (int j = 0; j < grid.ny; ++j) {
    for (int i = 0; i < grid.nx; ++i) {
      m.inside[grid.index(i, j)] = point_in_loops(m.boundary, {grid.x(i), grid.y(j)}) ? 1 : 0;
    }
  }
  return m;
}

}  // namespace straintomo
