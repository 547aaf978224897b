#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "straintomo/elasticity.hpp"
#include "straintomo/field_io.hpp"
#include "straintomo/mask.hpp"

namespace straintomo {

double TriMesh::area(int t) const {
  const auto& tri = triangles[t];
  const Point2& a = vertices[tri[0]];
  const Point2& b = vertices[tri[1]];
  const Point2& c = vertices[tri[2]];
  return 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

Point2 TriMesh::centroid(int t) const {
  const auto& tri = triangles[t];
  return {(vertices[tri[0]].x + vertices[tri[1]].x + vertices[tri[2]].x) / 3.0,
          (vertices[tri[0]].y + vertices[tri[1]].y + vertices[tri[2]].y) / 3.0};
}

namespace {

bool contains(const TriMesh& m, int t, const Point2& p) {
  const auto& tri = m.triangles[t];
  const double eps = -1e-12;
  for (int e = 0; e < 3; ++e) {
    const Point2& a = m.vertices[tri[e]];
    const Point2& b = m.vertices[tri[(e + 1) % 3]];
    const double cross = (b.x - a.x) * (p.y - a.y) - (p.x - a.x) * (b.y - a.y);
    const double scale = std::hypot(b.x - a.x, b.y - a.y);
    if (cross < eps * scale) return false;
  }
  return true;
}

template <typename Fn>
void for_nearby_triangles(const TriMesh& m, const Point2& p, Fn&& fn) {
  const int a = static_cast<int>(std::floor((p.x - m.x0) / m.hx));
  const int b = static_cast<int>(std::floor((p.y - m.y0) / m.hy));
  // Search the centre square first, then its ring, so exact hits are cheap.
  for (int ring = 0; ring <= 1; ++ring) {
    for (int db = -ring; db <= ring; ++db) {
      for (int da = -ring; da <= ring; ++da) {
        if (std::max(std::abs(da), std::abs(db)) != ring) continue;
        const int ia = a + da;
        const int ib = b + db;
        if (ia < 0 || ib < 0 || ia >= m.sx || ib >= m.sy) continue;
        const int t0 = m.square_first_triangle[static_cast<std::size_t>(ib) * m.sx + ia];
        if (t0 < 0) continue;
        if (fn(t0) || fn(t0 + 1)) return;
      }
    }
  }
}

}  // namespace

int TriMesh::locate(const Point2& p) const {
  int found = -1;
  for_nearby_triangles(*this, p, [&](int t) {
    if (contains(*this, t, p)) {
      found = t;
      return true;
    }
    return false;
  });
  return found;
}

int TriMesh::nearest(const Point2& p) const {
  int best = -1;
  double best_d = std::numeric_limits<double>::infinity();
  for_nearby_triangles(*this, p, [&](int t) {
    const Point2 c = centroid(t);
    const double d = std::hypot(c.x - p.x, c.y - p.y);
    if (d < best_d) {
      best_d = d;
      best = t;
    }
    return false;
  });
  return best;
}

double default_target_h(const Mask2& mask) {
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const Loop& l : mask.boundary) {
    for (const Point2& p : l) {
      xmin = std::min(xmin, p.x);
      xmax = std::max(xmax, p.x);
      ymin = std::min(ymin, p.y);
      ymax = std::max(ymax, p.y);
    }
  }
  if (mask.boundary.empty()) throw ValidationError("mask has no outline");
  return 0.005 * std::max(xmax - xmin, ymax - ymin);
}

TriMesh build_mesh(const Mask2& mask, double target_h) {
  if (!(target_h > 0.0)) throw ValidationError("build_mesh: target_h must be > 0");
  if (mask.boundary.empty() || mask.count_inside() == 0) {
    throw ValidationError("build_mesh: empty mask");
  }
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const Loop& l : mask.boundary) {
    for (const Point2& p : l) {
      xmin = std::min(xmin, p.x);
      xmax = std::max(xmax, p.x);
      ymin = std::min(ymin, p.y);
      ymax = std::max(ymax, p.y);
    }
  }
  TriMesh m;
  m.sx = std::max(1, static_cast<int>(std::ceil((xmax - xmin) / target_h - 1e-9)));
  m.sy = std::max(1, static_cast<int>(std::ceil((ymax - ymin) / target_h - 1e-9)));
  m.hx = (xmax - xmin) / m.sx;
  m.hy = (ymax - ymin) / m.sy;
  m.x0 = xmin;
  m.y0 = ymin;

  const int vx = m.sx + 1;
  std::vector<unsigned char> keep(static_cast<std::size_t>(m.sx) * m.sy, 0);
  for (int b = 0; b < m.sy; ++b) {
    for (int a = 0; a < m.sx; ++a) {
      const Point2 c{m.x0 + (a + 0.5) * m.hx, m.y0 + (b + 0.5) * m.hy};
      keep[static_cast<std::size_t>(b) * m.sx + a] = point_in_loops(mask.boundary, c) ? 1 : 0;
    }
  }
  auto kept = [&](int a, int b) {
    return a >= 0 && b >= 0 && a < m.sx && b < m.sy && keep[static_cast<std::size_t>(b) * m.sx + a];
  };

  std::vector<int> vid(static_cast<std::size_t>(vx) * (m.sy + 1), -1);
  auto vertex = [&](int a, int b) {
    int& id = vid[static_cast<std::size_t>(b) * vx + a];
    if (id < 0) {
      id = static_cast<int>(m.vertices.size());
      m.vertices.push_back({m.x0 + a * m.hx, m.y0 + b * m.hy});
    }
    return id;
  };

  m.square_first_triangle.assign(keep.size(), -1);
  for (int b = 0; b < m.sy; ++b) {
    for (int a = 0; a < m.sx; ++a) {
      if (!kept(a, b)) continue;
      const int v00 = vertex(a, b);
      const int v10 = vertex(a + 1, b);
      const int v11 = vertex(a + 1, b + 1);
      const int v01 = vertex(a, b + 1);
      m.square_first_triangle[static_cast<std::size_t>(b) * m.sx + a] =
          static_cast<int>(m.triangles.size());
      m.triangles.push_back({v00, v10, v11});
      m.triangles.push_back({v00, v11, v01});
    }
  }
  if (m.triangles.empty()) throw ValidationError("build_mesh: no squares inside the mask");

  // Boundary vertices: lattice points touching at least one dropped square.
  for (int b = 0; b <= m.sy; ++b) {
    for (int a = 0; a < vx; ++a) {
      const int id = vid[static_cast<std::size_t>(b) * vx + a];
      if (id < 0) continue;
      if (!(kept(a - 1, b - 1) && kept(a, b - 1) && kept(a - 1, b) && kept(a, b))) {
        m.boundary_vertices.push_back(id);
      }
    }
  }
  std::sort(m.boundary_vertices.begin(), m.boundary_vertices.end());

  // Snap onto the outline, reverting snaps that squash a triangle.
  const std::vector<Point2> original = m.vertices;
  std::vector<unsigned char> snapped(m.vertices.size(), 0);
  for (int v : m.boundary_vertices) {
    Point2 q;
    distance_to_loops(mask.boundary, m.vertices[v], &q);
    m.vertices[v] = q;
    snapped[v] = 1;
  }
  const double min_area = 0.2 * 0.5 * m.hx * m.hy;
  for (bool changed = true; changed;) {
    changed = false;
    for (int t = 0; t < static_cast<int>(m.triangles.size()); ++t) {
      if (m.area(t) >= min_area) continue;
      for (int v : m.triangles[t]) {
        if (snapped[v]) {
          m.vertices[v] = original[v];
          snapped[v] = 0;
          changed = true;
        }
      }
    }
  }
  return m;
}

void write_mesh_off(const TriMesh& mesh, const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw ValidationError("cannot open for writing: " + path.string());
  os << "OFF\n" << mesh.vertices.size() << ' ' << mesh.triangles.size() << " 0\n";
  for (const Point2& p : mesh.vertices) {
    os << format_exact(p.x) << ' ' << format_exact(p.y) << " 0\n";
  }
  for (const auto& t : mesh.triangles) os << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
}

}  // namespace straintomo
