#include "straintomo/mask.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <unordered_map>

namespace straintomo {

namespace {

// Edge midpoints are addressed in doubled lattice coordinates so that every
// crossing has an exact integer key.
struct Key {
  int a;
  int b;
};

std::int64_t pack(Key k) {
  return (static_cast<std::int64_t>(k.a) << 32) ^ static_cast<std::uint32_t>(k.b);
}

}  // namespace

std::vector<Loop> trace_boundary(const Grid2& grid, const std::vector<unsigned char>& inside) {
  if (inside.size() != grid.size()) throw ValidationError("trace_boundary: indicator size mismatch");

  auto val = [&](int i, int j) -> bool {
    if (i < 0 || j < 0 || i >= grid.nx || j >= grid.ny) return false;
    return inside[grid.index(i, j)] != 0;
  };

  std::unordered_map<std::int64_t, std::vector<Key>> adj;
  std::unordered_map<std::int64_t, Key> keys;
  auto link = [&](Key p, Key q) {
    adj[pack(p)].push_back(q);
    adj[pack(q)].push_back(p);
    keys[pack(p)] = p;
    keys[pack(q)] = q;
  };

  for (int j = -1; j < grid.ny; ++j) {
    for (int i = -1; i < grid.nx; ++i) {
      const bool bl = val(i, j);
      const bool br = val(i + 1, j);
      const bool tr = val(i + 1, j + 1);
      const bool tl = val(i, j + 1);
      const Key bottom{2 * i + 1, 2 * j};
      const Key right{2 * i + 2, 2 * j + 1};
      const Key top{2 * i + 1, 2 * j + 2};
      const Key left{2 * i, 2 * j + 1};

      if (bl == tr && br == tl && bl != br) {
        // Saddle: keep inside samples 4-connected only.
        if (bl) {
          link(bottom, left);
          link(right, top);
        } else {
          link(bottom, right);
          link(top, left);
        }
        continue;
      }
      Key hits[2];
      int n = 0;
      if (bl != br) hits[n++] = bottom;
      if (br != tr) hits[n++] = right;
      if (tl != tr) hits[n++] = top;
      if (bl != tl && n < 2) hits[n++] = left;
      if (n == 2) link(hits[0], hits[1]);
    }
  }

  std::vector<Loop> loops;
  std::unordered_map<std::int64_t, bool> visited;
  for (const auto& [start_id, start_key] : keys) {
    if (visited[start_id]) continue;
    Loop loop;
    Key prev = start_key;
    Key cur = start_key;
    for (;;) {
      const std::int64_t id = pack(cur);
      visited[id] = true;
      loop.push_back({grid.ox + 0.5 * cur.a * grid.dx, grid.oy + 0.5 * cur.b * grid.dy});
      const auto& nb = adj[id];
      Key next = nb[0];
      if (pack(next) == pack(prev) || visited[pack(next)]) next = nb[1];
      if (visited[pack(next)]) break;
      prev = cur;
      cur = next;
    }
    if (loop.size() >= 3) loops.push_back(std::move(loop));
  }
  // Deterministic ordering: by lowest vertex, then x.
  std::sort(loops.begin(), loops.end(), [](const Loop& p, const Loop& q) {
    auto lo = [](const Loop& l) {
      return *std::min_element(l.begin(), l.end(), [](const Point2& u, const Point2& v) {
        return u.y < v.y || (u.y == v.y && u.x < v.x);
      });
    };
    const Point2 a = lo(p);
    const Point2 b = lo(q);
    return a.y < b.y || (a.y == b.y && a.x < b.x);
  });
  return loops;
}

Mask2 mask_from_predicate(const Grid2& grid, const std::function<bool(double, double)>& pred) {
  grid.validate();
  Mask2 m;
  m.grid = grid;
  m.inside.assign(grid.size(), 0);
  for (int j = 0; j < grid.ny; ++j) {
    for (int i = 0; i < grid.nx; ++i) {
      m.inside[grid.index(i, j)] = pred(grid.x(i), grid.y(j)) ? 1 : 0;
    }
  }
  m.boundary = trace_boundary(grid, m.inside);
  return m;
}

Mask2 disk_mask(const Grid2& grid, double radius, double cx, double cy) {
  return mask_from_predicate(grid, [=](double x, double y) {
    return (x - cx) * (x - cx) + (y - cy) * (y - cy) <= radius * radius;
  });
}

Mask2 full_mask(const Grid2& grid) {
  return mask_from_predicate(grid, [](double, double) { return true; });
}

Mask2 mask_from_support(const TensorField2& f, double tol) {
  if (!(tol >= 0.0)) throw ValidationError("mask_from_support: tol must be >= 0");
  double max_mag = 0.0;
  for (std::size_t k = 0; k < f.c11.size(); ++k) max_mag = std::max(max_mag, frobenius_at(f, k));
  if (max_mag == 0.0) throw ValidationError("mask_from_support: field is identically zero");
  Mask2 m;
  m.grid = f.grid;
  m.inside.assign(f.grid.size(), 0);
  const double thresh = tol * max_mag;
  for (std::size_t k = 0; k < f.c11.size(); ++k) {
    m.inside[k] = frobenius_at(f, k) > thresh ? 1 : 0;
  }
  m.boundary = trace_boundary(f.grid, m.inside);
  return m;
}

bool point_in_loops(const std::vector<Loop>& loops, const Point2& p) {
  bool in = false;
  for (const Loop& loop : loops) {
    const std::size_t n = loop.size();
    for (std::size_t a = 0, b = n - 1; a < n; b = a++) {
      const Point2& u = loop[a];
      const Point2& v = loop[b];
      if ((u.y > p.y) != (v.y > p.y)) {
        const double xc = u.x + (p.y - u.y) * (v.x - u.x) / (v.y - u.y);
        if (p.x < xc) in = !in;
      }
    }
  }
  return in;
}

bool Mask2::contains(const Point2& p) const { return point_in_loops(boundary, p); }

double chord_length(const std::vector<Loop>& loops, const Point2& origin, const Point2& dir) {
  const Point2 nrm{-dir.y, dir.x};
  std::vector<double> ts;
  for (const Loop& loop : loops) {
    const std::size_t n = loop.size();
    for (std::size_t a = 0, b = n - 1; a < n; b = a++) {
      const Point2& u = loop[b];
      const Point2& v = loop[a];
      const double du = (u.x - origin.x) * nrm.x + (u.y - origin.y) * nrm.y;
      const double dv = (v.x - origin.x) * nrm.x + (v.y - origin.y) * nrm.y;
      // Half-open test so a vertex on the line is counted once.
      if ((du > 0.0) == (dv > 0.0)) continue;
      const double w = du / (du - dv);
      const double px = u.x + w * (v.x - u.x);
      const double py = u.y + w * (v.y - u.y);
      ts.push_back((px - origin.x) * dir.x + (py - origin.y) * dir.y);
    }
  }
  std::sort(ts.begin(), ts.end());
  double len = 0.0;
  for (std::size_t k = 0; k + 1 < ts.size(); k += 2) len += ts[k + 1] - ts[k];
  return len;
}

double distance_to_loops(const std::vector<Loop>& loops, const Point2& p, Point2* nearest) {
  double best = std::numeric_limits<double>::infinity();
  for (const Loop& loop : loops) {
    const std::size_t n = loop.size();
    for (std::size_t a = 0, b = n - 1; a < n; b = a++) {
      const Point2& u = loop[b];
      const Point2& v = loop[a];
      const double ex = v.x - u.x;
      const double ey = v.y - u.y;
      const double len2 = ex * ex + ey * ey;
      double t = len2 > 0.0 ? ((p.x - u.x) * ex + (p.y - u.y) * ey) / len2 : 0.0;
      t = std::clamp(t, 0.0, 1.0);
      const Point2 q{u.x + t * ex, u.y + t * ey};
      const double d = std::hypot(p.x - q.x, p.y - q.y);
      if (d < best) {
        best = d;
        if (nearest) *nearest = q;
      }
    }
  }
  return best;
}

double loop_area(const Loop& loop) {
  double a = 0.0;
  const std::size_t n = loop.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    a += loop[j].x * loop[i].y - loop[i].x * loop[j].y;
  }
  return 0.5 * a;
}

}  // namespace straintomo
