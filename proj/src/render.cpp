#include "straintomo/render.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>

namespace straintomo::render {

Image::Image(int w, int h, Rgb fill) : width(w), height(h), rgb(static_cast<std::size_t>(w) * h * 3) {
  if (w <= 0 || h <= 0) throw ValidationError("image size must be positive");
  for (std::size_t k = 0; k < rgb.size(); k += 3) {
    rgb[k] = fill[0];
    rgb[k + 1] = fill[1];
    rgb[k + 2] = fill[2];
  }
}

void Image::set(int x, int y, Rgb c) {
  if (x < 0 || y < 0 || x >= width || y >= height) return;
  const std::size_t k = (static_cast<std::size_t>(y) * width + x) * 3;
  rgb[k] = c[0];
  rgb[k + 1] = c[1];
  rgb[k + 2] = c[2];
}

Rgb Image::get(int x, int y) const {
  const std::size_t k = (static_cast<std::size_t>(y) * width + x) * 3;
  return {rgb[k], rgb[k + 1], rgb[k + 2]};
}

void Image::fill_rect(int x0, int y0, int x1, int y1, Rgb c) {
  for (int y = y0; y < y1; ++y) {
    for (int x = x0; x < x1; ++x) set(x, y, c);
  }
}

Rgb diverging(double t) {
  if (!std::isfinite(t)) return {0, 0, 0};
  t = std::clamp(t, -1.0, 1.0);
  // Interpolate white towards a dark blue (t < 0) or dark red (t > 0).
  static constexpr double blue[3] = {33, 102, 172};
  static constexpr double red[3] = {178, 24, 43};
  const double* end = t < 0 ? blue : red;
  const double a = std::abs(t);
  Rgb out;
  for (int k = 0; k < 3; ++k) {
    out[k] = static_cast<std::uint8_t>(std::lround(255.0 + a * (end[k] - 255.0)));
  }
  return out;
}

namespace {

const std::map<char, std::array<std::uint8_t, 7>>& font() {
  static const std::map<char, std::array<std::uint8_t, 7>> glyphs = {
      {'0', {0x0E, 0x11, 0x13, 0x15, 0x19, 0x11, 0x0E}},
      {'1', {0x04, 0x0C, 0x04, 0x04, 0x04, 0x04, 0x0E}},
      {'2', {0x0E, 0x11, 0x01, 0x02, 0x04, 0x08, 0x1F}},
      {'3', {0x1F, 0x02, 0x04, 0x02, 0x01, 0x11, 0x0E}},
      {'4', {0x02, 0x06, 0x0A, 0x12, 0x1F, 0x02, 0x02}},
      {'5', {0x1F, 0x10, 0x1E, 0x01, 0x01, 0x11, 0x0E}},
      {'6', {0x06, 0x08, 0x10, 0x1E, 0x11, 0x11, 0x0E}},
      {'7', {0x1F, 0x01, 0x02, 0x04, 0x08, 0x08, 0x08}},
      {'8', {0x0E, 0x11, 0x11, 0x0E, 0x11, 0x11, 0x0E}},
      {'9', {0x0E, 0x11, 0x11, 0x0F, 0x01, 0x02, 0x0C}},
      {'-', {0x00, 0x00, 0x00, 0x1F, 0x00, 0x00, 0x00}},
      {'+', {0x00, 0x04, 0x04, 0x1F, 0x04, 0x04, 0x00}},
      {'.', {0x00, 0x00, 0x00, 0x00, 0x00, 0x0C, 0x0C}},
      {'e', {0x00, 0x00, 0x0E, 0x11, 0x1F, 0x10, 0x0E}},
      {'c', {0x00, 0x00, 0x0E, 0x10, 0x10, 0x11, 0x0E}},
      {'r', {0x00, 0x00, 0x16, 0x19, 0x10, 0x10, 0x10}},
      {'s', {0x00, 0x00, 0x0E, 0x10, 0x0E, 0x01, 0x1E}},
      {'m', {0x00, 0x00, 0x1A, 0x15, 0x15, 0x11, 0x11}},
      {'n', {0x00, 0x00, 0x16, 0x19, 0x11, 0x11, 0x11}},
      {'o', {0x00, 0x00, 0x0E, 0x11, 0x11, 0x11, 0x0E}},
      {'i', {0x04, 0x00, 0x0C, 0x04, 0x04, 0x04, 0x0E}},
      {'x', {0x00, 0x00, 0x11, 0x0A, 0x04, 0x0A, 0x11}},
      {' ', {0, 0, 0, 0, 0, 0, 0}},
  };
  return glyphs;
}

std::string short_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

void draw_line(Image& img, double x0, double y0, double x1, double y1, Rgb c, bool dashed) {
  const int n = static_cast<int>(std::ceil(std::max(std::abs(x1 - x0), std::abs(y1 - y0)))) + 1;
  for (int k = 0; k <= n; ++k) {
    if (dashed && (k / 6) % 2 == 1) continue;
    const double t = static_cast<double>(k) / n;
    const int x = static_cast<int>(std::lround(x0 + t * (x1 - x0)));
    const int y = static_cast<int>(std::lround(y0 + t * (y1 - y0)));
    img.set(x, y, c);
    img.set(x + 1, y, c);
    img.set(x, y + 1, c);
  }
}

}  // namespace

void draw_text(Image& img, int x, int y, const std::string& text, Rgb c, int scale) {
  const auto& glyphs = font();
  for (char ch : text) {
    const auto it = glyphs.find(ch);
    if (it != glyphs.end()) {
      for (int row = 0; row < 7; ++row) {
        for (int col = 0; col < 5; ++col) {
          if (it->second[row] & (0x10 >> col)) {
            img.fill_rect(x + col * scale, y + row * scale, x + (col + 1) * scale,
                          y + (row + 1) * scale, c);
          }
        }
      }
    }
    x += 6 * scale;
  }
}

void write_png(const Image& img, const std::filesystem::path& path) {
  FILE* fp = std::fopen(path.string().c_str(), "wb");
  if (!fp) throw ValidationError("cannot open for writing: " + path.string());
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info || setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    std::fclose(fp);
    throw NumericalError("libpng failed writing " + path.string());
  }
  png_init_io(png, fp);
  png_set_IHDR(png, info, static_cast<png_uint_32>(img.width), static_cast<png_uint_32>(img.height),
               8, PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int y = 0; y < img.height; ++y) {
    png_write_row(png, const_cast<png_bytep>(img.rgb.data() + static_cast<std::size_t>(y) * img.width * 3));
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  std::fclose(fp);
}

void write_heatmap(const std::vector<ScalarField2>& panels, const std::filesystem::path& path,
                   const Mask2* outline, const std::vector<std::string>& labels) {
  if (panels.empty()) throw ValidationError("write_heatmap: no panels");
  const Grid2& g = panels.front().grid;
  for (const auto& p : panels) require_same_grid(p.grid, g, "write_heatmap");
  double vmax = 0.0;
  for (const auto& p : panels) {
    for (double v : p.values) {
      if (std::isfinite(v)) vmax = std::max(vmax, std::abs(v));
    }
  }
  const double range = vmax > 0.0 ? vmax : 1.0;

  // Upscale small grids, downsample large ones, so panels are ~300-600 px.
  const int longest = std::max(g.nx, g.ny);
  const double zoom = longest < 300 ? std::floor(300.0 / longest) : 1.0;
  const int stride = longest > 600 ? static_cast<int>(std::ceil(longest / 600.0)) : 1;
  const int pw = static_cast<int>(g.nx * zoom) / stride;
  const int ph = static_cast<int>(g.ny * zoom) / stride;
  const int margin = 12;
  const int footer = 70;
  const int n = static_cast<int>(panels.size());
  Image img(n * (pw + margin) + margin, ph + 2 * margin + footer);

  for (int p = 0; p < n; ++p) {
    const int ox = margin + p * (pw + margin);
    const auto& vals = panels[p].values;
    for (int py = 0; py < ph; ++py) {
      // Image rows run top-down, y increases upwards.
      const int j = std::min(g.ny - 1, static_cast<int>((ph - 1 - py) * stride / zoom));
      for (int px = 0; px < pw; ++px) {
        const int i = std::min(g.nx - 1, static_cast<int>(px * stride / zoom));
        img.set(ox + px, margin + py, diverging(vals[g.index(i, j)] / range));
      }
    }
    if (outline) {
      const double sx = pw / (g.nx * g.dx);
      const double sy = ph / (g.ny * g.dy);
      for (const Loop& loop : outline->boundary) {
        for (std::size_t k = 0; k < loop.size(); ++k) {
          const Point2& a = loop[k];
          const Point2& b = loop[(k + 1) % loop.size()];
          draw_line(img, ox + (a.x - g.ox + 0.5 * g.dx) * sx, margin + ph - (a.y - g.oy + 0.5 * g.dy) * sy,
                    ox + (b.x - g.ox + 0.5 * g.dx) * sx, margin + ph - (b.y - g.oy + 0.5 * g.dy) * sy,
                    {0, 0, 0}, false);
        }
      }
    }
  }

  for (int p = 0; p < n && p < static_cast<int>(labels.size()); ++p) {
    draw_text(img, margin + p * (pw + margin) + 4, margin + 4, labels[p], {0, 0, 0}, 2);
  }

  // Colour bar.
  const int by = ph + 2 * margin;
  const int bw = std::min(256, img.width - 2 * margin);
  for (int x = 0; x < bw; ++x) {
    img.fill_rect(margin + x, by, margin + x + 1, by + 12, diverging(2.0 * x / (bw - 1) - 1.0));
  }
  draw_text(img, margin, by + 16, short_number(-range), {0, 0, 0});
  const std::string hi = short_number(range);
  draw_text(img, margin + bw - 6 * static_cast<int>(hi.size()), by + 16, hi, {0, 0, 0});

  // Length bar: the largest of 1, 2, 5 x 10^k spanning at most a quarter panel.
  const double px_per_unit = pw / (g.nx * g.dx);
  const double target = 0.25 * g.nx * g.dx;
  double len = std::pow(10.0, std::floor(std::log10(target)));
  for (double m : {5.0, 2.0}) {
    if (len * m <= target) {
      len *= m;
      break;
    }
  }
  const int lw = std::max(1, static_cast<int>(std::lround(len * px_per_unit)));
  const int lx = margin;
  const int ly = by + 34;
  img.fill_rect(lx, ly, lx + lw, ly + 4, {0, 0, 0});
  img.fill_rect(lx, ly - 3, lx + 2, ly + 7, {0, 0, 0});
  img.fill_rect(lx + lw - 2, ly - 3, lx + lw, ly + 7, {0, 0, 0});
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", len);
  draw_text(img, lx + lw + 8, ly - 2, buf, {0, 0, 0});

  write_png(img, path);
}

void write_tensor_heatmap(const TensorField2& f, const std::filesystem::path& path,
                          const Mask2* outline) {
  write_heatmap({f.component(0), f.component(1), f.component(2)}, path, outline,
                {"c11", "c22", "c12"});
}

void write_loglog(const std::vector<Series>& series, const std::filesystem::path& path) {
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const auto& s : series) {
    if (s.x.size() != s.y.size()) throw ValidationError("write_loglog: x/y size mismatch");
    for (std::size_t k = 0; k < s.x.size(); ++k) {
      if (!(s.x[k] > 0.0) || !(s.y[k] > 0.0)) continue;
      xmin = std::min(xmin, s.x[k]);
      xmax = std::max(xmax, s.x[k]);
      ymin = std::min(ymin, s.y[k]);
      ymax = std::max(ymax, s.y[k]);
    }
  }
  if (!(xmax > 0.0)) throw ValidationError("write_loglog: no positive data");
  const double lx0 = std::floor(std::log10(xmin)), lx1 = std::max(lx0 + 1, std::ceil(std::log10(xmax)));
  const double ly0 = std::floor(std::log10(ymin)), ly1 = std::max(ly0 + 1, std::ceil(std::log10(ymax)));
  const int W = 640, H = 480, L = 70, R = 20, T = 20, B = 50;
  Image img(W, H);
  auto X = [&](double x) { return L + (std::log10(x) - lx0) / (lx1 - lx0) * (W - L - R); };
  auto Y = [&](double y) { return H - B - (std::log10(y) - ly0) / (ly1 - ly0) * (H - T - B); };
  const Rgb grey{210, 210, 210}, black{0, 0, 0};
  for (double d = lx0; d <= lx1; d += 1.0) {
    const double x = X(std::pow(10.0, d));
    draw_line(img, x, T, x, H - B, grey, false);
    draw_text(img, static_cast<int>(x) - 12, H - B + 10, "1e" + std::to_string(static_cast<int>(d)), black);
  }
  for (double d = ly0; d <= ly1; d += 1.0) {
    const double y = Y(std::pow(10.0, d));
    draw_line(img, L, y, W - R, y, grey, false);
    draw_text(img, 10, static_cast<int>(y) - 3, "1e" + std::to_string(static_cast<int>(d)), black);
  }
  draw_line(img, L, H - B, W - R, H - B, black, false);
  draw_line(img, L, T, L, H - B, black, false);
  for (const auto& s : series) {
    bool have = false;
    double px = 0.0, py = 0.0;
    for (std::size_t k = 0; k < s.x.size(); ++k) {
      if (!(s.x[k] > 0.0) || !(s.y[k] > 0.0)) continue;
      const double x = X(s.x[k]), y = Y(s.y[k]);
      if (have) draw_line(img, px, py, x, y, s.color, s.dashed);
      img.fill_rect(static_cast<int>(x) - 2, static_cast<int>(y) - 2, static_cast<int>(x) + 3,
                    static_cast<int>(y) + 3, s.color);
      px = x;
      py = y;
      have = true;
    }
  }
  write_png(img, path);
}

}  // namespace straintomo::render
