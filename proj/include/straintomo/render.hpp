// PNG output: diverging heatmaps with colour and length scale bars, and a
// small log-log line plot for noise sweeps.
#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "straintomo/fields.hpp"

namespace straintomo::render {

using Rgb = std::array<std::uint8_t, 3>;

struct Image {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> rgb;

  Image(int w, int h, Rgb fill = {255, 255, 255});
  void set(int x, int y, Rgb c);
  [[nodiscard]] Rgb get(int x, int y) const;
  void fill_rect(int x0, int y0, int x1, int y1, Rgb c);
};

/// Blue-white-red map; t in [-1, 1] (clamped), white at 0.
Rgb diverging(double t);

/// Draws text from a 5x7 bitmap font (digits, sign, '.', 'e', and a few
/// lowercase letters). Unknown characters are skipped.
void draw_text(Image& img, int x, int y, const std::string& text, Rgb c, int scale = 1);

void write_png(const Image& img, const std::filesystem::path& path);

/// Heatmap of one or more same-grid panels sharing a symmetric colour range
/// [-max|v|, max|v|]. A colour bar with its range and a length bar in grid
/// units are drawn underneath. Mask outlines, when given, are overlaid.
void write_heatmap(const std::vector<ScalarField2>& panels, const std::filesystem::path& path,
                   const Mask2* outline = nullptr, const std::vector<std::string>& labels = {});

/// Convenience: the three tensor components side by side.
void write_tensor_heatmap(const TensorField2& f, const std::filesystem::path& path,
                          const Mask2* outline = nullptr);

struct Series {
  std::vector<double> x;
  std::vector<double> y;
  Rgb color{0, 0, 0};
  bool dashed = false;
};

/// Log-log plot; non-positive points are dropped. Decade ticks are labelled.
void write_loglog(const std::vector<Series>& series, const std::filesystem::path& path);

}  // namespace straintomo::render
