#include <png.h>

#include <cstdio>
#include <fstream>

#include <gtest/gtest.h>

#include "straintomo/mask.hpp"
#include "straintomo/phantoms.hpp"
#include "straintomo/render.hpp"
#include "test_support.hpp"

using namespace straintomo;
using render::Rgb;

namespace {

struct Decoded {
  int width = 0, height = 0;
  std::vector<Rgb> pixels;
};

Decoded decode_png(const std::filesystem::path& path) {
  Decoded d;
  png_image img{};
  img.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&img, path.c_str())) return d;
  img.format = PNG_FORMAT_RGB;
  std::vector<unsigned char> buf(PNG_IMAGE_SIZE(img));
  if (!png_image_finish_read(&img, nullptr, buf.data(), 0, nullptr)) return d;
  d.width = static_cast<int>(img.width);
  d.height = static_cast<int>(img.height);
  for (std::size_t k = 0; k + 2 < buf.size(); k += 3) d.pixels.push_back({buf[k], buf[k + 1], buf[k + 2]});
  return d;
}

bool reddish(const Rgb& c) { return c[0] > 150 && c[2] < 100; }
bool bluish(const Rgb& c) { return c[2] > 150 && c[0] < 100; }

}  // namespace

TEST(Colormap, DivergingIsWhiteAtZeroAndClamped) {
  EXPECT_EQ(render::diverging(0.0), (Rgb{255, 255, 255}));
  EXPECT_TRUE(reddish(render::diverging(1.0)));
  EXPECT_TRUE(bluish(render::diverging(-1.0)));
  EXPECT_EQ(render::diverging(5.0), render::diverging(1.0));
  EXPECT_EQ(render::diverging(-5.0), render::diverging(-1.0));
  // Positive values lean red, negative values lean blue.
  for (double t : {0.1, 0.4, 0.8}) {
    const Rgb p = render::diverging(t), m = render::diverging(-t);
    EXPECT_GT(p[0], p[2]);
    EXPECT_GT(m[2], m[0]);
  }
  // Saturation grows monotonically with |t|.
  int prev = 255;
  for (double t = 0.0; t <= 1.0; t += 0.1) {
    const int g = render::diverging(t)[1];
    EXPECT_LE(g, prev);
    prev = g;
  }
}

TEST(Image, SetGetAndBounds) {
  render::Image img(10, 5);
  img.set(3, 2, {1, 2, 3});
  EXPECT_EQ(img.get(3, 2), (Rgb{1, 2, 3}));
  img.set(-1, 100, {9, 9, 9});  // ignored
  img.fill_rect(0, 0, 2, 2, {7, 7, 7});
  EXPECT_EQ(img.get(1, 1), (Rgb{7, 7, 7}));
  EXPECT_THROW(render::Image(0, 4), ValidationError);
}

TEST(Heatmap, WritesDecodablePngWithBothSigns) {
  testsupport::TempDir tmp;
  AirySpec spec;
  spec.grid = Grid2::centered(80, 0.03);
  const TensorField2 f = airy_stress(spec);
  const Mask2 disk = disk_mask(spec.grid, 1.0);
  render::write_tensor_heatmap(f, tmp / "h.png", &disk);
  const Decoded d = decode_png(tmp / "h.png");
  ASSERT_GT(d.width, 3 * 80);
  ASSERT_GT(d.height, 80);
  int red = 0, blue = 0;
  for (const Rgb& c : d.pixels) {
    red += reddish(c);
    blue += bluish(c);
  }
  EXPECT_GT(red, 100);
  EXPECT_GT(blue, 100);
}

TEST(Heatmap, LargeGridsAreDownsampled) {
  testsupport::TempDir tmp;
  ScalarField2 s(Grid2::centered(1200, 0.002));
  s.values[0] = 1.0;
  render::write_heatmap({s}, tmp / "big.png");
  const Decoded d = decode_png(tmp / "big.png");
  EXPECT_GT(d.width, 0);
  EXPECT_LE(d.width, 1200);
}

TEST(Heatmap, RejectsMismatchedPanels) {
  testsupport::TempDir tmp;
  EXPECT_THROW(render::write_heatmap({}, tmp / "x.png"), ValidationError);
  const ScalarField2 a(Grid2::centered(10, 0.1)), b(Grid2::centered(12, 0.1));
  EXPECT_THROW(render::write_heatmap({a, b}, tmp / "x.png"), ValidationError);
}

TEST(LogLog, WritesPlotAndDropsNonPositivePoints) {
  testsupport::TempDir tmp;
  render::Series s{{25, 50, 100, 0}, {1.7, 1.2, 0.86, -1}, {200, 30, 30}, false};
  render::Series ref{{25, 100}, {2.0, 1.0}, {0, 0, 0}, true};
  render::write_loglog({s, ref}, tmp / "p.png");
  const Decoded d = decode_png(tmp / "p.png");
  EXPECT_EQ(d.width, 640);
  EXPECT_EQ(d.height, 480);
  render::Series empty{{0}, {0}, {}, false};
  EXPECT_THROW(render::write_loglog({empty}, tmp / "q.png"), ValidationError);
  render::Series ragged{{1, 2}, {1}, {}, false};
  EXPECT_THROW(render::write_loglog({ragged}, tmp / "q.png"), ValidationError);
}
