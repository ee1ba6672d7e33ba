#include "doctest.h"

#include <cmath>
#include <limits>
#include <vector>

#include "flyscan/errors.hpp"
#include "flyscan/grid.hpp"

using namespace flyscan;

namespace {

ImageGrid plane(int w, int h, double a, double b, double c)
{
  ImageGrid img(w, h);
  for (int r = 0; r < h; ++r)
    for (int col = 0; col < w; ++col)
      img(r, col) = a * col + b * r + c;
  return img;
}

} // namespace

TEST_CASE("central gradient of a plane is exact everywhere, borders included")
{
  const ImageGrid img = plane(7, 5, 0.25, -0.5, 1.0);
  const GradientField g = central_gradient(img);
  for (int r = 0; r < 5; ++r)
    for (int c = 0; c < 7; ++c) {
      CHECK(g.gx(r, c) == doctest::Approx(0.25).epsilon(1e-14));
      CHECK(g.gy(r, c) == doctest::Approx(-0.5).epsilon(1e-14));
      CHECK(g.magnitude(r, c) == doctest::Approx(std::hypot(0.25, 0.5)));
    }
}

TEST_CASE("central gradient on a 3x3 hand example")
{
  // rows: 0 1 2 / 3 5 7 / 6 9 12
  const ImageGrid img(3, 3, {0, 1, 2, 3, 5, 7, 6, 9, 12});
  const GradientField g = central_gradient(img);
  CHECK(g.gx(1, 1) == doctest::Approx(2.0));   // (7 - 3) / 2
  CHECK(g.gy(1, 1) == doctest::Approx(4.0));   // (9 - 1) / 2
  CHECK(g.gx(0, 0) == doctest::Approx(1.0));   // one-sided 1 - 0
  CHECK(g.gy(0, 0) == doctest::Approx(3.0));   // one-sided 3 - 0
  CHECK(g.gx(2, 2) == doctest::Approx(3.0));   // 12 - 9
  CHECK(g.gy(2, 2) == doctest::Approx(5.0));   // 12 - 7
  CHECK(g.magnitude(1, 1) == doctest::Approx(std::sqrt(20.0)));
}

TEST_CASE("central gradient is linear in the image")
{
  ImageGrid a(6, 6), b(6, 6), sum(6, 6);
  for (int r = 0; r < 6; ++r)
    for (int c = 0; c < 6; ++c) {
      a(r, c) = std::sin(0.7 * r + 0.3 * c);
      b(r, c) = std::cos(0.2 * r * c);
      sum(r, c) = 2.0 * a(r, c) - 3.0 * b(r, c);
    }
  const GradientField ga = central_gradient(a), gb = central_gradient(b),
                      gs = central_gradient(sum);
  for (int r = 0; r < 6; ++r)
    for (int c = 0; c < 6; ++c) {
      CHECK(gs.gx(r, c) == doctest::Approx(2 * ga.gx(r, c) - 3 * gb.gx(r, c)));
      CHECK(gs.gy(r, c) == doctest::Approx(2 * ga.gy(r, c) - 3 * gb.gy(r, c)));
    }
}

TEST_CASE("central gradient rejects images narrower than 3")
{
  CHECK_THROWS_AS(central_gradient(ImageGrid(2, 5)), DimensionError);
  CHECK_THROWS_AS(central_gradient(ImageGrid(5, 2)), DimensionError);
}

TEST_CASE("bilinear sampling")
{
  const ImageGrid img = plane(8, 6, 0.1, 0.3, 0.05);
  SUBCASE("reproduces pixel values at centers")
  {
    CHECK(bilinear_sample(img, 3.0, 2.0) == doctest::Approx(img(2, 3)));
  }
  SUBCASE("is exact on a plane")
  {
    CHECK(bilinear_sample(img, 2.37, 4.61) ==
          doctest::Approx(0.1 * 2.37 + 0.3 * 4.61 + 0.05));
  }
  SUBCASE("clamps outside the image")
  {
    CHECK(bilinear_sample(img, -3.0, 0.0) == doctest::Approx(img(0, 0)));
    CHECK(bilinear_sample(img, 100.0, 100.0) == doctest::Approx(img(5, 7)));
  }
  SUBCASE("derivatives match the plane and vanish on clamped axes")
  {
    const SampleWithGradient s = bilinear_sample_with_gradient(img, 2.37, 4.61);
    CHECK(s.dx == doctest::Approx(0.1));
    CHECK(s.dy == doctest::Approx(0.3));
    const SampleWithGradient out = bilinear_sample_with_gradient(img, -1.0, 2.5);
    CHECK(out.dx == 0.0);
    CHECK(out.dy == doctest::Approx(0.3));
  }
}

TEST_CASE("normalize")
{
  SUBCASE("maps min and max onto 0 and 1")
  {
    const std::vector<double> raw{2.0, 4.0, 6.0, 10.0};
    const ImageGrid n = normalize(2, 2, raw);
    CHECK(n(0, 0) == 0.0);
    CHECK(n(0, 1) == doctest::Approx(0.25));
    CHECK(n(1, 1) == 1.0);
    CHECK(n.is_normalized());
  }
  SUBCASE("constant input becomes zeros")
  {
    const std::vector<double> raw(9, 3.5);
    const ImageGrid n = normalize(3, 3, raw);
    for (double v : n.values())
      CHECK(v == 0.0);
  }
  SUBCASE("non-finite entries map to 0")
  {
    const std::vector<double> raw{1.0, std::numeric_limits<double>::quiet_NaN(), 3.0,
                                  std::numeric_limits<double>::infinity()};
    const ImageGrid n = normalize(2, 2, raw);
    CHECK(n(0, 1) == 0.0);
    CHECK(n(1, 1) == 0.0);
    CHECK(n(1, 0) == 1.0);
  }
  SUBCASE("wrong element count")
  {
    const std::vector<double> raw(5, 1.0);
    CHECK_THROWS_AS(normalize(2, 2, raw), InvalidArgument);
  }
}

TEST_CASE("clamp_to_image keeps points inside the sampling rectangle")
{
  const ImageGrid img(10, 4);
  const Point2 p = clamp_to_image(img, {-1.0, 7.0});
  CHECK(p.x == 0.0);
  CHECK(p.y == 3.0);
}
