#include "flyscan/test_images.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numbers>

#include "flyscan/errors.hpp"

namespace flyscan {

namespace {

constexpr int kSupersample = 4;

// Renders `field` (defined on the unit square, y down) with 4x4 supersampling.
ImageGrid render(int size, const std::function<double(double, double)>& field)
{
  if (size < 3)
    throw DimensionError("test image size must be at least 3");
  ImageGrid img(size, size);
  for (int r = 0; r < size; ++r) {
    for (int c = 0; c < size; ++c) {
      double acc = 0.0;
      for (int sy = 0; sy < kSupersample; ++sy) {
        for (int sx = 0; sx < kSupersample; ++sx) {
          const double u = (c + (sx + 0.5) / kSupersample) / size;
          const double v = (r + (sy + 0.5) / kSupersample) / size;
          acc += field(u, v);
        }
      }
      img(r, c) = std::clamp(acc / (kSupersample * kSupersample), 0.0, 1.0);
    }
  }
  return img;
}

bool inside_triangle(double u, double v, double ax, double ay, double bx,
                     double by, double cx, double cy)
{
  auto edge = [&](double x0, double y0, double x1, double y1) {
    return (x1 - x0) * (v - y0) - (y1 - y0) * (u - x0);
  };
  const double e0 = edge(ax, ay, bx, by);
  const double e1 = edge(bx, by, cx, cy);
  const double e2 = edge(cx, cy, ax, ay);
  return (e0 >= 0 && e1 >= 0 && e2 >= 0) || (e0 <= 0 && e1 <= 0 && e2 <= 0);
}

} // namespace

ImageGrid synthetic_shapes(int size)
{
  return render(size, [](double u, double v) {
    double f = 0.05;
    // disk
    if (std::hypot(u - 0.28, v - 0.28) < 0.17)
      f = 0.9;
    // square
    if (std::abs(u - 0.73) < 0.15 && std::abs(v - 0.27) < 0.15)
      f = 0.55;
    // triangle
    if (inside_triangle(u, v, 0.12, 0.88, 0.44, 0.88, 0.28, 0.56))
      f = 0.7;
    // ring
    const double rho = std::hypot((u - 0.72) / 1.0, (v - 0.72) / 0.8);
    if (rho < 0.19 && rho > 0.11)
      f = 0.35;
    return f;
  });
}

ImageGrid shepp_logan_phantom(int size)
{
  struct Ellipse
  {
    double intensity, a, b, x0, y0, phiDeg;
  };
  static constexpr std::array<Ellipse, 10> kEllipses{{
    {1.0, 0.69, 0.92, 0.0, 0.0, 0.0},
    {-0.8, 0.6624, 0.874, 0.0, -0.0184, 0.0},
    {-0.2, 0.11, 0.31, 0.22, 0.0, -18.0},
    {-0.2, 0.16, 0.41, -0.22, 0.0, 18.0},
    {0.1, 0.21, 0.25, 0.0, 0.35, 0.0},
    {0.1, 0.046, 0.046, 0.0, 0.1, 0.0},
    {0.1, 0.046, 0.046, 0.0, -0.1, 0.0},
    {0.1, 0.046, 0.023, -0.08, -0.605, 0.0},
    {0.1, 0.023, 0.023, 0.0, -0.606, 0.0},
    {0.1, 0.023, 0.046, 0.06, -0.605, 0.0},
  }};
  return render(size, [](double u, double v) {
    const double x = 2.0 * u - 1.0;
    const double y = 1.0 - 2.0 * v;
    double f = 0.0;
    for (const Ellipse& e : kEllipses) {
      const double phi = e.phiDeg * std::numbers::pi / 180.0;
      const double dx = x - e.x0;
      const double dy = y - e.y0;
      const double xr = dx * std::cos(phi) + dy * std::sin(phi);
      const double yr = -dx * std::sin(phi) + dy * std::cos(phi);
      if ((xr * xr) / (e.a * e.a) + (yr * yr) / (e.b * e.b) <= 1.0)
        f += e.intensity;
    }
    return f;
  });
}

} // namespace flyscan
