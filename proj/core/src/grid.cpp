#include "flyscan/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "flyscan/errors.hpp"

namespace flyscan {

ImageGrid::ImageGrid(int width, int height, double fill, double pixelPitch)
  : mWidth(width), mHeight(height), mPixelPitch(pixelPitch)
{
  if (width < 0 || height < 0)
    throw DimensionError("image dimensions must be non-negative");
  mValues.assign(static_cast<std::size_t>(width) * height, fill);
}

ImageGrid::ImageGrid(int width, int height, std::vector<double> values,
                     double pixelPitch)
  : mWidth(width), mHeight(height), mPixelPitch(pixelPitch),
    mValues(std::move(values))
{
  if (width < 0 || height < 0)
    throw DimensionError("image dimensions must be non-negative");
  if (mValues.size() != static_cast<std::size_t>(width) * height)
    throw DimensionError("value count " + std::to_string(mValues.size()) +
                         " does not match " + std::to_string(width) + "x" +
                         std::to_string(height));
}

bool ImageGrid::is_normalized() const noexcept
{
  return std::all_of(mValues.begin(), mValues.end(), [](double v) {
    return std::isfinite(v) && v >= 0.0 && v <= 1.0;
  });
}

GradientField central_gradient(const ImageGrid& img)
{
  const int w = img.width();
  const int h = img.height();
  if (w < 3 || h < 3)
    throw DimensionError("central_gradient needs at least 3x3 pixels, got " +
                         std::to_string(w) + "x" + std::to_string(h));

  GradientField g{ImageGrid(w, h, 0.0, img.pixel_pitch()),
                  ImageGrid(w, h, 0.0, img.pixel_pitch()),
                  ImageGrid(w, h, 0.0, img.pixel_pitch())};

  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      double dx;
      if (c == 0)
        dx = img(r, 1) - img(r, 0);
      else if (c == w - 1)
        dx = img(r, w - 1) - img(r, w - 2);
      else
        dx = (img(r, c + 1) - img(r, c - 1)) / 2.0;

      double dy;
      if (r == 0)
        dy = img(1, c) - img(0, c);
      else if (r == h - 1)
        dy = img(h - 1, c) - img(h - 2, c);
      else
        dy = (img(r + 1, c) - img(r - 1, c)) / 2.0;

      g.gx(r, c) = dx;
      g.gy(r, c) = dy;
      g.magnitude(r, c) = std::sqrt(dx * dx + dy * dy);
    }
  }
  return g;
}

namespace {

struct CellCoord
{
  int index = 0;       // lower node of the interpolation cell
  double frac = 0.0;   // position inside the cell, in [0, 1]
  bool clamped = false;
};

CellCoord locate(double v, int extent)
{
  CellCoord cc;
  const double hi = static_cast<double>(extent - 1);
  if (!(v >= 0.0)) { // also catches NaN
    v = 0.0;
    cc.clamped = true;
  } else if (v > hi) {
    v = hi;
    cc.clamped = true;
  }
  if (extent == 1)
    return cc;
  int i = static_cast<int>(std::floor(v));
  i = std::min(i, extent - 2);
  cc.index = i;
  cc.frac = v - i;
  return cc;
}

} // namespace

double bilinear_sample(const ImageGrid& img, double x, double y)
{
  return bilinear_sample_with_gradient(img, x, y).value;
}

SampleWithGradient bilinear_sample_with_gradient(const ImageGrid& img,
                                                 double x, double y)
{
  const CellCoord cx = locate(x, img.width());
  const CellCoord cy = locate(y, img.height());
  const int x1 = std::min(cx.index + 1, img.width() - 1);
  const int y1 = std::min(cy.index + 1, img.height() - 1);

  const double f00 = img(cy.index, cx.index);
  const double f01 = img(cy.index, x1);
  const double f10 = img(y1, cx.index);
  const double f11 = img(y1, x1);
  const double tx = cx.frac;
  const double ty = cy.frac;

  SampleWithGradient s;
  const double top = f00 + tx * (f01 - f00);
  const double bottom = f10 + tx * (f11 - f10);
  s.value = top + ty * (bottom - top);
  if (!cx.clamped && img.width() > 1)
    s.dx = (1.0 - ty) * (f01 - f00) + ty * (f11 - f10);
  if (!cy.clamped && img.height() > 1)
    s.dy = bottom - top;
  return s;
}

ImageGrid normalize(int width, int height, std::span<const double> raw,
                    double pixelPitch)
{
  if (raw.empty())
    throw InvalidArgument("cannot normalize an empty image");
  if (raw.size() != static_cast<std::size_t>(width) * height)
    throw DimensionError("raw value count does not match image dimensions");

  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (double v : raw) {
    if (std::isfinite(v)) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (!std::isfinite(lo))
    throw InvalidArgument("cannot normalize: no finite values");

  std::vector<double> out(raw.size(), 0.0);
  const double range = hi - lo;
  if (range > 0.0) {
    for (std::size_t i = 0; i < raw.size(); ++i)
      out[i] = std::isfinite(raw[i])
                 ? std::clamp((raw[i] - lo) / range, 0.0, 1.0)
                 : 0.0;
  }
  return ImageGrid(width, height, std::move(out), pixelPitch);
}

Point2 clamp_to_bounds(int width, int height, Point2 p)
{
  p.x = std::clamp(p.x, 0.0, static_cast<double>(std::max(width - 1, 0)));
  p.y = std::clamp(p.y, 0.0, static_cast<double>(std::max(height - 1, 0)));
  return p;
}

Point2 clamp_to_image(const ImageGrid& img, Point2 p)
{
  return clamp_to_bounds(img.width(), img.height(), p);
}

} // namespace flyscan
