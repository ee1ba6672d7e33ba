#ifndef FLYSCAN_GRID_HPP
#define FLYSCAN_GRID_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "flyscan/geometry.hpp"

namespace flyscan {

/// Dense row-major scalar field. Used for ground truth images,
/// reconstructions and derived fields (gradients) alike.
///
/// Intensity images are expected to lie in [0, 1]; `normalize()` produces
/// such grids and `is_normalized()` checks the property. Derived fields may
/// hold any finite value.
class ImageGrid
{
public:
  ImageGrid() = default;
  ImageGrid(int width, int height, double fill = 0.0, double pixelPitch = 1.0);
  ImageGrid(int width, int height, std::vector<double> values,
            double pixelPitch = 1.0);

  int width() const noexcept { return mWidth; }
  int height() const noexcept { return mHeight; }
  std::size_t size() const noexcept { return mValues.size(); }
  bool empty() const noexcept { return mValues.empty(); }

  /// Physical length of one pixel in nanometers.
  double pixel_pitch() const noexcept { return mPixelPitch; }

  double operator()(int row, int col) const
  {
    return mValues[static_cast<std::size_t>(row) * mWidth + col];
  }
  double& operator()(int row, int col)
  {
    return mValues[static_cast<std::size_t>(row) * mWidth + col];
  }

  std::span<const double> values() const noexcept { return mValues; }
  std::span<double> values() noexcept { return mValues; }

  bool is_normalized() const noexcept;

  bool same_shape(const ImageGrid& other) const noexcept
  {
    return mWidth == other.mWidth && mHeight == other.mHeight;
  }

  friend bool operator==(const ImageGrid&, const ImageGrid&) = default;

private:
  int mWidth = 0;
  int mHeight = 0;
  double mPixelPitch = 1.0;
  std::vector<double> mValues;
};

struct GradientField
{
  ImageGrid gx;
  ImageGrid gy;
  ImageGrid magnitude;
};

/// Central differences in the interior, one-sided differences on the border.
/// Throws DimensionError when either dimension is below 3.
GradientField central_gradient(const ImageGrid& img);

/// Bilinear interpolation at a continuous position. Coordinates are clamped
/// to [0, width-1] x [0, height-1].
double bilinear_sample(const ImageGrid& img, double x, double y);
inline double bilinear_sample(const ImageGrid& img, const Point2& p)
{
  return bilinear_sample(img, p.x, p.y);
}

struct SampleWithGradient
{
  double value = 0.0;
  double dx = 0.0;
  double dy = 0.0;
};

/// Bilinear value plus its partial derivatives with respect to x and y.
/// Derivatives are one-sided on cell boundaries (the cell containing the
/// point from above/right is used) and zero along an axis where the
/// coordinate was clamped.
SampleWithGradient bilinear_sample_with_gradient(const ImageGrid& img,
                                                 double x, double y);

/// Affine map of [min, max] of the finite inputs onto [0, 1]. Non-finite
/// entries map to 0. A constant input maps to all zeros.
/// Throws InvalidArgument on empty or all-non-finite input.
ImageGrid normalize(int width, int height, std::span<const double> raw,
                    double pixelPitch = 1.0);

/// Clamp a point into the sampling rectangle of `img`.
Point2 clamp_to_image(const ImageGrid& img, Point2 p);
Point2 clamp_to_bounds(int width, int height, Point2 p);

} // namespace flyscan

#endif
