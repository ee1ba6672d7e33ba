#ifndef FLYSCAN_GEOMETRY_HPP
#define FLYSCAN_GEOMETRY_HPP

#include <cmath>

namespace flyscan {

/// Continuous 2-D position in pixel units. x runs along columns, y along rows;
/// pixel (row, col) has its center at (col, row).
struct Point2
{
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;

  Point2& operator+=(const Point2& o) { x += o.x; y += o.y; return *this; }
  Point2& operator-=(const Point2& o) { x -= o.x; y -= o.y; return *this; }
  friend Point2 operator+(Point2 a, const Point2& b) { return a += b; }
  friend Point2 operator-(Point2 a, const Point2& b) { return a -= b; }
  friend Point2 operator*(double s, const Point2& p) { return {s * p.x, s * p.y}; }
};

inline double squared_distance(const Point2& a, const Point2& b)
{
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

inline double distance(const Point2& a, const Point2& b)
{
  return std::hypot(a.x - b.x, a.y - b.y);
}

} // namespace flyscan

#endif
