#ifndef FLYSCAN_SPATIAL_INDEX_HPP
#define FLYSCAN_SPATIAL_INDEX_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "flyscan/geometry.hpp"

namespace flyscan {

struct Neighbor
{
  std::size_t index = 0;
  double dist2 = 0.0;
};

/// Uniform bucket grid over a static point set answering exact k-nearest
/// queries. Results are ordered by (squared distance, index), so equal
/// distances resolve to the lowest index.
///
/// Points can be erased (used by the router to drop visited anchors); the
/// index never moves or reinserts them.
class PointIndex
{
public:
  PointIndex() = default;
  explicit PointIndex(std::span<const Point2> points, double targetPerCell = 2.0);

  std::size_t size() const noexcept { return mActive; }
  bool empty() const noexcept { return mActive == 0; }

  /// Up to `k` nearest live points to `q`, written into `out` (cleared first).
  void nearest(const Point2& q, std::size_t k, std::vector<Neighbor>& out) const;
  std::vector<Neighbor> nearest(const Point2& q, std::size_t k) const;

  /// Live points within `radius` of `q` (unordered).
  void within(const Point2& q, double radius, std::vector<std::size_t>& out) const;

  void erase(std::size_t index);
  bool erased(std::size_t index) const { return mErased[index] != 0; }

private:
  int cell_x(double x) const;
  int cell_y(double y) const;

  std::vector<Point2> mPoints;
  std::vector<char> mErased;
  std::vector<std::size_t> mCellStart; // CSR offsets, size nx*ny+1
  std::vector<std::size_t> mCellItems;
  double mX0 = 0.0, mY0 = 0.0, mCell = 1.0;
  int mNx = 0, mNy = 0;
  std::size_t mActive = 0;
};

} // namespace flyscan

#endif
