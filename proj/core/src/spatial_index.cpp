#include "flyscan/spatial_index.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace flyscan {

namespace {

constexpr int kMaxCellsPerAxis = 2048;

bool closer(const Neighbor& a, const Neighbor& b)
{
  return a.dist2 < b.dist2 || (a.dist2 == b.dist2 && a.index < b.index);
}

} // namespace

PointIndex::PointIndex(std::span<const Point2> points, double targetPerCell)
  : mPoints(points.begin(), points.end()), mErased(points.size(), 0),
    mActive(points.size())
{
  if (mPoints.empty())
    return;

  double x1 = mPoints[0].x, y1 = mPoints[0].y;
  mX0 = x1;
  mY0 = y1;
  for (const Point2& p : mPoints) {
    mX0 = std::min(mX0, p.x);
    mY0 = std::min(mY0, p.y);
    x1 = std::max(x1, p.x);
    y1 = std::max(y1, p.y);
  }
  const double w = std::max(x1 - mX0, 1e-9);
  const double h = std::max(y1 - mY0, 1e-9);
  const double n = static_cast<double>(mPoints.size());
  mCell = std::sqrt(w * h * std::max(targetPerCell, 0.1) / n);
  mCell = std::max({mCell, w / kMaxCellsPerAxis, h / kMaxCellsPerAxis, 1e-9});
  mNx = std::clamp(static_cast<int>(std::floor(w / mCell)) + 1, 1, kMaxCellsPerAxis + 1);
  mNy = std::clamp(static_cast<int>(std::floor(h / mCell)) + 1, 1, kMaxCellsPerAxis + 1);

  const std::size_t cells = static_cast<std::size_t>(mNx) * mNy;
  mCellStart.assign(cells + 1, 0);
  std::vector<std::size_t> cellOf(mPoints.size());
  for (std::size_t i = 0; i < mPoints.size(); ++i) {
    cellOf[i] = static_cast<std::size_t>(cell_y(mPoints[i].y)) * mNx +
                cell_x(mPoints[i].x);
    ++mCellStart[cellOf[i] + 1];
  }
  for (std::size_t c = 0; c < cells; ++c)
    mCellStart[c + 1] += mCellStart[c];
  mCellItems.resize(mPoints.size());
  std::vector<std::size_t> fill(mCellStart.begin(), mCellStart.end() - 1);
  for (std::size_t i = 0; i < mPoints.size(); ++i)
    mCellItems[fill[cellOf[i]]++] = i;
}

int PointIndex::cell_x(double x) const
{
  const double c = std::floor((x - mX0) / mCell);
  if (!(c >= 0.0))
    return 0;
  return c >= mNx - 1 ? mNx - 1 : static_cast<int>(c);
}

int PointIndex::cell_y(double y) const
{
  const double c = std::floor((y - mY0) / mCell);
  if (!(c >= 0.0))
    return 0;
  return c >= mNy - 1 ? mNy - 1 : static_cast<int>(c);
}

void PointIndex::nearest(const Point2& q, std::size_t k,
                         std::vector<Neighbor>& out) const
{
  out.clear();
  if (k == 0 || mActive == 0)
    return;
  k = std::min(k, mActive);

  const int cx = cell_x(q.x);
  const int cy = cell_y(q.y);

  auto visitCell = [&](int ix, int iy) {
    const std::size_t c = static_cast<std::size_t>(iy) * mNx + ix;
    for (std::size_t s = mCellStart[c]; s < mCellStart[c + 1]; ++s) {
      const std::size_t idx = mCellItems[s];
      if (mErased[idx])
        continue;
      const Neighbor cand{idx, squared_distance(q, mPoints[idx])};
      if (out.size() == k && !closer(cand, out.back()))
        continue;
      auto pos = std::upper_bound(out.begin(), out.end(), cand, closer);
      out.insert(pos, cand);
      if (out.size() > k)
        out.pop_back();
    }
  };

  const int maxRing = std::max({cx, cy, mNx - 1 - cx, mNy - 1 - cy});
  for (int r = 0; r <= maxRing; ++r) {
    const int xa = cx - r, xb = cx + r, ya = cy - r, yb = cy + r;
    for (int iy = std::max(ya, 0); iy <= std::min(yb, mNy - 1); ++iy) {
      if (iy == ya || iy == yb) {
        for (int ix = std::max(xa, 0); ix <= std::min(xb, mNx - 1); ++ix)
          visitCell(ix, iy);
      } else {
        if (xa >= 0)
          visitCell(xa, iy);
        if (xb <= mNx - 1 && xb != xa)
          visitCell(xb, iy);
      }
    }

    // Every unvisited point lies outside the block of rings 0..r, so its
    // distance is at least the gap from q to the nearest unsaturated side.
    double bound = std::numeric_limits<double>::infinity();
    if (xa > 0)
      bound = std::min(bound, q.x - (mX0 + xa * mCell));
    if (xb < mNx - 1)
      bound = std::min(bound, (mX0 + (xb + 1) * mCell) - q.x);
    if (ya > 0)
      bound = std::min(bound, q.y - (mY0 + ya * mCell));
    if (yb < mNy - 1)
      bound = std::min(bound, (mY0 + (yb + 1) * mCell) - q.y);
    if (!std::isfinite(bound))
      break;
    if (out.size() == k && bound > 0.0 && out.back().dist2 < bound * bound)
      break;
  }
}

std::vector<Neighbor> PointIndex::nearest(const Point2& q, std::size_t k) const
{
  std::vector<Neighbor> out;
  nearest(q, k, out);
  return out;
}

void PointIndex::within(const Point2& q, double radius,
                        std::vector<std::size_t>& out) const
{
  out.clear();
  if (mActive == 0 || radius < 0.0)
    return;
  const double r2 = radius * radius;
  const int xa = cell_x(q.x - radius), xb = cell_x(q.x + radius);
  const int ya = cell_y(q.y - radius), yb = cell_y(q.y + radius);
  for (int iy = ya; iy <= yb; ++iy) {
    for (int ix = xa; ix <= xb; ++ix) {
      const std::size_t c = static_cast<std::size_t>(iy) * mNx + ix;
      for (std::size_t s = mCellStart[c]; s < mCellStart[c + 1]; ++s) {
        const std::size_t idx = mCellItems[s];
        if (!mErased[idx] && squared_distance(q, mPoints[idx]) <= r2)
          out.push_back(idx);
      }
    }
  }
}

void PointIndex::erase(std::size_t index)
{
  if (!mErased[index]) {
    mErased[index] = 1;
    --mActive;
  }
}

} // namespace flyscan
