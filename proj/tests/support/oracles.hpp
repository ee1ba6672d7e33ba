// Brute-force reference implementations shared by the unit and acceptance
// tests. Each one is written from the defining formula, without the spatial
// index or any shortcut the library uses.
#ifndef FLYSCAN_TEST_ORACLES_HPP
#define FLYSCAN_TEST_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <span>
#include <vector>

#include "flyscan/geometry.hpp"
#include "flyscan/grid.hpp"
#include "flyscan/scanner.hpp"

namespace oracle {

using flyscan::Point2;

inline double d2(const Point2& a, const Point2& b)
{
  const double dx = a.x - b.x, dy = a.y - b.y;
  return dx * dx + dy * dy;
}

/// Indices of the k nearest points, ordered by (distance, index).
inline std::vector<std::size_t> knn(std::span<const Point2> pts, const Point2& q,
                                    std::size_t k)
{
  std::vector<std::size_t> idx(pts.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    const double da = d2(pts[a], q), db = d2(pts[b], q);
    return da != db ? da < db : a < b;
  });
  idx.resize(std::min(k, idx.size()));
  return idx;
}

/// Greedy nearest-neighbor walk: first the point closest to `startNear`,
/// then always the closest unvisited point, lowest index on ties.
inline std::vector<std::size_t> greedy_order(std::span<const Point2> pts,
                                             Point2 startNear)
{
  const std::size_t n = pts.size();
  std::vector<bool> used(n, false);
  std::vector<std::size_t> order;
  Point2 cur = startNear;
  for (std::size_t step = 0; step < n; ++step) {
    std::size_t best = n;
    double bestD = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      if (used[i])
        continue;
      const double d = d2(pts[i], cur);
      if (d < bestD) {
        bestD = d;
        best = i;
      }
    }
    used[best] = true;
    order.push_back(best);
    cur = pts[best];
  }
  return order;
}

inline double open_length(std::span<const Point2> pts,
                          std::span<const std::size_t> order)
{
  double len = 0.0;
  for (std::size_t i = 1; i < order.size(); ++i)
    len += std::sqrt(d2(pts[order[i - 1]], pts[order[i]]));
  return len;
}

/// Shortest open path from `start` by enumerating every permutation.
inline double exhaustive_open_length(std::span<const Point2> pts, std::size_t start)
{
  std::vector<std::size_t> rest;
  for (std::size_t i = 0; i < pts.size(); ++i)
    if (i != start)
      rest.push_back(i);
  double best = std::numeric_limits<double>::infinity();
  do {
    std::vector<std::size_t> order{start};
    order.insert(order.end(), rest.begin(), rest.end());
    best = std::min(best, open_length(pts, order));
  } while (std::next_permutation(rest.begin(), rest.end()));
  return best;
}

/// Inverse distance weighting at (x, y) over the k nearest readouts.
inline double idw_at(const flyscan::ReadoutLog& log, double x, double y,
                     std::size_t k, double power = 2.0)
{
  std::vector<Point2> pos = log.positions();
  const auto nb = knn(pos, {x, y}, k);
  double num = 0.0, den = 0.0;
  for (std::size_t i : nb) {
    const double d = std::sqrt(d2(pos[i], {x, y}));
    if (d == 0.0)
      return log.entries[i].value;
    const double w = 1.0 / std::pow(d, power);
    num += w * log.entries[i].value;
    den += w;
  }
  return num / den;
}

/// Per-query exponent E_i = sum_j lambda_ij d_ij of the uncertainty, with a
/// softmax over the M nearest scanned points of exp(-d), d = |q - p|^2 / ell^2.
inline std::vector<double> ewuf_energies(std::span<const Point2> query,
                                         std::span<const Point2> scanned, double ell,
                                         std::size_t m)
{
  std::vector<double> out;
  for (const Point2& q : query) {
    const auto nb = knn(scanned, q, m);
    std::vector<double> d;
    for (std::size_t j : nb)
      d.push_back(d2(q, scanned[j]) / (ell * ell));
    const double dmin = *std::min_element(d.begin(), d.end());
    double z = 0.0, e = 0.0;
    for (double dj : d)
      z += std::exp(-(dj - dmin));
    for (double dj : d)
      e += std::exp(-(dj - dmin)) / z * dj;
    out.push_back(e);
  }
  return out;
}

/// EWUF straight from the definition: mean of sigma^2 (1 - exp(-E_i)).
inline double ewuf(std::span<const Point2> query, std::span<const Point2> scanned,
                   double ell, double sigma, std::size_t m)
{
  double total = 0.0;
  for (double e : ewuf_energies(query, scanned, ell, m))
    total += sigma * sigma * (1.0 - std::exp(-e));
  return total / static_cast<double>(query.size());
}

/// sigma^2 - EWUF, computed without cancellation.
inline double ewuf_gap(std::span<const Point2> query, std::span<const Point2> scanned,
                       double ell, double sigma, std::size_t m)
{
  double total = 0.0;
  for (double e : ewuf_energies(query, scanned, ell, m))
    total += sigma * sigma * std::exp(-e);
  return total / static_cast<double>(query.size());
}

/// Central finite-difference gradient of a scalar function of a point set.
inline std::vector<Point2> finite_difference(
  const std::function<double(const std::vector<Point2>&)>& f,
  std::vector<Point2> pts, double h)
{
  std::vector<Point2> g(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Point2 p = pts[i];
    pts[i] = {p.x + h, p.y};
    const double fxp = f(pts);
    pts[i] = {p.x - h, p.y};
    const double fxm = f(pts);
    pts[i] = {p.x, p.y + h};
    const double fyp = f(pts);
    pts[i] = {p.x, p.y - h};
    const double fym = f(pts);
    pts[i] = p;
    g[i] = {(fxp - fxm) / (2 * h), (fyp - fym) / (2 * h)};
  }
  return g;
}

/// Worst component error scaled by the largest reference component.
inline double max_relative_error(std::span<const Point2> got,
                                 std::span<const Point2> want)
{
  double scale = 0.0, err = 0.0;
  for (std::size_t i = 0; i < want.size(); ++i) {
    scale = std::max({scale, std::abs(want[i].x), std::abs(want[i].y)});
    err = std::max({err, std::abs(got[i].x - want[i].x), std::abs(got[i].y - want[i].y)});
  }
  return err / std::max(scale, 1e-12);
}

/// Smooth random field: a few random low-frequency cosines, scaled to [0, 1].
inline flyscan::ImageGrid smooth_image(int w, int h, std::mt19937_64& rng)
{
  std::uniform_real_distribution<double> u(0.0, 1.0);
  struct Wave { double a, kx, ky, ph; };
  std::vector<Wave> waves;
  for (int i = 0; i < 4; ++i)
    waves.push_back({u(rng), 0.02 + 0.2 * u(rng), 0.02 + 0.2 * u(rng), 6.28 * u(rng)});
  std::vector<double> v(static_cast<std::size_t>(w) * h);
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c) {
      double s = 0.0;
      for (const Wave& wv : waves)
        s += wv.a * std::cos(wv.kx * c + wv.ky * r + wv.ph);
      v[static_cast<std::size_t>(r) * w + c] = s;
    }
  return flyscan::normalize(w, h, v);
}

/// Distance from x to the nearest integer (pixel-cell boundary of the
/// bilinear interpolant).
inline double cell_boundary_distance(double x)
{
  return std::abs(x - std::round(x));
}

} // namespace oracle

#endif
