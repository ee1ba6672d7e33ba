#include "flyscan/router.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "flyscan/errors.hpp"
#include "flyscan/spatial_index.hpp"

namespace flyscan {

namespace {

constexpr std::size_t kMaxExactAnchors = 12;

std::size_t nearest_to(std::span<const Point2> anchors, const Point2& q)
{
  std::size_t best = 0;
  double bestD = squared_distance(q, anchors[0]);
  for (std::size_t i = 1; i < anchors.size(); ++i) {
    const double d = squared_distance(q, anchors[i]);
    if (d < bestD) {
      bestD = d;
      best = i;
    }
  }
  return best;
}

} // namespace

std::vector<std::size_t> nn_order(std::span<const Point2> anchors,
                                  const RouteParams& params, Point2 startNear)
{
  const std::size_t n = anchors.size();
  if (n < 2)
    throw InvalidArgument("nn_route needs at least 2 anchors, got " +
                          std::to_string(n));

  std::vector<std::size_t> order;
  order.reserve(n);
  std::size_t current = nearest_to(anchors, startNear);
  order.push_back(current);

  if (params.candidate_subset_size == 0) {
    std::vector<char> visited(n, 0);
    visited[current] = 1;
    for (std::size_t step = 1; step < n; ++step) {
      std::size_t next = n;
      double bestD = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < n; ++i) {
        if (visited[i])
          continue;
        const double d = squared_distance(anchors[current], anchors[i]);
        if (d < bestD) {
          bestD = d;
          next = i;
        }
      }
      visited[next] = 1;
      order.push_back(next);
      current = next;
    }
    return order;
  }

  PointIndex index(anchors);
  index.erase(current);
  std::vector<Neighbor> chi;
  while (!index.empty()) {
    index.nearest(anchors[current], params.candidate_subset_size, chi);
    // chi is sorted by (distance, index): its head is the argmin
    current = chi.front().index;
    index.erase(current);
    order.push_back(current);
  }
  return order;
}

ScanPath nn_route(std::span<const Point2> anchors, const RouteParams& params,
                  Point2 startNear)
{
  const auto order = nn_order(anchors, params, startNear);
  return ScanPath(reorder(anchors, order));
}

std::vector<std::size_t> exact_tsp_order(std::span<const Point2> anchors,
                                         std::size_t start)
{
  const std::size_t n = anchors.size();
  if (n == 0)
    throw InvalidArgument("exact_tsp needs at least one anchor");
  if (n > kMaxExactAnchors)
    throw InvalidArgument("exact_tsp is limited to " +
                          std::to_string(kMaxExactAnchors) + " anchors, got " +
                          std::to_string(n));
  if (start >= n)
    throw InvalidArgument("exact_tsp start index out of range");
  if (n == 1)
    return {0};

  // others[b] is the anchor behind bit b of the subset mask
  std::vector<std::size_t> others;
  for (std::size_t i = 0; i < n; ++i)
    if (i != start)
      others.push_back(i);
  const std::size_t m = others.size();
  const std::size_t full = (std::size_t{1} << m) - 1;
  constexpr double inf = std::numeric_limits<double>::infinity();

  // cost[mask][last]: shortest path from start covering mask, ending at last
  std::vector<double> cost((full + 1) * m, inf);
  std::vector<int> parent((full + 1) * m, -1);
  for (std::size_t b = 0; b < m; ++b)
    cost[(std::size_t{1} << b) * m + b] = distance(anchors[start], anchors[others[b]]);

  for (std::size_t mask = 1; mask <= full; ++mask) {
    for (std::size_t last = 0; last < m; ++last) {
      const double c = cost[mask * m + last];
      if (!(mask >> last & 1) || c == inf)
        continue;
      for (std::size_t nxt = 0; nxt < m; ++nxt) {
        if (mask >> nxt & 1)
          continue;
        const std::size_t nm = mask | (std::size_t{1} << nxt);
        const double nc = c + distance(anchors[others[last]], anchors[others[nxt]]);
        if (nc < cost[nm * m + nxt]) {
          cost[nm * m + nxt] = nc;
          parent[nm * m + nxt] = static_cast<int>(last);
        }
      }
    }
  }

  std::size_t last = 0;
  for (std::size_t b = 1; b < m; ++b)
    if (cost[full * m + b] < cost[full * m + last])
      last = b;

  std::vector<std::size_t> rev;
  std::size_t mask = full;
  int cur = static_cast<int>(last);
  while (cur >= 0) {
    rev.push_back(others[static_cast<std::size_t>(cur)]);
    const int p = parent[mask * m + static_cast<std::size_t>(cur)];
    mask &= ~(std::size_t{1} << cur);
    cur = p;
  }
  std::vector<std::size_t> order{start};
  order.insert(order.end(), rev.rbegin(), rev.rend());
  return order;
}

ScanPath exact_tsp(std::span<const Point2> anchors, std::size_t start)
{
  return ScanPath(reorder(anchors, exact_tsp_order(anchors, start)));
}

double path_length(const ScanPath& path)
{
  return path.length();
}

double path_length(std::span<const Point2> vertices)
{
  double acc = 0.0;
  for (std::size_t i = 1; i < vertices.size(); ++i)
    acc += distance(vertices[i - 1], vertices[i]);
  return acc;
}

std::vector<Point2> reorder(std::span<const Point2> anchors,
                            std::span<const std::size_t> order)
{
  std::vector<Point2> out;
  out.reserve(order.size());
  for (std::size_t i : order)
    out.push_back(anchors[i]);
  return out;
}

} // namespace flyscan
