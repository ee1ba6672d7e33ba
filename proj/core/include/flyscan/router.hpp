#ifndef FLYSCAN_ROUTER_HPP
#define FLYSCAN_ROUTER_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "flyscan/geometry.hpp"
#include "flyscan/scanner.hpp"

namespace flyscan {

struct RouteParams
{
  /// Size of the candidate subset examined per step; 0 means every
  /// unvisited anchor. A bounded subset holds the nearest unvisited anchors
  /// from a spatial index, so the chosen successor is the same either way.
  std::size_t candidate_subset_size = 0;
};

/// Greedy nearest-neighbor visiting order. The walk starts at the anchor
/// closest to `startNear` and repeatedly moves to the closest unvisited
/// anchor; ties go to the lowest index. Open path, no return to start.
/// Throws InvalidArgument for fewer than 2 anchors.
std::vector<std::size_t> nn_order(std::span<const Point2> anchors,
                                  const RouteParams& params = {},
                                  Point2 startNear = {0.0, 0.0});

ScanPath nn_route(std::span<const Point2> anchors, const RouteParams& params = {},
                  Point2 startNear = {0.0, 0.0});

/// Shortest open path visiting every anchor, starting at `anchors[start]`.
/// Exact (Held-Karp dynamic program); limited to 12 anchors.
std::vector<std::size_t> exact_tsp_order(std::span<const Point2> anchors,
                                         std::size_t start = 0);
ScanPath exact_tsp(std::span<const Point2> anchors, std::size_t start = 0);

double path_length(const ScanPath& path);
double path_length(std::span<const Point2> vertices);

/// Vertices of `anchors` taken in `order`.
std::vector<Point2> reorder(std::span<const Point2> anchors,
                            std::span<const std::size_t> order);

} // namespace flyscan

#endif
