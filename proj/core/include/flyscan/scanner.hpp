#ifndef FLYSCAN_SCANNER_HPP
#define FLYSCAN_SCANNER_HPP

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

#include "flyscan/geometry.hpp"
#include "flyscan/grid.hpp"

namespace flyscan {

/// Fly-scan probe physics. Lengths are in pixels, times in seconds.
struct ProbeConfig
{
  double speed = 1.0;          ///< px/s (1 px = 1 nm)
  double exposure_time = 0.5;  ///< t_e
  double dead_time = 0.02;     ///< t_d
  double beam_radius = 0.5;    ///< px
  int n_substeps = 8;          ///< arc-length quadrature nodes per window
  int n_footprint = 5;         ///< offsets across the beam disk

  /// Throws InvalidArgument naming the offending field.
  void validate() const;

  double period() const noexcept { return exposure_time + dead_time; }
};

/// Polyline with precomputed cumulative arc length.
class ScanPath
{
public:
  ScanPath() = default;
  explicit ScanPath(std::vector<Point2> vertices);

  const std::vector<Point2>& vertices() const noexcept { return mVertices; }
  const std::vector<double>& cumulative_length() const noexcept { return mCumulative; }
  std::size_t size() const noexcept { return mVertices.size(); }
  bool empty() const noexcept { return mVertices.empty(); }

  double length() const noexcept
  {
    return mCumulative.empty() ? 0.0 : mCumulative.back();
  }

  /// Position at arc length `s`, clamped to [0, length()].
  Point2 point_at(double s) const;

  const Point2& front() const { return mVertices.front(); }
  const Point2& back() const { return mVertices.back(); }

private:
  std::vector<Point2> mVertices;
  std::vector<double> mCumulative;
};

struct Readout
{
  double t = 0.0;
  double x = 0.0;
  double y = 0.0;
  double value = 0.0;

  Point2 position() const noexcept { return {x, y}; }
};

/// Time-ordered detector readouts.
struct ReadoutLog
{
  std::vector<Readout> entries;

  std::size_t size() const noexcept { return entries.size(); }
  bool empty() const noexcept { return entries.empty(); }
  std::vector<Point2> positions() const;
};

/// Number of readouts a path of the given length yields: a readout is
/// delivered at the end of its dead time, so only whole periods count.
std::size_t readout_count(double pathLength, const ProbeConfig& probe);

/// Simulates a constant-speed fly-scan along `path` over `truth`.
///
/// Readout i integrates arc length [i*v*T, i*v*T + v*t_e) with T = t_e + t_d.
/// The value is the average of `n_substeps` midpoint-rule samples along the
/// window, each itself averaged over the beam footprint stencil. The logged
/// position is the window's arc-length midpoint and the logged time is the
/// window's mid-exposure time offset by `startTime`.
///
/// Throws PathTooShort when not even one readout fits.
ReadoutLog fly_scan(const ImageGrid& truth, const ScanPath& path,
                    const ProbeConfig& probe, double startTime = 0.0);

/// Footprint stencil offsets: the center plus n-1 points on a ring of radius
/// r/sqrt(2). A zero radius collapses to the center alone.
std::vector<Point2> footprint_offsets(const ProbeConfig& probe);

/// Serpentine path over [0, width-1] x [0, height-1]; rows are spaced
/// `lineSpacing` apart and the last row always sits at height-1.
ScanPath raster_path(int width, int height, double lineSpacing);
inline ScanPath raster_path(const ImageGrid& img, double lineSpacing)
{
  return raster_path(img.width(), img.height(), lineSpacing);
}

/// Line spacing whose raster scan yields about `readoutsPerPixel` readouts
/// per pixel under `probe` (4 reproduces 262,139 readouts for 256x256).
double reference_line_spacing(int width, int height, const ProbeConfig& probe,
                              double readoutsPerPixel = 4.0);

/// Accumulated readouts over the raster reference count. 0 for an empty log.
double sampling_fraction(std::size_t readouts, std::size_t rasterReference);
inline double sampling_fraction(const ReadoutLog& log, std::size_t rasterReference)
{
  return sampling_fraction(log.size(), rasterReference);
}

/// CSV with header `t,x,y,value`, 9 significant digits.
void write_readouts_csv(const ReadoutLog& log, const std::filesystem::path& path);
ReadoutLog read_readouts_csv(const std::filesystem::path& path);

/// CSV with header `order,x,y`.
void write_path_csv(const ScanPath& path, const std::filesystem::path& file);

} // namespace flyscan

#endif
