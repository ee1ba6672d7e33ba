#include "flyscan/scanner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include "flyscan/errors.hpp"

namespace flyscan {

namespace {

// Guards floor() against products like 1.04 / 0.52 landing a hair below 2.
constexpr double kCountSlack = 1e-9;

} // namespace

void ProbeConfig::validate() const
{
  if (!(speed > 0.0))
    throw InvalidArgument("probe speed must be > 0");
  if (!(exposure_time > 0.0))
    throw InvalidArgument("probe exposure_time must be > 0");
  if (!(dead_time >= 0.0))
    throw InvalidArgument("probe dead_time must be >= 0");
  if (!(beam_radius >= 0.0))
    throw InvalidArgument("probe beam_radius must be >= 0");
  if (n_substeps < 1)
    throw InvalidArgument("probe n_substeps must be >= 1");
  if (n_footprint < 1)
    throw InvalidArgument("probe n_footprint must be >= 1");
}

ScanPath::ScanPath(std::vector<Point2> vertices) : mVertices(std::move(vertices))
{
  mCumulative.reserve(mVertices.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < mVertices.size(); ++i) {
    if (i > 0)
      acc += distance(mVertices[i - 1], mVertices[i]);
    mCumulative.push_back(acc);
  }
}

Point2 ScanPath::point_at(double s) const
{
  if (mVertices.empty())
    throw InvalidArgument("point_at on an empty path");
  if (s <= 0.0 || mVertices.size() == 1)
    return mVertices.front();
  if (s >= length())
    return mVertices.back();
  // first vertex whose cumulative length exceeds s
  const auto it = std::upper_bound(mCumulative.begin(), mCumulative.end(), s);
  const std::size_t hi = static_cast<std::size_t>(it - mCumulative.begin());
  const std::size_t lo = hi - 1;
  const double seg = mCumulative[hi] - mCumulative[lo];
  const double t = seg > 0.0 ? (s - mCumulative[lo]) / seg : 0.0;
  const Point2& a = mVertices[lo];
  const Point2& b = mVertices[hi];
  return {a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)};
}

std::vector<Point2> ReadoutLog::positions() const
{
  std::vector<Point2> out;
  out.reserve(entries.size());
  for (const Readout& r : entries)
    out.push_back(r.position());
  return out;
}

std::size_t readout_count(double pathLength, const ProbeConfig& probe)
{
  if (!(pathLength > 0.0))
    return 0;
  const double periods = pathLength / (probe.speed * probe.period());
  return static_cast<std::size_t>(std::floor(periods + kCountSlack));
}

std::vector<Point2> footprint_offsets(const ProbeConfig& probe)
{
  std::vector<Point2> offsets{{0.0, 0.0}};
  if (probe.beam_radius == 0.0 || probe.n_footprint == 1)
    return offsets;
  const double rho = probe.beam_radius / std::numbers::sqrt2;
  const int ring = probe.n_footprint - 1;
  for (int k = 0; k < ring; ++k) {
    const double a = 2.0 * std::numbers::pi * k / ring;
    offsets.push_back({rho * std::cos(a), rho * std::sin(a)});
  }
  // cos(pi/2) is not exactly 0; snap so the stencil stays symmetric
  for (Point2& o : offsets) {
    if (std::abs(o.x) < 1e-15 * rho) o.x = 0.0;
    if (std::abs(o.y) < 1e-15 * rho) o.y = 0.0;
  }
  return offsets;
}

ReadoutLog fly_scan(const ImageGrid& truth, const ScanPath& path,
                    const ProbeConfig& probe, double startTime)
{
  probe.validate();
  if (truth.empty())
    throw InvalidArgument("fly_scan on an empty image");
  if (path.size() < 2)
    throw PathTooShort("fly_scan needs a path with at least 2 vertices");

  const std::size_t count = readout_count(path.length(), probe);
  if (count == 0)
    throw PathTooShort("path of length " + std::to_string(path.length()) +
                       " px holds no complete readout period");

  const std::vector<Point2> offsets = footprint_offsets(probe);
  const double exposureLength = probe.speed * probe.exposure_time;
  const double periodLength = probe.speed * probe.period();
  const int sub = probe.n_substeps;

  ReadoutLog log;
  log.entries.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double s0 = static_cast<double>(i) * periodLength;
    double acc = 0.0;
    for (int j = 0; j < sub; ++j) {
      const Point2 p = path.point_at(s0 + exposureLength * (j + 0.5) / sub);
      double footprint = 0.0;
      for (const Point2& o : offsets)
        footprint += bilinear_sample(truth, p.x + o.x, p.y + o.y);
      acc += footprint / static_cast<double>(offsets.size());
    }
    const Point2 mid = path.point_at(s0 + 0.5 * exposureLength);
    const double t = startTime + static_cast<double>(i) * probe.period() +
                     0.5 * probe.exposure_time;
    log.entries.push_back({t, mid.x, mid.y, acc / sub});
  }
  return log;
}

ScanPath raster_path(int width, int height, double lineSpacing)
{
  if (width < 1 || height < 1)
    throw DimensionError("raster_path needs a non-empty image");
  if (!(lineSpacing > 0.0))
    throw InvalidArgument("raster line spacing must be > 0");

  const double xMax = width - 1;
  const double yMax = height - 1;
  std::vector<double> rows;
  const std::size_t full =
    static_cast<std::size_t>(std::floor(yMax / lineSpacing + kCountSlack));
  for (std::size_t i = 0; i <= full; ++i)
    rows.push_back(std::min(static_cast<double>(i) * lineSpacing, yMax));
  if (yMax - rows.back() > 1e-9)
    rows.push_back(yMax);

  std::vector<Point2> v;
  v.reserve(rows.size() * 2);
  bool leftToRight = true;
  for (double y : rows) {
    if (leftToRight) {
      v.push_back({0.0, y});
      v.push_back({xMax, y});
    } else {
      v.push_back({xMax, y});
      v.push_back({0.0, y});
    }
    leftToRight = !leftToRight;
  }
  return ScanPath(std::move(v));
}

double reference_line_spacing(int width, int height, const ProbeConfig& probe,
                              double readoutsPerPixel)
{
  probe.validate();
  if (width < 2 || height < 2)
    throw DimensionError("raster reference needs at least 2x2 pixels");
  if (!(readoutsPerPixel > 0.0))
    throw InvalidArgument("readouts per pixel must be > 0");
  const double targetLength = readoutsPerPixel * width * height *
                              probe.speed * probe.period();
  // rows * (width - 1) of sweeps plus (height - 1) of row changes
  const double rows = std::round((targetLength - (height - 1)) / (width - 1));
  return (height - 1) / std::max(rows - 1.0, 1.0);
}

double sampling_fraction(std::size_t readouts, std::size_t rasterReference)
{
  if (rasterReference == 0)
    throw InvalidArgument("raster reference count must be > 0");
  return static_cast<double>(readouts) / static_cast<double>(rasterReference);
}

void write_readouts_csv(const ReadoutLog& log, const std::filesystem::path& path)
{
  std::FILE* f = std::fopen(path.string().c_str(), "w");
  if (!f)
    throw IoError(path.string() + ": cannot open for writing");
  std::fputs("t,x,y,value\n", f);
  for (const Readout& r : log.entries)
    std::fprintf(f, "%.9g,%.9g,%.9g,%.9g\n", r.t, r.x, r.y, r.value);
  if (std::fclose(f) != 0)
    throw IoError(path.string() + ": write failed");
}

ReadoutLog read_readouts_csv(const std::filesystem::path& path)
{
  std::ifstream in(path);
  if (!in)
    throw IoError(path.string() + ": cannot open for reading");
  std::string line;
  if (!std::getline(in, line) || line.rfind("t,x,y,value", 0) != 0)
    throw IoError(path.string() + ": missing header t,x,y,value");
  ReadoutLog log;
  std::size_t lineNo = 1;
  while (std::getline(in, line)) {
    ++lineNo;
    if (line.empty())
      continue;
    Readout r;
    char c1, c2, c3;
    std::istringstream ss(line);
    if (!(ss >> r.t >> c1 >> r.x >> c2 >> r.y >> c3 >> r.value) ||
        c1 != ',' || c2 != ',' || c3 != ',')
      throw IoError(path.string() + ":" + std::to_string(lineNo) +
                    ": malformed readout row");
    log.entries.push_back(r);
  }
  return log;
}

void write_path_csv(const ScanPath& path, const std::filesystem::path& file)
{
  std::FILE* f = std::fopen(file.string().c_str(), "w");
  if (!f)
    throw IoError(file.string() + ": cannot open for writing");
  std::fputs("order,x,y\n", f);
  for (std::size_t i = 0; i < path.size(); ++i)
    std::fprintf(f, "%zu,%.9g,%.9g\n", i, path.vertices()[i].x,
                 path.vertices()[i].y);
  if (std::fclose(f) != 0)
    throw IoError(file.string() + ": write failed");
}

} // namespace flyscan
