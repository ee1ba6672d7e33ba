#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <random>

#include "flyscan/errors.hpp"
#include "flyscan/scanner.hpp"
#include "flyscan/test_images.hpp"

using namespace flyscan;

TEST_CASE("constant image gives constant readouts")
{
  const ImageGrid truth(32, 32, 0.37);
  const ScanPath path({{1, 1}, {30, 4}, {5, 28}});
  const ReadoutLog log = fly_scan(truth, path, ProbeConfig{});
  REQUIRE(log.size() == readout_count(path.length(), ProbeConfig{}));
  for (const Readout& r : log.entries)
    CHECK(r.value == doctest::Approx(0.37).epsilon(1e-14));
}

TEST_CASE("readouts on a ramp equal the ramp at the window midpoint")
{
  ImageGrid ramp(40, 10);
  for (int r = 0; r < 10; ++r)
    for (int c = 0; c < 40; ++c)
      ramp(r, c) = c / 39.0;
  const ProbeConfig probe;
  const ScanPath path({{2, 5}, {20, 5}});
  const ReadoutLog log = fly_scan(ramp, path, probe);
  CHECK(log.size() == 34); // floor(18 / 0.52)
  const double step = probe.speed * probe.period();
  for (std::size_t i = 0; i < log.size(); ++i) {
    const Readout& r = log.entries[i];
    const double mid = 2.0 + i * step + 0.5 * probe.speed * probe.exposure_time;
    CHECK(r.x == doctest::Approx(mid));
    CHECK(r.y == doctest::Approx(5.0));
    CHECK(r.value == doctest::Approx(mid / 39.0).epsilon(1e-12));
    CHECK(r.t == doctest::Approx(i * probe.period() + 0.5 * probe.exposure_time));
  }
}

TEST_CASE("consecutive readouts are one period of travel apart")
{
  const ImageGrid truth(64, 64, 0.5);
  const ScanPath path({{0, 0}, {63, 0}});
  const ReadoutLog log = fly_scan(truth, path, ProbeConfig{});
  for (std::size_t i = 1; i < log.size(); ++i)
    CHECK(log.entries[i].x - log.entries[i - 1].x == doctest::Approx(0.52));
}

TEST_CASE("readout count identity and speed scaling")
{
  ProbeConfig probe;
  CHECK(readout_count(1.04, probe) == 2);
  CHECK(readout_count(0.51, probe) == 0);
  for (double len : {3.0, 17.3, 250.0, 1000.0}) {
    CHECK(readout_count(len, probe) ==
          static_cast<std::size_t>(std::floor(len / (probe.speed * probe.period()))));
    ProbeConfig fast = probe;
    fast.speed = 2.0;
    const double half = readout_count(len, probe) / 2.0;
    CHECK(std::abs(static_cast<double>(readout_count(len, fast)) - half) <= 1.0);
  }
}

TEST_CASE("readout values stay within the truth range")
{
  const ImageGrid truth = synthetic_shapes(64);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 63.0);
  std::vector<Point2> v;
  for (int i = 0; i < 30; ++i)
    v.push_back({u(rng), u(rng)});
  const ReadoutLog log = fly_scan(truth, ScanPath(v), ProbeConfig{});
  double lo = 1.0, hi = 0.0;
  for (double x : truth.values()) {
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  for (const Readout& r : log.entries) {
    CHECK(r.value >= lo - 1e-12);
    CHECK(r.value <= hi + 1e-12);
  }
}

TEST_CASE("zero radius and one substep is point sampling at window midpoints")
{
  const ImageGrid truth = synthetic_shapes(32);
  ProbeConfig probe;
  probe.beam_radius = 0.0;
  probe.n_substeps = 1;
  const ScanPath path({{0.3, 0.7}, {30.2, 25.1}});
  const ReadoutLog log = fly_scan(truth, path, probe);
  for (const Readout& r : log.entries)
    CHECK(r.value == doctest::Approx(bilinear_sample(truth, r.x, r.y)).epsilon(1e-14));
}

TEST_CASE("footprint stencil is symmetric about the center")
{
  const auto offsets = footprint_offsets(ProbeConfig{});
  REQUIRE(offsets.size() == 5);
  double sx = 0.0, sy = 0.0;
  for (const Point2& o : offsets) {
    sx += o.x;
    sy += o.y;
    CHECK(std::hypot(o.x, o.y) <= 0.5 + 1e-12);
  }
  CHECK(sx == doctest::Approx(0.0));
  CHECK(sy == doctest::Approx(0.0));
}

TEST_CASE("too-short paths are rejected")
{
  const ImageGrid truth(8, 8, 0.1);
  CHECK_THROWS_AS(fly_scan(truth, ScanPath({{1, 1}}), ProbeConfig{}), PathTooShort);
  CHECK_THROWS_AS(fly_scan(truth, ScanPath({{1, 1}, {1.3, 1}}), ProbeConfig{}),
                  PathTooShort);
}

TEST_CASE("raster paths")
{
  SUBCASE("2x2 at unit spacing has length 3")
  {
    const ScanPath p = raster_path(2, 2, 1.0);
    CHECK(p.length() == doctest::Approx(3.0));
  }
  SUBCASE("serpentine rows, last row pinned to the bottom edge")
  {
    const ScanPath p = raster_path(10, 10, 4.0);
    const auto& v = p.vertices();
    REQUIRE(v.size() == 8); // rows 0, 4, 8, 9
    CHECK(v[1].x == 9.0);
    CHECK(v[2].x == 9.0);
    CHECK(v[3].x == 0.0);
    CHECK(v.back().y == 9.0);
  }
  SUBCASE("256x256 reference is about 4 readouts per pixel")
  {
    const ProbeConfig probe;
    const double spacing = reference_line_spacing(256, 256, probe);
    CHECK(spacing < 0.5);
    const std::size_t n = readout_count(raster_path(256, 256, spacing).length(), probe);
    CHECK(std::abs(static_cast<double>(n) - 262139.0) / 262139.0 < 0.01);
  }
  SUBCASE("401x81 reference under the same rule")
  {
    const ProbeConfig probe;
    const double spacing = reference_line_spacing(401, 81, probe);
    const std::size_t n = readout_count(raster_path(401, 81, spacing).length(), probe);
    CHECK(std::abs(static_cast<double>(n) - 129921.0) / 129921.0 < 0.01);
  }
}

TEST_CASE("sampling fraction")
{
  CHECK(sampling_fraction(50, 200) == 0.25);
  CHECK(sampling_fraction(0, 200) == 0.0);
  CHECK_THROWS(sampling_fraction(1, 0));
}

TEST_CASE("readout CSV round trip")
{
  ReadoutLog log;
  log.entries = {{0.25, 1.5, 2.5, 0.125}, {0.77, 3.25, 4.0, 0.9}};
  const auto p = std::filesystem::temp_directory_path() / "flyscan_unit_readouts.csv";
  write_readouts_csv(log, p);
  const ReadoutLog back = read_readouts_csv(p);
  REQUIRE(back.size() == 2);
  CHECK(back.entries[1].x == 3.25);
  CHECK(back.entries[1].value == doctest::Approx(0.9));
}
