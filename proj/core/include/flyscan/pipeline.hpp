#ifndef FLYSCAN_PIPELINE_HPP
#define FLYSCAN_PIPELINE_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "flyscan/completion.hpp"
#include "flyscan/grid.hpp"
#include "flyscan/metrics.hpp"
#include "flyscan/objective.hpp"
#include "flyscan/router.hpp"
#include "flyscan/scanner.hpp"

namespace flyscan {

struct RunConfig
{
  int n_anchors = 600;        ///< N, anchors added per iteration
  int n_iterations = 16;      ///< K
  int n_initial_anchors = 30; ///< random anchors of the initial scan
  ObjectiveParams objective;
  ProbeConfig probe;
  RouteParams route;
  IdwParams idw;
  std::uint64_t seed = 0;
  /// Stop once this fraction of the raster reference readouts is spent.
  std::optional<double> budget_cap;
  /// Density of the raster reference scan.
  double raster_readouts_per_pixel = 4.0;

  /// Throws ConfigError naming the offending key.
  void validate() const;
};

/// Dense serpentine fly-scan of the truth and its completion. Its readout
/// count is the 100% sampling budget and its image is the metric reference.
struct RasterReference
{
  double line_spacing = 0.0;
  ScanPath path;
  ReadoutLog log;
  ImageGrid image;

  std::size_t readouts() const noexcept { return log.size(); }
};

RasterReference make_raster_reference(const ImageGrid& truth, const RunConfig& config);

struct IterationRecord
{
  int iter = 0;
  std::size_t readouts = 0;      ///< acquired so far, all iterations
  double sampling_frac = 0.0;
  double psnr_db = 0.0;
  double ssim = 0.0;
  std::size_t new_readouts = 0;
  std::size_t new_anchors = 0;
  double path_length = 0.0;
};

struct RunState
{
  int k = 0;
  ReadoutLog readouts;             ///< merged log feeding the completion
  std::size_t acquired = 0;        ///< readouts spent, duplicates included
  AnchorSet scanned;               ///< Omega*, generation = iteration index
  ImageGrid recon;                 ///< f^k
  std::vector<IterationRecord> history;
  ScanPath last_path;
  std::vector<AdamTraceEntry> last_trace;
  Point2 end_point;
  double end_time = 0.0;
  bool complete = false;           ///< budget cap reached
  std::shared_ptr<const RasterReference> reference;
};

using RunObserver = std::function<void(const RunState&)>;

/// Random anchors, routed and fly-scanned, completed into f^0.
RunState initial_scan(const ImageGrid& truth, const RunConfig& config,
                      std::shared_ptr<const RasterReference> reference = nullptr);

/// One adaptive iteration: score sampling, ADAM refinement, greedy routing
/// from the previous endpoint, fly-scan, merge and completion.
RunState run_iteration(RunState state, const ImageGrid& truth, const RunConfig& config);

/// initial_scan followed by up to K iterations (fewer if the budget runs out).
/// `observer` sees the state after the initial scan and after every iteration.
RunState run_full(const ImageGrid& truth, const RunConfig& config,
                  const RunObserver& observer = {},
                  std::shared_ptr<const RasterReference> reference = nullptr);

struct BaselineResult
{
  MetricReport report;
  std::size_t readouts = 0;
  double sampling_frac = 0.0;
  RunState state;
};

/// Same loop with uniformly drawn anchors (no score function, no objective),
/// continued until `targetFraction` of the raster reference is spent.
BaselineResult run_random_baseline(const ImageGrid& truth, const RunConfig& config,
                                   double targetFraction,
                                   std::shared_ptr<const RasterReference> reference = nullptr);

struct SweepRow
{
  double value = 0.0;
  double psnr_db = 0.0;
  double ssim = 0.0;
  double sampling_frac = 0.0;
};

/// run_full per value of `paramName` ("alpha" or "ell"), fixed seed.
std::vector<SweepRow> sweep(const ImageGrid& truth, const RunConfig& config,
                            const std::string& paramName,
                            std::span<const double> values,
                            std::shared_ptr<const RasterReference> reference = nullptr);

/// Mixes a run seed with a stream tag and iteration index (splitmix64).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t k);

} // namespace flyscan

#endif
