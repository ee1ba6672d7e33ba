#include "flyscan/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "flyscan/errors.hpp"

namespace flyscan {

namespace {

enum Stream : std::uint64_t
{
  kInitialStream = 1,
  kScoreStream = 2,
  kRandomAnchorStream = 3,
};

template <typename Check>
void rethrow_as_config(const char* key, Check&& check)
{
  try {
    check();
  } catch (const InvalidArgument& e) {
    throw ConfigError(key, e.what());
  }
}

std::size_t budget_readouts(const RunConfig& config, const RasterReference& ref)
{
  if (!config.budget_cap)
    return std::numeric_limits<std::size_t>::max();
  return static_cast<std::size_t>(
    std::llround(*config.budget_cap * static_cast<double>(ref.readouts())));
}

std::vector<Point2> uniform_points(int width, int height, std::size_t n,
                                   std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(0.0, width - 1.0);
  std::uniform_real_distribution<double> uy(0.0, height - 1.0);
  std::vector<Point2> pts(n);
  for (Point2& p : pts) {
    p.x = ux(rng);
    p.y = uy(rng);
  }
  return pts;
}

void record(RunState& state, std::size_t newReadouts, std::size_t newAnchors)
{
  const RasterReference& ref = *state.reference;
  IterationRecord rec;
  rec.iter = state.k;
  rec.readouts = state.acquired;
  rec.sampling_frac = sampling_fraction(state.acquired, ref.readouts());
  const MetricReport m = report(state.recon, ref.image);
  rec.psnr_db = m.psnr_db;
  rec.ssim = m.ssim;
  rec.new_readouts = newReadouts;
  rec.new_anchors = newAnchors;
  rec.path_length = state.last_path.length();
  state.history.push_back(rec);
}

// Scans `path` starting at the current clock, applies the budget, merges and
// completes. Shared by the initial scan, adaptive and random iterations.
void scan_and_complete(RunState& state, const ImageGrid& truth,
                       const RunConfig& config, ScanPath path)
{
  const std::size_t budget = budget_readouts(config, *state.reference);
  ReadoutLog fresh;
  if (readout_count(path.length(), config.probe) > 0)
    fresh = fly_scan(truth, path, config.probe, state.end_time);

  const std::size_t room = budget > state.acquired ? budget - state.acquired : 0;
  if (fresh.size() >= room) {
    fresh.entries.resize(room);
    state.complete = true;
  }

  state.end_time += path.length() / config.probe.speed;
  state.end_point = path.back();
  state.acquired += fresh.size();
  state.readouts = merge_logs(state.readouts, fresh, config.idw.exact_hit_tol);
  if (state.readouts.empty())
    throw PathTooShort("no readouts acquired; initial path holds no full readout period");
  state.recon = idw_complete(state.readouts, truth.width(), truth.height(), config.idw);
  state.last_path = std::move(path);
}

// Route `fresh` from the previous endpoint and scan it.
RunState advance(RunState state, const ImageGrid& truth, const RunConfig& config,
                 AnchorSet fresh, std::vector<AdamTraceEntry> trace)
{
  std::vector<Point2> vertices{state.end_point};
  if (fresh.size() == 1) {
    vertices.push_back(fresh.points.front());
  } else {
    const auto order = nn_order(fresh.points, config.route, state.end_point);
    for (std::size_t i : order)
      vertices.push_back(fresh.points[i]);
  }

  const std::size_t before = state.acquired;
  scan_and_complete(state, truth, config, ScanPath(std::move(vertices)));
  ++state.k;
  state.scanned.append(fresh);
  state.last_trace = std::move(trace);
  record(state, state.acquired - before, fresh.size());
  return state;
}

} // namespace

void RunConfig::validate() const
{
  if (n_anchors < 1)
    throw ConfigError("n_anchors", "must be >= 1");
  if (n_iterations < 0)
    throw ConfigError("n_iterations", "must be >= 0");
  if (n_initial_anchors < 2)
    throw ConfigError("n_initial_anchors", "must be >= 2");
  if (budget_cap && !(*budget_cap > 0.0 && *budget_cap <= 1.0))
    throw ConfigError("budget_cap", "must lie in (0, 1]");
  if (!(raster_readouts_per_pixel > 0.0))
    throw ConfigError("raster_readouts_per_pixel", "must be > 0");

  if (!(objective.alpha >= 0.0)) throw ConfigError("alpha", "must be >= 0");
  if (!(objective.ell > 0.0)) throw ConfigError("ell", "must be > 0");
  if (!(objective.sigma > 0.0)) throw ConfigError("sigma", "must be > 0");
  if (objective.m_neighbors < 1) throw ConfigError("m_neighbors", "must be >= 1");
  if (!(objective.epsilon_log > 0.0)) throw ConfigError("epsilon_log", "must be > 0");
  if (!(objective.beta > 0.0)) throw ConfigError("beta", "must be > 0");
  if (!(objective.adam_b1 >= 0.0 && objective.adam_b1 < 1.0))
    throw ConfigError("adam_b1", "must lie in [0, 1)");
  if (!(objective.adam_b2 >= 0.0 && objective.adam_b2 < 1.0))
    throw ConfigError("adam_b2", "must lie in [0, 1)");
  if (!(objective.adam_eps > 0.0)) throw ConfigError("adam_eps", "must be > 0");
  if (objective.s_steps < 0) throw ConfigError("s_steps", "must be >= 0");

  if (!(probe.speed > 0.0)) throw ConfigError("speed", "must be > 0");
  if (!(probe.exposure_time > 0.0)) throw ConfigError("exposure_time", "must be > 0");
  if (!(probe.dead_time >= 0.0)) throw ConfigError("dead_time", "must be >= 0");
  if (!(probe.beam_radius >= 0.0)) throw ConfigError("beam_radius", "must be >= 0");
  if (probe.n_substeps < 1) throw ConfigError("n_substeps", "must be >= 1");
  if (probe.n_footprint < 1) throw ConfigError("n_footprint", "must be >= 1");

  if (idw.k_idw < 1) throw ConfigError("k_idw", "must be >= 1");
  if (!(idw.exact_hit_tol > 0.0)) throw ConfigError("exact_hit_tol", "must be > 0");
  rethrow_as_config("idw_power", [&] { idw.validate(); });
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t k)
{
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(mix(mix(seed) ^ stream) ^ k);
}

RasterReference make_raster_reference(const ImageGrid& truth, const RunConfig& config)
{
  RasterReference ref;
  ref.line_spacing = reference_line_spacing(truth.width(), truth.height(),
                                            config.probe,
                                            config.raster_readouts_per_pixel);
  ref.path = raster_path(truth, ref.line_spacing);
  ref.log = fly_scan(truth, ref.path, config.probe);
  ref.image = idw_complete(ref.log, truth.width(), truth.height(), config.idw);
  return ref;
}

RunState initial_scan(const ImageGrid& truth, const RunConfig& config,
                      std::shared_ptr<const RasterReference> reference)
{
  config.validate();
  if (!reference)
    reference = std::make_shared<const RasterReference>(
      make_raster_reference(truth, config));

  RunState state;
  state.reference = std::move(reference);
  AnchorSet anchors = AnchorSet::from_points(
    uniform_points(truth.width(), truth.height(),
                   static_cast<std::size_t>(config.n_initial_anchors),
                   derive_seed(config.seed, kInitialStream, 0)),
    0);
  const auto order = nn_order(anchors.points, config.route, {0.0, 0.0});
  ScanPath path(reorder(anchors.points, order));
  if (readout_count(path.length(), config.probe) == 0)
    throw PathTooShort("initial path of length " + std::to_string(path.length()) +
                       " px holds no full readout period");

  scan_and_complete(state, truth, config, std::move(path));
  state.scanned = std::move(anchors);
  record(state, state.acquired, state.scanned.size());
  return state;
}

RunState run_iteration(RunState state, const ImageGrid& truth, const RunConfig& config)
{
  if (state.complete)
    return state;
  const std::size_t budget = budget_readouts(config, *state.reference);
  if (state.acquired >= budget) {
    state.complete = true;
    return state;
  }

  const GradientField grad = central_gradient(state.recon);
  const std::size_t n = std::min<std::size_t>(static_cast<std::size_t>(config.n_anchors),
                                              grad.magnitude.size());
  const AnchorSet seeds =
    score_sample(grad, n, derive_seed(config.seed, kScoreStream,
                                      static_cast<std::uint64_t>(state.k)),
                 config.objective.score_mode);
  AdamResult opt = adam_optimize(grad, seeds, state.scanned.points, config.objective);

  AnchorSet fresh = std::move(opt.anchors);
  fresh.generation.assign(fresh.size(), state.k + 1);
  fresh.clamp_to(truth.width(), truth.height());
  fresh.deduplicate();
  return advance(std::move(state), truth, config, std::move(fresh),
                 std::move(opt.trace));
}

RunState run_full(const ImageGrid& truth, const RunConfig& config,
                  const RunObserver& observer,
                  std::shared_ptr<const RasterReference> reference)
{
  RunState state = initial_scan(truth, config, std::move(reference));
  if (observer)
    observer(state);
  while (state.k < config.n_iterations && !state.complete) {
    const int before = state.k;
    state = run_iteration(std::move(state), truth, config);
    if (observer && state.k != before)
      observer(state);
  }
  return state;
}

BaselineResult run_random_baseline(const ImageGrid& truth, const RunConfig& config,
                                   double targetFraction,
                                   std::shared_ptr<const RasterReference> reference)
{
  if (!(targetFraction > 0.0 && targetFraction <= 1.0))
    throw InvalidArgument("baseline target fraction must lie in (0, 1]");
  RunConfig capped = config;
  capped.budget_cap = targetFraction;

  RunState state = initial_scan(truth, capped, std::move(reference));
  const std::size_t target = budget_readouts(capped, *state.reference);
  // Uniform anchors always add path, so this terminates; the guard only
  // protects against a degenerate probe configuration.
  constexpr int kMaxIterations = 100000;
  while (!state.complete && state.acquired < target && state.k < kMaxIterations) {
    AnchorSet fresh = AnchorSet::from_points(
      uniform_points(truth.width(), truth.height(),
                     static_cast<std::size_t>(config.n_anchors),
                     derive_seed(config.seed, kRandomAnchorStream,
                                 static_cast<std::uint64_t>(state.k))),
      state.k + 1);
    state = advance(std::move(state), truth, capped, std::move(fresh), {});
  }

  BaselineResult out;
  out.report = report(state.recon, state.reference->image);
  out.readouts = state.acquired;
  out.sampling_frac = sampling_fraction(state.acquired, state.reference->readouts());
  out.state = std::move(state);
  return out;
}

std::vector<SweepRow> sweep(const ImageGrid& truth, const RunConfig& config,
                            const std::string& paramName,
                            std::span<const double> values,
                            std::shared_ptr<const RasterReference> reference)
{
  if (paramName != "alpha" && paramName != "ell")
    throw ConfigError(paramName, "unknown sweep parameter (expected alpha or ell)");
  if (!reference)
    reference = std::make_shared<const RasterReference>(
      make_raster_reference(truth, config));

  std::vector<SweepRow> rows;
  for (double v : values) {
    RunConfig c = config;
    (paramName == "alpha" ? c.objective.alpha : c.objective.ell) = v;
    const RunState s = run_full(truth, c, {}, reference);
    const IterationRecord& last = s.history.back();
    rows.push_back({v, last.psnr_db, last.ssim, last.sampling_frac});
  }
  return rows;
}

} // namespace flyscan
