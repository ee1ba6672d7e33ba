#ifndef FLYSCAN_OBJECTIVE_HPP
#define FLYSCAN_OBJECTIVE_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <utility>
#include <vector>

#include "flyscan/geometry.hpp"
#include "flyscan/grid.hpp"
#include "flyscan/spatial_index.hpp"

namespace flyscan {

/// Anchor points with the scan iteration that produced each one.
struct AnchorSet
{
  std::vector<Point2> points;
  std::vector<int> generation;

  std::size_t size() const noexcept { return points.size(); }
  bool empty() const noexcept { return points.empty(); }

  void add(const Point2& p, int gen)
  {
    points.push_back(p);
    generation.push_back(gen);
  }
  void append(const AnchorSet& other);

  /// Drops every point closer than `tol` to an earlier kept point.
  void deduplicate(double tol = 1e-9);
  void clamp_to(int width, int height);

  static AnchorSet from_points(std::vector<Point2> pts, int gen = 0);
};

/// How the score function turns gradient magnitudes into initial anchors.
enum class ScoreMode
{
  weighted, ///< N draws without replacement, probability proportional to it
  top,      ///< the N pixels of highest gradient magnitude
};

struct ObjectiveParams
{
  ScoreMode score_mode = ScoreMode::weighted;
  double alpha = 10.0;       ///< weight of the uncertainty term
  double ell = 4.0;          ///< characteristic length scale, px
  double sigma = 1.0;        ///< noise standard deviation
  int m_neighbors = 8;       ///< scanned neighbors per query point
  double epsilon_log = 1e-8; ///< floor inside both logarithms
  double beta = 0.5;         ///< ADAM learning rate, px
  double adam_b1 = 0.9;
  double adam_b2 = 0.999;
  double adam_eps = 1e-8;
  int s_steps = 50;

  void validate() const;
};

/// Picks `n` distinct pixels from the normalized gradient-magnitude
/// distribution. ScoreMode::top keeps the n most probable pixels (seeded
/// random tie-break); ScoreMode::weighted draws without replacement with
/// probability proportional to the magnitude. Either way zero-gradient pixels
/// are drawn uniformly only once the nonzero support is exhausted, so a
/// constant image degenerates to a uniform draw. Each pixel maps to
/// (col + 0.5, row + 0.5), clamped to the image rectangle. All anchors get
/// generation 0. Throws InvalidArgument when n exceeds the pixel count.
AnchorSet score_sample(const GradientField& grad, std::size_t n,
                       std::uint64_t seed, ScoreMode mode = ScoreMode::weighted);
AnchorSet score_sample(const ImageGrid& recon, std::size_t n, std::uint64_t seed,
                       ScoreMode mode = ScoreMode::weighted);

/// Exponentially weighted uncertainty of `query` given the scanned anchors.
/// Per query point, softmax weights run over its M nearest scanned points.
double ewuf(std::span<const Point2> query, std::span<const Point2> scanned,
            const ObjectiveParams& params);

/// Everything the loss needs that does not change while candidates move.
class AnchorObjective
{
public:
  AnchorObjective(const GradientField& grad, std::span<const Point2> scanned,
                  const ObjectiveParams& params);

  struct Evaluation
  {
    double loss = 0.0;
    double uncertainty = 0.0;   ///< EWUF
    double gradient_norm = 0.0; ///< G, L2 norm of interpolated magnitudes
    std::vector<Point2> gradient; ///< d loss / d candidate, empty unless asked
  };

  Evaluation evaluate(std::span<const Point2> candidates, bool withGradient) const;

  /// Per-query contribution sigma^2 (1 - exp(-sum_j lambda_j d_j)).
  double point_uncertainty(const Point2& q) const;

  /// Softmax weights for query `q` over its neighbors, in neighbor order.
  std::vector<std::pair<Neighbor, double>> weights(const Point2& q) const;

  const ObjectiveParams& params() const noexcept { return mParams; }

private:
  struct QueryTerms
  {
    double energy = 0.0; // sum_j lambda_j d_j
    Point2 dEnergy;      // d energy / d q
  };
  QueryTerms query_terms(const Point2& q, bool withGradient,
                         std::vector<Neighbor>& scratch) const;

  ImageGrid mMagnitude;
  std::vector<Point2> mScanned;
  PointIndex mIndex;
  ObjectiveParams mParams;
};

/// -(alpha * log(EWUF + eps) + log(G + eps)); lower is better.
double loss(const GradientField& grad, std::span<const Point2> candidates,
            std::span<const Point2> scanned, const ObjectiveParams& params);

/// Analytic d loss / d candidate with nearest-neighbor assignments held fixed.
std::vector<Point2> loss_gradient(const GradientField& grad,
                                  std::span<const Point2> candidates,
                                  std::span<const Point2> scanned,
                                  const ObjectiveParams& params);

struct AdamTraceEntry
{
  int step = 0;
  double loss = 0.0;
};

struct AdamResult
{
  AnchorSet anchors;      ///< best iterate, generation copied from the input
  double initial_loss = 0.0;
  double best_loss = 0.0;
  int best_step = 0;
  std::vector<AdamTraceEntry> trace;
};

/// Runs `s_steps` ADAM updates on the candidate coordinates only; scanned
/// anchors stay frozen. Coordinates are clamped to the image after each step
/// and neighbor assignments are refreshed every step. Returns the iterate
/// with the lowest loss (the initial set counts as step 0).
/// Throws NumericalError if the loss becomes non-finite.
AdamResult adam_optimize(const GradientField& grad, const AnchorSet& initial,
                         std::span<const Point2> scanned,
                         const ObjectiveParams& params);

/// CSV with header `iter,x,y`, one row per anchor.
void write_anchors_csv(const AnchorSet& anchors, const std::filesystem::path& path);
void write_trace_csv(std::span<const AdamTraceEntry> trace,
                     const std::filesystem::path& path);

} // namespace flyscan

#endif
