#include "flyscan/objective.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>

#include "flyscan/errors.hpp"

namespace flyscan {

void AnchorSet::append(const AnchorSet& other)
{
  points.insert(points.end(), other.points.begin(), other.points.end());
  generation.insert(generation.end(), other.generation.begin(),
                    other.generation.end());
}

void AnchorSet::deduplicate(double tol)
{
  if (points.size() < 2)
    return;
  const PointIndex index(points);
  std::vector<char> keep(points.size(), 1);
  std::vector<std::size_t> near;
  for (std::size_t i = 0; i < points.size(); ++i) {
    index.within(points[i], tol, near);
    for (std::size_t j : near) {
      if (j < i && keep[j]) {
        keep[i] = 0;
        break;
      }
    }
  }
  AnchorSet out;
  for (std::size_t i = 0; i < points.size(); ++i)
    if (keep[i])
      out.add(points[i], generation[i]);
  *this = std::move(out);
}

void AnchorSet::clamp_to(int width, int height)
{
  for (Point2& p : points)
    p = clamp_to_bounds(width, height, p);
}

AnchorSet AnchorSet::from_points(std::vector<Point2> pts, int gen)
{
  AnchorSet a;
  a.generation.assign(pts.size(), gen);
  a.points = std::move(pts);
  return a;
}

void ObjectiveParams::validate() const
{
  if (!(alpha >= 0.0))
    throw InvalidArgument("alpha must be >= 0");
  if (!(ell > 0.0))
    throw InvalidArgument("ell must be > 0");
  if (!(sigma > 0.0))
    throw InvalidArgument("sigma must be > 0");
  if (m_neighbors < 1)
    throw InvalidArgument("m_neighbors must be >= 1");
  if (!(epsilon_log > 0.0))
    throw InvalidArgument("epsilon_log must be > 0");
  if (!(beta > 0.0))
    throw InvalidArgument("beta must be > 0");
  if (s_steps < 0)
    throw InvalidArgument("s_steps must be >= 0");
}

AnchorSet score_sample(const GradientField& grad, std::size_t n,
                       std::uint64_t seed, ScoreMode mode)
{
  const ImageGrid& mag = grad.magnitude;
  const std::size_t total = mag.size();
  if (n == 0)
    throw InvalidArgument("score_sample needs n >= 1");
  if (n > total)
    throw InvalidArgument("score_sample: n = " + std::to_string(n) +
                          " exceeds pixel count " + std::to_string(total));

  // Weighted sampling without replacement by exponential keys: pixel i gets
  // key log(u_i) / w_i and the n largest keys win. In top mode the key is the
  // weight itself and u only breaks ties. Zero-weight pixels rank after every
  // positive one, among themselves uniformly at random.
  struct Key
  {
    bool positive;
    double key;
    double tie;
    std::size_t index;
  };
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Key> keys(total);
  for (std::size_t i = 0; i < total; ++i) {
    const double w = mag.values()[i];
    const double u = 1.0 - unit(rng); // (0, 1]
    if (!(w > 0.0 && std::isfinite(w)))
      keys[i] = {false, u, u, i};
    else if (mode == ScoreMode::weighted)
      keys[i] = {true, std::log(u) / w, u, i};
    else
      keys[i] = {true, w, u, i};
  }
  auto better = [](const Key& a, const Key& b) {
    if (a.positive != b.positive)
      return a.positive;
    if (a.key != b.key)
      return a.key > b.key;
    if (a.tie != b.tie)
      return a.tie > b.tie;
    return a.index < b.index;
  };
  std::partial_sort(keys.begin(), keys.begin() + static_cast<std::ptrdiff_t>(n),
                    keys.end(), better);

  AnchorSet out;
  out.points.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto row = static_cast<int>(keys[k].index / mag.width());
    const auto col = static_cast<int>(keys[k].index % mag.width());
    out.add(clamp_to_image(mag, {col + 0.5, row + 0.5}), 0);
  }
  return out;
}

AnchorSet score_sample(const ImageGrid& recon, std::size_t n, std::uint64_t seed,
                       ScoreMode mode)
{
  return score_sample(central_gradient(recon), n, seed, mode);
}

AnchorObjective::AnchorObjective(const GradientField& grad,
                                 std::span<const Point2> scanned,
                                 const ObjectiveParams& params)
  : mMagnitude(grad.magnitude), mScanned(scanned.begin(), scanned.end()),
    mIndex(scanned), mParams(params)
{
  mParams.validate();
  if (mScanned.empty())
    throw InvalidArgument("objective needs at least one scanned anchor");
}

AnchorObjective::QueryTerms
AnchorObjective::query_terms(const Point2& q, bool withGradient,
                             std::vector<Neighbor>& nb) const
{
  const double invEll2 = 1.0 / (mParams.ell * mParams.ell);
  mIndex.nearest(q, static_cast<std::size_t>(mParams.m_neighbors), nb);

  // softmax of -d, shifted by the smallest d for stability
  const double dMin = nb.front().dist2 * invEll2;
  double z = 0.0;
  double weighted = 0.0;
  for (const Neighbor& n : nb) {
    const double d = n.dist2 * invEll2;
    const double w = std::exp(dMin - d);
    z += w;
    weighted += w * d;
  }
  QueryTerms t;
  t.energy = weighted / z;
  if (!withGradient)
    return t;

  // dE/dd_k = lambda_k (1 - d_k + E);  dd_k/dq = 2 (q - p_k) / ell^2
  for (const Neighbor& n : nb) {
    const double d = n.dist2 * invEll2;
    const double lambda = std::exp(dMin - d) / z;
    const double c = lambda * (1.0 - d + t.energy) * 2.0 * invEll2;
    const Point2& p = mScanned[n.index];
    t.dEnergy.x += c * (q.x - p.x);
    t.dEnergy.y += c * (q.y - p.y);
  }
  return t;
}

namespace {

// Mean of 1 - exp(-E_i) from both of its running sums. Near saturation the
// complement sum keeps the result strictly below 1.
double mean_uncertainty(double growSum, double decaySum, double n)
{
  const double grow = growSum / n;
  return grow > 0.5 ? 1.0 - decaySum / n : grow;
}

} // namespace

double AnchorObjective::point_uncertainty(const Point2& q) const
{
  std::vector<Neighbor> nb;
  const double e = query_terms(q, false, nb).energy;
  return mParams.sigma * mParams.sigma * -std::expm1(-e);
}

std::vector<std::pair<Neighbor, double>> AnchorObjective::weights(const Point2& q) const
{
  const double invEll2 = 1.0 / (mParams.ell * mParams.ell);
  const auto nb = mIndex.nearest(q, static_cast<std::size_t>(mParams.m_neighbors));
  const double dMin = nb.front().dist2 * invEll2;
  double z = 0.0;
  for (const Neighbor& n : nb)
    z += std::exp(dMin - n.dist2 * invEll2);
  std::vector<std::pair<Neighbor, double>> out;
  for (const Neighbor& n : nb)
    out.emplace_back(n, std::exp(dMin - n.dist2 * invEll2) / z);
  return out;
}

AnchorObjective::Evaluation
AnchorObjective::evaluate(std::span<const Point2> candidates, bool withGradient) const
{
  if (candidates.empty())
    throw InvalidArgument("objective needs at least one candidate");

  const double n = static_cast<double>(candidates.size());
  const double sigma2 = mParams.sigma * mParams.sigma;
  const double eps = mParams.epsilon_log;

  std::vector<QueryTerms> terms(candidates.size());
  std::vector<SampleWithGradient> mags(candidates.size());
  std::vector<Neighbor> scratch;
  double uSum = 0.0;
  double dSum = 0.0;
  double g2 = 0.0;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    terms[i] = query_terms(candidates[i], withGradient, scratch);
    uSum += -std::expm1(-terms[i].energy);
    dSum += std::exp(-terms[i].energy);
    mags[i] = bilinear_sample_with_gradient(mMagnitude, candidates[i].x,
                                            candidates[i].y);
    g2 += mags[i].value * mags[i].value;
  }

  Evaluation ev;
  ev.uncertainty = sigma2 * mean_uncertainty(uSum, dSum, n);
  ev.gradient_norm = std::sqrt(g2);
  ev.loss = -(mParams.alpha * std::log(ev.uncertainty + eps) +
              std::log(ev.gradient_norm + eps));
  if (!withGradient)
    return ev;

  const double cU = -mParams.alpha / (ev.uncertainty + eps) * sigma2 / n;
  const double cG = ev.gradient_norm > 0.0
                      ? -1.0 / ((ev.gradient_norm + eps) * ev.gradient_norm)
                      : 0.0;
  ev.gradient.resize(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const double decay = std::exp(-terms[i].energy);
    ev.gradient[i].x = cU * decay * terms[i].dEnergy.x +
                       cG * mags[i].value * mags[i].dx;
    ev.gradient[i].y = cU * decay * terms[i].dEnergy.y +
                       cG * mags[i].value * mags[i].dy;
  }
  return ev;
}

double ewuf(std::span<const Point2> query, std::span<const Point2> scanned,
            const ObjectiveParams& params)
{
  if (scanned.empty())
    throw InvalidArgument("ewuf needs a non-empty scanned set");
  if (query.empty())
    throw InvalidArgument("ewuf needs a non-empty query set");
  // A 1x1 magnitude field; only the uncertainty part is read.
  const GradientField dummy{ImageGrid(1, 1), ImageGrid(1, 1), ImageGrid(1, 1)};
  const AnchorObjective obj(dummy, scanned, params);
  return obj.evaluate(query, false).uncertainty;
}

double loss(const GradientField& grad, std::span<const Point2> candidates,
            std::span<const Point2> scanned, const ObjectiveParams& params)
{
  return AnchorObjective(grad, scanned, params).evaluate(candidates, false).loss;
}

std::vector<Point2> loss_gradient(const GradientField& grad,
                                  std::span<const Point2> candidates,
                                  std::span<const Point2> scanned,
                                  const ObjectiveParams& params)
{
  return AnchorObjective(grad, scanned, params).evaluate(candidates, true).gradient;
}

AdamResult adam_optimize(const GradientField& grad, const AnchorSet& initial,
                         std::span<const Point2> scanned,
                         const ObjectiveParams& params)
{
  params.validate();
  AdamResult result;
  result.anchors = initial;
  if (initial.empty())
    throw InvalidArgument("adam_optimize needs at least one candidate");

  const AnchorObjective objective(grad, scanned, params);
  const int width = grad.magnitude.width();
  const int height = grad.magnitude.height();

  std::vector<Point2> x = initial.points;
  std::vector<Point2> m(x.size()), v(x.size());
  double b1t = 1.0, b2t = 1.0;

  auto check = [](double value, int step) {
    if (!std::isfinite(value))
      throw NumericalError("non-finite loss at ADAM step " + std::to_string(step));
  };

  for (int step = 0;; ++step) {
    const bool more = step < params.s_steps;
    auto ev = objective.evaluate(x, more);
    check(ev.loss, step);
    result.trace.push_back({step, ev.loss});
    if (step == 0) {
      result.initial_loss = ev.loss;
      result.best_loss = ev.loss;
    } else if (ev.loss < result.best_loss) {
      result.best_loss = ev.loss;
      result.best_step = step;
      result.anchors.points = x;
    }
    if (!more)
      break;

    b1t *= params.adam_b1;
    b2t *= params.adam_b2;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const Point2 g = ev.gradient[i];
      m[i].x = params.adam_b1 * m[i].x + (1.0 - params.adam_b1) * g.x;
      m[i].y = params.adam_b1 * m[i].y + (1.0 - params.adam_b1) * g.y;
      v[i].x = params.adam_b2 * v[i].x + (1.0 - params.adam_b2) * g.x * g.x;
      v[i].y = params.adam_b2 * v[i].y + (1.0 - params.adam_b2) * g.y * g.y;
      const double mx = m[i].x / (1.0 - b1t), my = m[i].y / (1.0 - b1t);
      const double vx = v[i].x / (1.0 - b2t), vy = v[i].y / (1.0 - b2t);
      x[i].x -= params.beta * mx / (std::sqrt(vx) + params.adam_eps);
      x[i].y -= params.beta * my / (std::sqrt(vy) + params.adam_eps);
      x[i] = clamp_to_bounds(width, height, x[i]);
    }
  }
  return result;
}

void write_anchors_csv(const AnchorSet& anchors, const std::filesystem::path& path)
{
  std::FILE* f = std::fopen(path.string().c_str(), "w");
  if (!f)
    throw IoError(path.string() + ": cannot open for writing");
  std::fputs("iter,x,y\n", f);
  for (std::size_t i = 0; i < anchors.size(); ++i)
    std::fprintf(f, "%d,%.9g,%.9g\n", anchors.generation[i], anchors.points[i].x,
                 anchors.points[i].y);
  if (std::fclose(f) != 0)
    throw IoError(path.string() + ": write failed");
}

void write_trace_csv(std::span<const AdamTraceEntry> trace,
                     const std::filesystem::path& path)
{
  std::FILE* f = std::fopen(path.string().c_str(), "w");
  if (!f)
    throw IoError(path.string() + ": cannot open for writing");
  std::fputs("step,loss\n", f);
  for (const AdamTraceEntry& e : trace)
    std::fprintf(f, "%d,%.17g\n", e.step, e.loss);
  if (std::fclose(f) != 0)
    throw IoError(path.string() + ": write failed");
}

} // namespace flyscan
