#include "flyscan/completion.hpp"

#include <cmath>
#include <vector>

#include "flyscan/errors.hpp"
#include "flyscan/spatial_index.hpp"

namespace flyscan {

void IdwParams::validate() const
{
  if (k_idw < 1)
    throw InvalidArgument("k_idw must be >= 1");
  if (!(exact_hit_tol > 0.0))
    throw InvalidArgument("exact_hit_tol must be > 0");
  if (!(power > 0.0))
    throw InvalidArgument("idw power must be > 0");
}

ImageGrid idw_complete(const ReadoutLog& log, int width, int height,
                       const IdwParams& params)
{
  params.validate();
  if (log.empty())
    throw InvalidArgument("idw_complete needs at least one readout");
  if (width < 1 || height < 1)
    throw DimensionError("idw_complete needs a non-empty output grid");

  const std::vector<Point2> pos = log.positions();
  const PointIndex index(pos);
  const double tol2 = params.exact_hit_tol * params.exact_hit_tol;
  const bool squared = params.power == 2.0;

  ImageGrid out(width, height);
  std::vector<Neighbor> nb;
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c) {
      index.nearest({static_cast<double>(c), static_cast<double>(r)},
                    static_cast<std::size_t>(params.k_idw), nb);
      if (nb.front().dist2 < tol2) {
        out(r, c) = log.entries[nb.front().index].value;
        continue;
      }
      double num = 0.0;
      double den = 0.0;
      for (const Neighbor& n : nb) {
        const double w = squared ? 1.0 / n.dist2
                                 : std::pow(n.dist2, -0.5 * params.power);
        num += w * log.entries[n.index].value;
        den += w;
      }
      out(r, c) = num / den;
    }
  }
  return out;
}

ReadoutLog merge_logs(const ReadoutLog& previous, const ReadoutLog& fresh,
                      double tol)
{
  ReadoutLog out;
  out.entries.reserve(previous.size() + fresh.size());
  if (fresh.empty()) {
    out.entries = previous.entries;
    return out;
  }
  const std::vector<Point2> freshPos = fresh.positions();
  const PointIndex index(freshPos);
  std::vector<std::size_t> hits;
  for (const Readout& r : previous.entries) {
    index.within(r.position(), tol, hits);
    if (hits.empty())
      out.entries.push_back(r);
  }
  out.entries.insert(out.entries.end(), fresh.entries.begin(), fresh.entries.end());
  return out;
}

} // namespace flyscan
