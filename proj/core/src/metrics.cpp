#include "flyscan/metrics.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "flyscan/errors.hpp"

namespace flyscan {

namespace {

void require_same_shape(const ImageGrid& a, const ImageGrid& b)
{
  if (!a.same_shape(b))
    throw DimensionError("image shapes differ: " + std::to_string(a.width()) +
                         "x" + std::to_string(a.height()) + " vs " +
                         std::to_string(b.width()) + "x" +
                         std::to_string(b.height()));
  if (a.empty())
    throw DimensionError("metrics on empty images");
}

} // namespace

double mse(const ImageGrid& a, const ImageGrid& b)
{
  require_same_shape(a, b);
  double acc = 0.0;
  const auto va = a.values();
  const auto vb = b.values();
  for (std::size_t i = 0; i < va.size(); ++i) {
    const double d = va[i] - vb[i];
    acc += d * d;
  }
  return acc / static_cast<double>(va.size());
}

double psnr_from_mse(double m)
{
  if (m == 0.0)
    return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(kPeakValue * kPeakValue / m);
}

double psnr(const ImageGrid& a, const ImageGrid& b)
{
  return psnr_from_mse(mse(a, b));
}

double ssim(const ImageGrid& a, const ImageGrid& b)
{
  require_same_shape(a, b);
  const auto va = a.values();
  const auto vb = b.values();
  const double n = static_cast<double>(va.size());

  double sa = 0.0, sb = 0.0;
  for (std::size_t i = 0; i < va.size(); ++i) {
    sa += va[i];
    sb += vb[i];
  }
  const double muA = sa / n;
  const double muB = sb / n;

  double varA = 0.0, varB = 0.0, cov = 0.0;
  for (std::size_t i = 0; i < va.size(); ++i) {
    const double da = va[i] - muA;
    const double db = vb[i] - muB;
    varA += da * da;
    varB += db * db;
    cov += da * db;
  }
  varA /= n;
  varB /= n;
  cov /= n;

  constexpr double c1 = (0.01 * kPeakValue) * (0.01 * kPeakValue);
  constexpr double c2 = (0.03 * kPeakValue) * (0.03 * kPeakValue);
  return ((2.0 * muA * muB + c1) * (2.0 * cov + c2)) /
         ((muA * muA + muB * muB + c1) * (varA + varB + c2));
}

MetricReport report(const ImageGrid& recon, const ImageGrid& reference)
{
  MetricReport r;
  r.mse = mse(recon, reference);
  r.psnr_db = psnr_from_mse(r.mse);
  r.ssim = ssim(recon, reference);
  return r;
}

} // namespace flyscan
