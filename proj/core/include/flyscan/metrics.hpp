#ifndef FLYSCAN_METRICS_HPP
#define FLYSCAN_METRICS_HPP

#include "flyscan/grid.hpp"

namespace flyscan {

struct MetricReport
{
  double mse = 0.0;
  double psnr_db = 0.0; ///< +infinity when mse == 0
  double ssim = 0.0;
};

/// Peak value of normalized grids.
inline constexpr double kPeakValue = 1.0;

/// All three throw DimensionError when the shapes differ.
double mse(const ImageGrid& a, const ImageGrid& b);
double psnr(const ImageGrid& a, const ImageGrid& b);

/// Structural similarity from global image statistics (one window covering
/// the whole image), C1 = (0.01 MAX)^2 and C2 = (0.03 MAX)^2.
double ssim(const ImageGrid& a, const ImageGrid& b);

/// 10 log10(MAX^2 / mse); +infinity for mse == 0.
double psnr_from_mse(double mse);

MetricReport report(const ImageGrid& recon, const ImageGrid& reference);

} // namespace flyscan

#endif
