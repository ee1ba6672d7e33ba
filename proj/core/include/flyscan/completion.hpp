#ifndef FLYSCAN_COMPLETION_HPP
#define FLYSCAN_COMPLETION_HPP

#include <cstddef>

#include "flyscan/grid.hpp"
#include "flyscan/scanner.hpp"

namespace flyscan {

struct IdwParams
{
  int k_idw = 8;               ///< readouts blended per pixel
  double exact_hit_tol = 1e-6; ///< px; closer readouts are copied verbatim
  double power = 2.0;          ///< distance exponent of the weight

  void validate() const;
};

/// Inverse-distance-weighted completion of a width x height image from the
/// readouts in `log`. Each pixel center blends its k nearest readouts with
/// weights 1 / distance^power; a readout within exact_hit_tol is copied.
/// Throws InvalidArgument on an empty log.
ImageGrid idw_complete(const ReadoutLog& log, int width, int height,
                       const IdwParams& params = {});

/// Previous entries followed by the new ones. A previous entry lying within
/// `tol` of any new entry is dropped so the newest value wins.
ReadoutLog merge_logs(const ReadoutLog& previous, const ReadoutLog& fresh,
                      double tol = 1e-6);

} // namespace flyscan

#endif
