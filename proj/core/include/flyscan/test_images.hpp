#ifndef FLYSCAN_TEST_IMAGES_HPP
#define FLYSCAN_TEST_IMAGES_HPP

#include "flyscan/grid.hpp"

namespace flyscan {

/// Four anti-aliased geometric shapes (disk, square, triangle, ring) of
/// different intensities on a dark background.
ImageGrid synthetic_shapes(int size);

/// Modified Shepp-Logan head phantom, clamped to [0, 1].
ImageGrid shepp_logan_phantom(int size);

} // namespace flyscan

#endif
