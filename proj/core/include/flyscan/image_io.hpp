#ifndef FLYSCAN_IMAGE_IO_HPP
#define FLYSCAN_IMAGE_IO_HPP

#include <filesystem>
#include <string>

#include "flyscan/grid.hpp"

namespace flyscan {

/// Reads plain (P2) or binary (P5) PGM. Values are divided by the header's
/// maxval, so an 8-bit file maps k -> k/255.
ImageGrid read_pgm(const std::filesystem::path& path);

/// Writes an 8-bit PGM, quantizing round(255 * clamp(v, 0, 1)).
void write_pgm(const ImageGrid& img, const std::filesystem::path& path,
               bool binary = true);

/// Headerless comma-separated floats, one image row per line. Values already
/// inside [0, 1] are kept verbatim; anything else is min-max normalized.
ImageGrid read_csv_image(const std::filesystem::path& path);
void write_csv_image(const ImageGrid& img, const std::filesystem::path& path);

/// Dispatches on the extension (.pgm/.pnm or .csv). Names of the form
/// `builtin:shapes`, `builtin:phantom` generate a 256x256 test image.
ImageGrid load_image(const std::string& source);

} // namespace flyscan

#endif
