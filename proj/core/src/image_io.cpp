#include "flyscan/image_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "flyscan/errors.hpp"
#include "flyscan/test_images.hpp"

namespace flyscan {

namespace {

// Next whitespace-delimited header token, skipping '#' comments.
std::string next_token(std::istream& in, const std::filesystem::path& path)
{
  std::string tok;
  int ch;
  while ((ch = in.get()) != EOF) {
    if (ch == '#') {
      while ((ch = in.get()) != EOF && ch != '\n')
        ;
      continue;
    }
    if (std::isspace(ch)) {
      if (!tok.empty())
        return tok;
      continue;
    }
    tok.push_back(static_cast<char>(ch));
  }
  if (tok.empty())
    throw IoError(path.string() + ": truncated PGM header");
  return tok;
}

int parse_header_int(const std::string& tok, const std::filesystem::path& path)
{
  try {
    std::size_t used = 0;
    const int v = std::stoi(tok, &used);
    if (used != tok.size() || v <= 0)
      throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw IoError(path.string() + ": bad PGM header field '" + tok + "'");
  }
}

std::string lower_extension(const std::filesystem::path& p)
{
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return ext;
}

} // namespace

ImageGrid read_pgm(const std::filesystem::path& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw IoError(path.string() + ": cannot open for reading");

  const std::string magic = next_token(in, path);
  if (magic != "P2" && magic != "P5")
    throw IoError(path.string() + ": not a P2/P5 PGM file");
  const int width = parse_header_int(next_token(in, path), path);
  const int height = parse_header_int(next_token(in, path), path);
  const int maxval = parse_header_int(next_token(in, path), path);
  if (maxval > 65535)
    throw IoError(path.string() + ": maxval out of range");

  const std::size_t n = static_cast<std::size_t>(width) * height;
  std::vector<double> values(n);
  if (magic == "P5") {
    const std::size_t bytesPerSample = maxval < 256 ? 1 : 2;
    std::vector<unsigned char> buf(n * bytesPerSample);
    in.read(reinterpret_cast<char*>(buf.data()),
            static_cast<std::streamsize>(buf.size()));
    if (static_cast<std::size_t>(in.gcount()) != buf.size())
      throw IoError(path.string() + ": truncated PGM raster");
    for (std::size_t i = 0; i < n; ++i) {
      const unsigned v = bytesPerSample == 1
                           ? buf[i]
                           : (unsigned(buf[2 * i]) << 8) | buf[2 * i + 1];
      values[i] = static_cast<double>(std::min<unsigned>(v, maxval)) / maxval;
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      long v;
      if (!(in >> v) || v < 0)
        throw IoError(path.string() + ": bad or truncated P2 raster");
      values[i] = static_cast<double>(std::min<long>(v, maxval)) / maxval;
    }
  }
  return ImageGrid(width, height, std::move(values));
}

void write_pgm(const ImageGrid& img, const std::filesystem::path& path,
               bool binary)
{
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw IoError(path.string() + ": cannot open for writing");

  out << (binary ? "P5" : "P2") << '\n'
      << img.width() << ' ' << img.height() << '\n'
      << 255 << '\n';
  auto quantize = [](double v) {
    if (!std::isfinite(v))
      v = 0.0;
    return static_cast<unsigned char>(
      std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
  };
  if (binary) {
    std::vector<unsigned char> buf(img.size());
    std::transform(img.values().begin(), img.values().end(), buf.begin(),
                   quantize);
    out.write(reinterpret_cast<const char*>(buf.data()),
              static_cast<std::streamsize>(buf.size()));
  } else {
    for (int r = 0; r < img.height(); ++r) {
      for (int c = 0; c < img.width(); ++c)
        out << (c ? " " : "") << static_cast<int>(quantize(img(r, c)));
      out << '\n';
    }
  }
  if (!out)
    throw IoError(path.string() + ": write failed");
}

ImageGrid read_csv_image(const std::filesystem::path& path)
{
  std::ifstream in(path);
  if (!in)
    throw IoError(path.string() + ": cannot open for reading");

  std::vector<double> values;
  int width = -1;
  int height = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos)
      continue;
    std::stringstream ss(line);
    std::string cell;
    int cols = 0;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        values.push_back(std::stod(cell, &used));
      } catch (const std::exception&) {
        throw IoError(path.string() + ":" + std::to_string(height + 1) +
                      ": not a number '" + cell + "'");
      }
      ++cols;
    }
    if (width < 0)
      width = cols;
    else if (cols != width)
      throw IoError(path.string() + ":" + std::to_string(height + 1) +
                    ": ragged row");
    ++height;
  }
  if (height == 0 || width <= 0)
    throw IoError(path.string() + ": empty CSV image");

  const bool inUnitRange = std::all_of(values.begin(), values.end(), [](double v) {
    return std::isfinite(v) && v >= 0.0 && v <= 1.0;
  });
  if (inUnitRange)
    return ImageGrid(width, height, std::move(values));
  try {
    return normalize(width, height, values);
  } catch (const Error& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

void write_csv_image(const ImageGrid& img, const std::filesystem::path& path)
{
  std::FILE* f = std::fopen(path.string().c_str(), "w");
  if (!f)
    throw IoError(path.string() + ": cannot open for writing");
  for (int r = 0; r < img.height(); ++r) {
    for (int c = 0; c < img.width(); ++c)
      std::fprintf(f, c ? ",%.17g" : "%.17g", img(r, c));
    std::fputc('\n', f);
  }
  if (std::fclose(f) != 0)
    throw IoError(path.string() + ": write failed");
}

ImageGrid load_image(const std::string& source)
{
  constexpr std::string_view builtin = "builtin:";
  if (source.starts_with(builtin)) {
    const std::string name = source.substr(builtin.size());
    if (name == "shapes")
      return synthetic_shapes(256);
    if (name == "phantom")
      return shepp_logan_phantom(256);
    throw IoError(source + ": unknown builtin image (expected shapes or phantom)");
  }

  const std::filesystem::path path(source);
  if (!std::filesystem::exists(path))
    throw IoError(path.string() + ": no such file");
  const std::string ext = lower_extension(path);
  if (ext == ".csv" || ext == ".txt")
    return read_csv_image(path);
  return read_pgm(path);
}

} // namespace flyscan
