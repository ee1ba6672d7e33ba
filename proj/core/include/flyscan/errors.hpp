#ifndef FLYSCAN_ERRORS_HPP
#define FLYSCAN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace flyscan {

/// Base class for every error raised by the library.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// A precondition on arguments was violated (sizes, counts, ranges).
class InvalidArgument : public Error
{
public:
  using Error::Error;
};

class DimensionError : public InvalidArgument
{
public:
  using InvalidArgument::InvalidArgument;
};

/// No complete readout period fits on the requested scan path.
class PathTooShort : public Error
{
public:
  using Error::Error;
};

/// File could not be read, parsed or written. The message carries the path.
class IoError : public Error
{
public:
  using Error::Error;
};

/// A configuration key is unknown or holds an invalid value.
class ConfigError : public Error
{
public:
  ConfigError(std::string key, const std::string& what)
    : Error("config key '" + key + "': " + what), mKey(std::move(key))
  {
  }

  const std::string& key() const noexcept { return mKey; }

private:
  std::string mKey;
};

/// The objective produced a non-finite value.
class NumericalError : public Error
{
public:
  using Error::Error;
};

} // namespace flyscan

#endif
