#ifndef QDECAY_IO_FORMAT_HPP
#define QDECAY_IO_FORMAT_HPP

#include <charconv>
#include <cmath>
#include <string>
#include <system_error>

namespace qdecay::io {

constexpr const char* kArtifactVersion = "1.0.0";

/// Shortest decimal text that parses back to the same double; "nan"/"inf" otherwise.
inline std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buffer[32];
  const auto result = std::to_chars(buffer, buffer + sizeof buffer, value);
  if (result.ec != std::errc()) return "nan";
  return std::string(buffer, result.ptr);
}

}  // namespace qdecay::io

#endif  // QDECAY_IO_FORMAT_HPP
