#ifndef QDECAY_GRID_HPP
#define QDECAY_GRID_HPP

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "qdecay/errors.hpp"

namespace qdecay {

enum class Spacing { Linear, Log };

/// Sampling grid [min, max] with `count` points; count == 1 needs min == max.
struct Grid {
  double min = 0.0;
  double max = 0.0;
  std::size_t count = 1;
  Spacing spacing = Spacing::Linear;
};

inline const char* to_string(Spacing spacing) {
  return spacing == Spacing::Log ? "log" : "linear";
}

inline void check_grid(const Grid& grid) {
  if (!std::isfinite(grid.min) || !std::isfinite(grid.max) || grid.min < 0.0)
    throw qdecay::domain_error("grid: bounds must be finite with min >= 0");
  if (grid.count == 0) throw qdecay::domain_error("grid: count must be >= 1");
  if (grid.count == 1 && grid.min != grid.max)
    throw qdecay::domain_error("grid: a single-point grid needs min == max");
  if (grid.count >= 2 && !(grid.max > grid.min))
    throw qdecay::domain_error("grid: max must exceed min");
  if (grid.spacing == Spacing::Log && !(grid.min > 0.0))
    throw qdecay::domain_error("grid: log spacing needs min > 0");
}

/// Strictly increasing grid points; the end points are reproduced exactly.
inline std::vector<double> grid_points(const Grid& grid) {
  check_grid(grid);
  std::vector<double> points(grid.count);
  if (grid.count == 1) {
    points[0] = grid.min;
    return points;
  }
  const double last = static_cast<double>(grid.count - 1);
  if (grid.spacing == Spacing::Linear) {
    const double step = (grid.max - grid.min) / last;
    for (std::size_t i = 0; i < grid.count; ++i) points[i] = grid.min + step * i;
  } else {
    const double lo = std::log(grid.min);
    const double step = (std::log(grid.max) - lo) / last;
    for (std::size_t i = 0; i < grid.count; ++i) points[i] = std::exp(lo + step * i);
    points.front() = grid.min;
  }
  points.back() = grid.max;
  for (std::size_t i = 1; i < points.size(); ++i)
    if (!(points[i] > points[i - 1]))
      throw qdecay::domain_error("grid: points not strictly increasing at index " +
                                 std::to_string(i));
  return points;
}

}  // namespace qdecay

#endif  // QDECAY_GRID_HPP
