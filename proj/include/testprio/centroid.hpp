#pragma once

#include <stdexcept>

#include "testprio/membership.hpp"

namespace testprio {

inline constexpr int kDefaultResolution = 1000;

// Centroid defuzzification: integral of x*f(x) over integral of f(x),
// approximated by the midpoint rule on `resolution` equal sub-intervals.
// The sub-interval width cancels in the ratio.
template <typename F>
double centroid(F&& f, Interval universe, int resolution = kDefaultResolution) {
  if (resolution < 2) throw std::invalid_argument("invalid resolution");
  const double h = universe.width() / resolution;
  double area = 0.0;
  double moment = 0.0;
  for (int i = 0; i < resolution; ++i) {
    const double x = universe.lo + (i + 0.5) * h;
    const double y = f(x);
    area += y;
    moment += x * y;
  }
  if (area <= 0.0) throw std::runtime_error("empty aggregate, no rule fired");
  return moment / area;
}

}  // namespace testprio
