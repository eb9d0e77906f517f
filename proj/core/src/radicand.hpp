#pragma once

// Clamping of square-root arguments shared by the chart and ODE code.

#include <cmath>
#include <limits>
#include <string>

#include "bcvhelix/errors.hpp"

namespace bcv::detail {

inline double clamp_radicand(double r, double eps, const char* what, double u) {
  if (r >= 0.0) return r;
  if (r > -eps) return 0.0;
  throw Error(ErrorCode::NegativeRadicand,
              std::string(what) + " radicand " + std::to_string(r) + " at u = " + std::to_string(u));
}

// Radicand written as lhs - rhs. A difference at the rounding level of its
// terms is zero; a helicoid, for instance, has lhs == rhs identically.
inline double clamp_difference(double lhs, double rhs, double eps, const char* what, double u,
                               double carried = 0.0) {
  const double r = lhs - rhs;
  const double noise = 16.0 * std::numeric_limits<double>::epsilon() * (std::abs(lhs) + std::abs(rhs)) + carried;
  if (std::abs(r) <= noise) return 0.0;
  return clamp_radicand(r, eps, what, u);
}

}  // namespace bcv::detail
