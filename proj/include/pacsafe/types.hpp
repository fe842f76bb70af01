#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pacsafe/errors.hpp"

namespace pacsafe {

// States and disturbances are plain dense vectors of doubles.  Their length
// must always equal the owning system's declared dimension; the sampling and
// plugin boundaries enforce that together with finiteness.
using StateVector = std::vector<double>;
using DisturbanceVector = std::vector<double>;

// Hard cap on rejection-sampling attempts per requested point (state draws
// from non-box safe sets, truncated-normal disturbance draws).  Exceeding it
// raises SamplingError instead of looping forever on a degenerate target.
inline constexpr int kMaxRejectionAttempts = 10000;

inline bool all_finite(std::span<const double> v) {
  for (double x : v) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

inline void require_finite(std::span<const double> v, const char* what) {
  if (!all_finite(v)) {
    throw SamplingError(std::string(what) + " contains a non-finite entry");
  }
}

inline void require_dim(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    throw std::invalid_argument(std::string(what) + ": expected dimension " +
                                std::to_string(want) + ", got " +
                                std::to_string(got));
  }
}

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace pacsafe
