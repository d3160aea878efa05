#pragma once

#include <cstdlib>
#include <string>

#include "mpfr.hpp"

namespace sturmian {

/// Adaptive precision schedule: start at `start` bits and double on
/// Indeterminate outcomes up to `ceiling` before surfacing the error.
struct PrecisionPolicy {
  Bits start = 256;
  Bits ceiling = 1L << 20;

  /// Ceiling taken from STURMIAN_PREC_CEILING when set.
  static PrecisionPolicy from_env() {
    PrecisionPolicy p;
    if (const char* env = std::getenv("STURMIAN_PREC_CEILING")) {
      try {
        long v = std::stol(env);
        if (v >= 64) p.ceiling = v;
      } catch (...) {
      }
    }
    return p;
  }
};

inline const PrecisionPolicy& default_policy() {
  static const PrecisionPolicy p = PrecisionPolicy::from_env();
  return p;
}

/// Degree bound for exact annihilator arithmetic.
inline constexpr int DEGREE_CAP = 64;

}  // namespace sturmian
