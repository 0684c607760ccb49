#pragma once

#include <cstdlib>
#include <string>

#include "sh/errors.hpp"

namespace sh {

/// Floating tolerance family shared by all numeric checks.
struct Tolerances {
  double rel = 1e-9;        // relative agreement of floating quantities
  double orth = 1e-9;       // orthonormality / orthogonality defects
  double boundary = 1e-9;   // slack on closed body boundaries
  double rank = 1e-10;      // numerical rank cut-off (relative to largest singular value)

  /// Defaults, with every member rescaled when SH_PRECISION is set.
  static Tolerances from_env() {
    Tolerances t;
    if (const char* env = std::getenv("SH_PRECISION")) {
      char* end = nullptr;
      const double v = std::strtod(env, &end);
      if (end == env || !(v > 0.0)) throw SpecError(std::string("SH_PRECISION must be a positive number, got '") + env + "'");
      const double scale = v / 1e-9;
      t.rel *= scale;
      t.orth *= scale;
      t.boundary *= scale;
      t.rank *= scale;
    }
    return t;
  }
};

}  // namespace sh
