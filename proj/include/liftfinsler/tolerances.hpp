#pragma once

namespace liftfinsler {

/// Numerical thresholds shared by every module.
struct Tolerances {
  double alg = 1e-10;             // antisymmetry / Jacobi / connection invariants
  double pd = 1e-10;              // smallest admissible metric eigenvalue
  double rank = 1e-8;             // singular-value cutoff for derived algebra / center
  double plane = 1e-10;           // Gram determinant and orthonormality of flags
  double classification = 1e-9;   // Berwald / Douglas residuals
  double oracle = 1e-6;           // theorem formula vs. finite-difference oracle

  bool operator==(const Tolerances&) const = default;
};

}  // namespace liftfinsler
