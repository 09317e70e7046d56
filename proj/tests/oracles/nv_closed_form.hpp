#pragma once

// Test oracle: closed-form zero-field transitions for the diagonal anvil
// stress diag(aP, aP, P), derived by hand from the cubic-frame coupling
// functionals (no frame rotation, no diagonalization):
//   Mz = a1 (1 + 2 alpha) P,   |M_perp| = 2 |b| |1 - alpha| P,
//   nu = D + Mz -/+ |M_perp|.

#include <cmath>
#include <utility>

namespace oracle {

inline std::pair<double, double> anvil_zero_field(double d, double a1, double b, double alpha,
                                                  double p) {
  const double mz = a1 * (1.0 + 2.0 * alpha) * p;
  const double mperp = 2.0 * std::abs(b) * std::abs(1.0 - alpha) * p;
  return {d + mz - mperp, d + mz + mperp};
}

}  // namespace oracle
