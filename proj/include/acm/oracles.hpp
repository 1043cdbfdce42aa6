#pragma once

// Independent reference computations used to cross-check the kernels.

#include <Eigen/LU>

#include "acm/matkernel.hpp"

namespace acm::oracle {

/// Unitary polar factor by the scaled Newton iteration X ← (γX + (γX)^{-*})/2.
inline ComplexMatrix newton_polar(const ComplexMatrix& A, int max_iter = 100, double tol = 1e-14) {
  require_square(A, "newton_polar");
  ComplexMatrix X = A;
  for (int k = 0; k < max_iter; ++k) {
    const ComplexMatrix Xinv = X.fullPivLu().inverse();
    const double gamma = std::sqrt(Xinv.norm() / X.norm());
    const ComplexMatrix next = 0.5 * (gamma * X + Xinv.adjoint() / gamma);
    const double change = (next - X).norm() / std::max(1.0, next.norm());
    X = next;
    if (change < tol) break;
  }
  return X;
}

}  // namespace acm::oracle
