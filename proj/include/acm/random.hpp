#pragma once

// Seeded random matrix generators. Every caller passes its own engine so
// results are reproducible and nothing is shared between threads.

#include <cstdint>
#include <random>

#include <Eigen/QR>

#include "acm/types.hpp"

namespace acm {

using Rng = std::mt19937_64;

inline RealMatrix gaussian_real(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  RealMatrix M(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) M(i, j) = nd(rng);
  return M;
}

inline ComplexMatrix gaussian_complex(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  ComplexMatrix M(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) M(i, j) = cplx(nd(rng), nd(rng)) / std::sqrt(2.0);
  return M;
}

inline ComplexMatrix random_hermitian(Eigen::Index n, Rng& rng) {
  const ComplexMatrix G = gaussian_complex(n, n, rng);
  return 0.5 * (G + G.adjoint());
}

inline ComplexMatrix random_real_symmetric(Eigen::Index n, Rng& rng) {
  const RealMatrix G = gaussian_real(n, n, rng);
  return (0.5 * (G + G.transpose())).cast<cplx>();
}

/// Haar-distributed unitary (QR with phase correction).
inline ComplexMatrix random_unitary(Eigen::Index n, Rng& rng) {
  const ComplexMatrix G = gaussian_complex(n, n, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(G);
  ComplexMatrix Q = qr.householderQ() * ComplexMatrix::Identity(n, n);
  const ComplexMatrix R = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < n; ++j) {
    const cplx d = R(j, j);
    if (std::abs(d) > 0) Q.col(j) *= d / std::abs(d);
  }
  return Q;
}

/// Haar-distributed real orthogonal matrix.
inline RealMatrix random_orthogonal(Eigen::Index n, Rng& rng) {
  const RealMatrix G = gaussian_real(n, n, rng);
  Eigen::HouseholderQR<RealMatrix> qr(G);
  RealMatrix Q = qr.householderQ() * RealMatrix::Identity(n, n);
  const RealMatrix R = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < n; ++j)
    if (R(j, j) < 0) Q.col(j) *= -1.0;
  return Q;
}

inline RealMatrix random_real_skew(Eigen::Index n, Rng& rng) {
  const RealMatrix G = gaussian_real(n, n, rng);
  return 0.5 * (G - G.transpose());
}

}  // namespace acm
