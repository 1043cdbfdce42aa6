#pragma once

// Wannier spread of orthonormal sets against position observables, the
// continuity and compression bounds, compression of exact positions by a
// projection, and localized bases for (nearly) commuting sets.

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "acm/invariants.hpp"
#include "acm/matkernel.hpp"
#include "acm/random.hpp"
#include "acm/relations.hpp"
#include "acm/symmetry.hpp"

namespace acm {

using PositionList = std::vector<ComplexMatrix>;

struct SpreadReport {
  RealVector per_vector;  // σ²_X(b_j)
  double total = 0.0;
  double maximum = 0.0;
  std::size_t d = 0;
};

namespace detail {

inline void require_positions(const PositionList& X, std::string_view who) {
  if (X.empty()) throw Error(Errc::InvalidArgument, std::string(who) + ": empty position set");
  for (const auto& Xr : X) {
    require_same_size(X.front(), Xr, who);
    if (hermitian_residual(Xr) > 1e-8 * std::max(1.0, operator_norm(Xr)))
      throw Error(Errc::NonHermitian, std::string(who) + ": position matrix is not Hermitian");
  }
}

inline void require_orthonormal(const ComplexMatrix& B, double tol, std::string_view who) {
  const double res = (B.adjoint() * B - identity(B.cols())).cwiseAbs().maxCoeff();
  if (res > tol)
    throw Error(Errc::NotOrthonormal, std::string(who) + ": columns are not orthonormal (residual " +
                                          std::to_string(res) + ")");
}

inline void require_contractions(const PositionList& X, std::string_view who) {
  for (const auto& Xr : X)
    if (operator_norm(Xr) > 1.0 + 1e-12)
      throw Error(Errc::NormTooLarge, std::string(who) + ": position matrix has norm above 1");
}

}  // namespace detail

/// ‖X‖ = max_r ‖X_r‖.
inline double set_norm(const PositionList& X) {
  double out = 0.0;
  for (const auto& Xr : X) out = std::max(out, operator_norm(Xr));
  return out;
}

/// dist(X, Y) = max_r ‖X_r − Y_r‖.
inline double set_distance(const PositionList& X, const PositionList& Y) {
  if (X.size() != Y.size()) throw Error(Errc::ShapeMismatch, "set_distance: sets differ in size");
  double out = 0.0;
  for (std::size_t r = 0; r < X.size(); ++r) {
    require_same_size(X[r], Y[r], "set_distance");
    out = std::max(out, operator_norm(X[r] - Y[r]));
  }
  return out;
}

/// σ²_X(b) = Σ_r ‖X_r b − ⟨X_r b, b⟩ b‖² for each column b of `basis`.
inline SpreadReport spread(const PositionList& X, const ComplexMatrix& basis) {
  detail::require_positions(X, "spread");
  if (basis.rows() != X.front().rows())
    throw Error(Errc::ShapeMismatch, "spread: basis rows do not match position size");
  detail::require_orthonormal(basis, 1e-8, "spread");
  SpreadReport out;
  out.d = X.size();
  out.per_vector = RealVector::Zero(basis.cols());
  for (const auto& Xr : X) {
    const ComplexMatrix XB = Xr * basis;
    for (Eigen::Index j = 0; j < basis.cols(); ++j) {
      const cplx mean = basis.col(j).dot(XB.col(j));
      out.per_vector(j) += (XB.col(j) - mean * basis.col(j)).squaredNorm();
    }
  }
  out.total = out.per_vector.sum();
  out.maximum = basis.cols() > 0 ? out.per_vector.maxCoeff() : 0.0;
  return out;
}

struct BoundCheck {
  double lhs = 0.0;
  double rhs = 0.0;
};

/// lhs = μ_X(B), rhs = μ_Y(B) + 4d·dist(X, Y), for contractions X, Y.
inline BoundCheck spread_continuity_check(const PositionList& X, const PositionList& Y,
                                          const ComplexMatrix& basis) {
  if (X.size() != Y.size())
    throw Error(Errc::ShapeMismatch, "spread_continuity_check: sets differ in size");
  detail::require_contractions(X, "spread_continuity_check");
  detail::require_contractions(Y, "spread_continuity_check");
  const double d = static_cast<double>(X.size());
  return {spread(X, basis).maximum,
          spread(Y, basis).maximum + 4.0 * d * set_distance(X, Y)};
}

/// lhs = μ_X(WB), rhs = μ_{W*XW}(B) + 8dδ with δ = max_r ‖[X_r, WW*]‖.
inline BoundCheck compression_effect_check(const PositionList& X, const ComplexMatrix& W,
                                           const ComplexMatrix& basis) {
  detail::require_positions(X, "compression_effect_check");
  detail::require_contractions(X, "compression_effect_check");
  detail::require_orthonormal(W, 1e-8, "compression_effect_check");
  const ComplexMatrix P = W * W.adjoint();
  PositionList compressed;
  double delta = 0.0;
  for (const auto& Xr : X) {
    delta = std::max(delta, operator_norm(commutator(Xr, P)));
    compressed.push_back(hermitian_part(W.adjoint() * Xr * W));
  }
  const double d = static_cast<double>(X.size());
  return {spread(X, W * basis).maximum, spread(compressed, basis).maximum + 8.0 * d * delta};
}

struct Compression {
  ComplexMatrix W;        // isometry with WW* = P
  PositionList X;         // W* X̂_r W
  double delta = 0.0;     // max_r ‖[P, X̂_r]‖
  double residual = std::numeric_limits<double>::quiet_NaN();  // T′ residual, d = 4 only
  double spread_budget = 0.0;  // 8dδ
  double max_norm = 0.0;       // max_r ‖X_r‖
};

/// Compresses an exact commuting set of contractions to the range of P.
/// For d = 4 the input must be an exact torus representation and the output
/// residual is at most 2δ.
inline Compression compress_positions(const ComplexMatrix& P, const PositionList& Xhat,
                                      SymmetryClass cls = SymmetryClass::Complex,
                                      std::uint64_t seed = 1) {
  detail::require_positions(Xhat, "compress_positions");
  require_same_size(P, Xhat.front(), "compress_positions");
  const double proj_res = std::max((P * P - P).cwiseAbs().maxCoeff(),
                                   (P - P.adjoint()).cwiseAbs().maxCoeff());
  if (proj_res > 1e-8)
    throw Error(Errc::NotProjection, "compress_positions: P is not an orthogonal projection");
  const double exact = Xhat.size() == 4
                           ? torus4_residual(Xhat[0], Xhat[1], Xhat[2], Xhat[3]).delta
                           : [&] {
                               double c = std::max(0.0, set_norm(Xhat) - 1.0);
                               for (std::size_t r = 0; r < Xhat.size(); ++r)
                                 for (std::size_t s = r + 1; s < Xhat.size(); ++s)
                                   c = std::max(c, operator_norm(commutator(Xhat[r], Xhat[s])));
                               return c;
                             }();
  if (exact > 1e-8)
    throw Error(Errc::NotExactRepresentation,
                "compress_positions: positions are not an exact commuting representation");
  Compression out;
  const auto rank = static_cast<Eigen::Index>(std::llround(P.trace().real()));
  out.W = structured_isometry(P, rank, cls, seed);
  for (const auto& Xr : Xhat) {
    out.delta = std::max(out.delta, operator_norm(commutator(P, Xr)));
    out.X.push_back(hermitian_part(out.W.adjoint() * Xr * out.W));
  }
  out.spread_budget = 8.0 * static_cast<double>(Xhat.size()) * out.delta;
  out.max_norm = rank > 0 ? set_norm(out.X) : 0.0;
  if (Xhat.size() == 4 && rank > 0)
    out.residual = torus4_residual(out.X[0], out.X[1], out.X[2], out.X[3]).delta;
  return out;
}

struct EigenbasisResult {
  ComplexMatrix basis;
  double max_spread = 0.0;
  double constant = 0.0;  // max_spread / tol
};

/// Orthonormal basis of approximate common eigenvectors: diagonalize a random
/// real combination of the Y_r, then refine every near-degenerate cluster with
/// fresh combinations.
inline EigenbasisResult eigenbasis_commuting(const PositionList& Y, double tol,
                                             std::uint64_t seed = 1) {
  detail::require_positions(Y, "eigenbasis_commuting");
  double worst = 0.0;
  for (std::size_t r = 0; r < Y.size(); ++r)
    for (std::size_t s = r + 1; s < Y.size(); ++s)
      worst = std::max(worst, operator_norm(commutator(Y[r], Y[s])));
  if (worst > tol)
    throw Error(Errc::NotCommuting, "eigenbasis_commuting: commutator " + std::to_string(worst) +
                                        " exceeds tolerance " + std::to_string(tol));
  Rng rng(seed);
  std::normal_distribution<double> normal;
  const double scale = std::max(1.0, set_norm(Y));
  const double cluster_tol = std::max(1e-9 * scale, 10.0 * tol);
  auto combination = [&](const ComplexMatrix& V) {
    ComplexMatrix M = ComplexMatrix::Zero(V.cols(), V.cols());
    for (const auto& Yr : Y) M += normal(rng) * (V.adjoint() * Yr * V);
    return hermitian_part(M);
  };

  const Eigen::Index n = Y.front().rows();
  EigDecomposition e = herm_eig(combination(identity(n)), 1e-6);
  ComplexMatrix V = e.vectors;
  for (std::size_t round = 1; round < Y.size() + 1; ++round) {
    bool split = false;
    Eigen::Index start = 0;
    while (start < n) {
      Eigen::Index stop = start + 1;
      while (stop < n && e.eigenvalues(stop) - e.eigenvalues(stop - 1) < cluster_tol) ++stop;
      const Eigen::Index m = stop - start;
      if (m > 1) {
        const ComplexMatrix Vc = V.middleCols(start, m);
        const EigDecomposition sub = herm_eig(combination(Vc), 1e-6);
        V.middleCols(start, m) = Vc * sub.vectors;
        split = true;
      }
      start = stop;
    }
    if (!split) break;
    // Re-sort by a fresh combination so clusters are recomputed in the new basis.
    const ComplexMatrix M = combination(V);
    RealVector diag = M.diagonal().real();
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
    std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return diag(a) < diag(b); });
    ComplexMatrix Vs(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      Vs.col(i) = V.col(order[static_cast<std::size_t>(i)]);
      e.eigenvalues(i) = diag(order[static_cast<std::size_t>(i)]);
    }
    V = Vs;
  }
  EigenbasisResult out;
  out.basis = V;
  out.max_spread = spread(Y, V).maximum;
  out.constant = tol > 0 ? out.max_spread / tol : 0.0;
  return out;
}

/// Σ_r Σ_{i≠j} |(X_r)_{ij}|².
inline double off_diagonal_mass(const PositionList& X) {
  double out = 0.0;
  for (const auto& Xr : X) out += Xr.squaredNorm() - Xr.diagonal().squaredNorm();
  return out;
}

struct JointDiagResult {
  ComplexMatrix V;            // unitary
  double initial_off = 0.0;   // off-mass of the X_r
  double final_off = 0.0;     // off-mass of the V* X_r V
  int sweeps = 0;
  std::vector<double> history;  // off-mass after each sweep
};

/// Jacobi joint approximate diagonalization of Hermitian matrices with
/// closed-form 2×2 complex rotations, row-major pair order.
inline JointDiagResult joint_approx_diag(const PositionList& X, int max_sweeps = 100,
                                         double tol = 1e-12) {
  detail::require_positions(X, "joint_approx_diag");
  const Eigen::Index n = X.front().rows();
  PositionList A;
  for (const auto& Xr : X) A.push_back(hermitian_part(Xr));
  JointDiagResult out;
  out.V = identity(n);
  out.initial_off = off_diagonal_mass(A);
  double previous = out.initial_off;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) {
        Eigen::Matrix3d G = Eigen::Matrix3d::Zero();
        for (const auto& Ar : A) {
          const Eigen::Vector3d h((Ar(p, p) - Ar(q, q)).real(), 2.0 * Ar(p, q).real(),
                                  2.0 * Ar(p, q).imag());
          G += h * h.transpose();
        }
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(G);
        Eigen::Vector3d v = es.eigenvectors().col(2);
        if (v(0) < 0) v = -v;
        const double c = std::sqrt((v(0) + 1.0) / 2.0);
        if (c >= 1.0 - 1e-15) continue;
        const cplx s = cplx(v(1), -v(2)) / std::sqrt(2.0 * (v(0) + 1.0));
        // Columns p, q mixed by R = [[c, −s̄], [s, c]]; A_r ← R* A_r R.
        for (auto& Ar : A) {
          const ComplexVector cp = Ar.col(p), cq = Ar.col(q);
          Ar.col(p) = c * cp + s * cq;
          Ar.col(q) = -std::conj(s) * cp + c * cq;
          const Eigen::RowVectorXcd rp = Ar.row(p), rq = Ar.row(q);
          Ar.row(p) = c * rp + std::conj(s) * rq;
          Ar.row(q) = -s * rp + c * rq;
        }
        const ComplexVector vp = out.V.col(p), vq = out.V.col(q);
        out.V.col(p) = c * vp + s * vq;
        out.V.col(q) = -std::conj(s) * vp + c * vq;
      }
    const double current = off_diagonal_mass(A);
    out.history.push_back(current);
    out.sweeps = sweep + 1;
    const bool done = previous - current <= tol * std::max(1.0, out.initial_off);
    previous = current;
    if (done) break;
  }
  out.final_off = previous;
  return out;
}

}  // namespace acm
