#pragma once

// Bott index and Pfaffian-Bott index of almost commuting tuples, the lift
// from a pair of unitaries (a torus) to a Hermitian triple (a sphere), and
// the indices of position matrices compressed by a projection.

#include <chrono>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <string>

#include "acm/matkernel.hpp"
#include "acm/random.hpp"
#include "acm/relations.hpp"
#include "acm/symmetry.hpp"

namespace acm {

struct IndexReport {
  int value = 0;                // Bott ∈ ℤ, or Pf-Bott ∈ {+1, −1}
  double gap = 0.0;             // min |eigenvalue| of the Bott matrix
  double input_residual = 0.0;  // δ of the relation the inputs were checked against
  SymmetryClass cls = SymmetryClass::Complex;
  double seconds = 0.0;
  double lifted_residual = std::numeric_limits<double>::quiet_NaN();   // S_δ of the lifted triple
  double projection_delta = std::numeric_limits<double>::quiet_NaN();  // max ‖[P, X̂_r]‖
  Eigen::Index rank = -1;       // rank of P for compressed indices
};

struct IndexOptions {
  double gap_tol = 1e-6;
  /// Sphere residual bound for triples; below 1/4 the Bott matrix is invertible.
  double max_residual = 0.25;
  /// Self-duality threshold, relative to max(1, ‖H_r‖).
  double symmetry_tol = 1e-8;
};

struct SphereTriple {
  ComplexMatrix H1, H2, H3;
};

/// B(H₁,H₂,H₃) = [[H₃, H₁ + iH₂], [H₁ − iH₂, −H₃]] = Σ H_r ⊗ σ_r with
/// σ₁ = [[0,1],[1,0]], σ₂ = [[0,i],[−i,0]], σ₃ = [[1,0],[0,−1]].
inline ComplexMatrix bott_matrix(const ComplexMatrix& H1, const ComplexMatrix& H2,
                                 const ComplexMatrix& H3) {
  require_same_size(H1, H2, "bott_matrix");
  require_same_size(H1, H3, "bott_matrix");
  const Eigen::Index n = H1.rows();
  ComplexMatrix B(2 * n, 2 * n);
  B.topLeftCorner(n, n) = H3;
  B.topRightCorner(n, n) = H1 + I_unit * H2;
  B.bottomLeftCorner(n, n) = H1 - I_unit * H2;
  B.bottomRightCorner(n, n) = -H3;
  return B;
}

namespace detail {

using Clock = std::chrono::steady_clock;

inline double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

inline void check_residual_gate(const RelationReport& rel, const IndexOptions& opts) {
  if (rel.delta >= opts.max_residual)
    throw Error(Errc::ResidualTooLarge, "sphere residual " + std::to_string(rel.delta) +
                                            " is not below " + std::to_string(opts.max_residual));
}

}  // namespace detail

/// Half the signature of the Bott matrix.
inline IndexReport bott_index(const ComplexMatrix& H1, const ComplexMatrix& H2,
                              const ComplexMatrix& H3, const IndexOptions& opts = {}) {
  const auto t0 = detail::Clock::now();
  const RelationReport rel = sphere_residual(H1, H2, H3);
  detail::check_residual_gate(rel, opts);
  const ComplexMatrix B = bott_matrix(hermitian_part(H1), hermitian_part(H2), hermitian_part(H3));
  const SpectralSignature sig = signature_of_spectrum(herm_eig(B).eigenvalues, opts.gap_tol);
  IndexReport out;
  out.value = sig.value;
  out.gap = sig.gap;
  out.input_residual = rel.delta;
  out.cls = SymmetryClass::Complex;
  out.seconds = detail::seconds_since(t0);
  return out;
}

/// ±1 index of a self-dual triple: the sign of Pf(Φ(polar B)), normalized so
/// that B = diag(I, −I) gives +1.
inline IndexReport pf_bott_index(const ComplexMatrix& H1, const ComplexMatrix& H2,
                                 const ComplexMatrix& H3, const IndexOptions& opts = {}) {
  const auto t0 = detail::Clock::now();
  require_same_size(H1, H2, "pf_bott_index");
  require_same_size(H1, H3, "pf_bott_index");
  if (H1.rows() % 2 != 0) throw Error(Errc::OddDimension, "pf_bott_index: odd dimension");
  const RelationReport rel = sphere_residual(H1, H2, H3);
  detail::check_residual_gate(rel, opts);

  SphereTriple H;
  int r = 1;
  for (auto [src, dst] : {std::pair{&H1, &H.H1}, std::pair{&H2, &H.H2}, std::pair{&H3, &H.H3}}) {
    const double res = tau_residual(*src, SymmetryClass::SelfDual);
    if (res > opts.symmetry_tol * std::max(1.0, operator_norm(*src)))
      throw Error(Errc::NotSelfDual, "pf_bott_index: H" + std::to_string(r) +
                                         " is not self-dual (residual " + std::to_string(res) + ")");
    *dst = hermitian_part(symmetrize(*src, SymmetryClass::SelfDual));
    ++r;
  }

  const ComplexMatrix B = bott_matrix(H.H1, H.H2, H.H3);
  const EigDecomposition e = herm_eig(B);
  const SpectralSignature sig = signature_of_spectrum(e.eigenvalues, opts.gap_tol);
  const ComplexMatrix S = spectral_apply(e, [](double x) { return x > 0 ? 1.0 : -1.0; });

  const ComplexMatrix PS = phi_conjugate(S);
  const double skew = (PS + PS.transpose()).cwiseAbs().maxCoeff();
  const double real_part = PS.real().cwiseAbs().maxCoeff();
  if (skew > 1e-8 || real_part > 1e-8)
    throw Error(Errc::NotSkewAfterPhi,
                "pf_bott_index: conjugated polar part is not imaginary skew-symmetric");
  // Φ(S) = iR with R real skew of size 4N, so Pf(Φ(S)) = (−1)^N Pf(R).
  const RealMatrix R = 0.5 * (PS.imag() - PS.imag().transpose());
  const PfaffianLog pf = pfaffian_ltl(R);
  if (pf.sign == 0) throw Error(Errc::GapTooSmall, "pf_bott_index: vanishing Pfaffian");
  const Eigen::Index quarter = B.rows() / 4;
  IndexReport out;
  out.value = (quarter % 2 == 0) ? pf.sign : -pf.sign;
  out.gap = sig.gap;
  out.input_residual = rel.delta;
  out.cls = SymmetryClass::SelfDual;
  out.seconds = detail::seconds_since(t0);
  return out;
}

/// Real functions on the circle, parametrized by angle θ ∈ [0, 2π), with
/// f² + g² + h² = 1 and g·h = 0.
struct CircleFunctions {
  std::function<double(double)> f;
  std::function<double(double)> g;
  std::function<double(double)> h;
};

/// f = cos θ; h = sin θ on [0, π] and 0 after; g = 0 on [0, π] and −sin θ after.
inline CircleFunctions default_circle_functions() {
  return {
      [](double t) { return std::cos(t); },
      [](double t) { return std::max(0.0, -std::sin(t)); },
      [](double t) { return std::max(0.0, std::sin(t)); },
  };
}

/// Spectral data of a (near-)unitary: orthonormal eigenvectors and
/// eigenvalue angles in [0, 2π).
struct UnitaryEig {
  ComplexMatrix vectors;
  RealVector angles;
};

/// Diagonalizes U through its commuting Hermitian parts C = (U+U*)/2 and
/// S = (U−U*)/2i: first C + αS, then S inside each near-degenerate cluster.
inline UnitaryEig unitary_eig(const ComplexMatrix& U) {
  require_square(U, "unitary_eig");
  const Eigen::Index n = U.rows();
  const ComplexMatrix C = hermitian_part(U);
  const ComplexMatrix S = hermitian_part(-I_unit * U);
  constexpr double alpha = 0.5772156649015329;
  const EigDecomposition e = herm_eig(C + alpha * S, 1e-6);
  ComplexMatrix V = e.vectors;
  constexpr double cluster_tol = 1e-7;
  Eigen::Index start = 0;
  while (start < n) {
    Eigen::Index stop = start + 1;
    while (stop < n && e.eigenvalues(stop) - e.eigenvalues(stop - 1) < cluster_tol) ++stop;
    const Eigen::Index m = stop - start;
    if (m > 1) {
      const ComplexMatrix Vc = V.middleCols(start, m);
      const EigDecomposition sub = herm_eig(Vc.adjoint() * S * Vc, 1e-6);
      V.middleCols(start, m) = Vc * sub.vectors;
    }
    start = stop;
  }
  UnitaryEig out{V, RealVector(n)};
  for (Eigen::Index j = 0; j < n; ++j) {
    const cplx mu = V.col(j).dot(U * V.col(j));
    double t = std::atan2(mu.imag(), mu.real());
    if (t < 0) t += 2.0 * std::numbers::pi;
    if (t >= 2.0 * std::numbers::pi) t = 0.0;
    out.angles(j) = t;
  }
  return out;
}

inline ComplexMatrix circle_apply(const UnitaryEig& e, const std::function<double(double)>& fn) {
  RealVector v(e.angles.size());
  for (Eigen::Index j = 0; j < v.size(); ++j) v(j) = fn(e.angles(j));
  return e.vectors * v.cast<cplx>().asDiagonal() * e.vectors.adjoint();
}

/// Lift of a unitary pair to a Hermitian triple:
///   H₁ = f(U₂),
///   H₂ = g(U₂) + ¼{h(U₂), U₁*} + ¼{h(U₂), U₁},
///   H₃ = (i/4){h(U₂), U₁*} − (i/4){h(U₂), U₁}.
/// Anticommutators keep transpose- or ♯-symmetry of the U_r.
inline SphereTriple torus_to_sphere(const ComplexMatrix& U1, const ComplexMatrix& U2,
                                    const CircleFunctions& fns = default_circle_functions()) {
  require_same_size(U1, U2, "torus_to_sphere");
  const double nonunitary = unitarity_residual(U2);
  if (nonunitary > 1e-8)
    throw Error(Errc::NotUnitary,
                "torus_to_sphere: U2 is not unitary (residual " + std::to_string(nonunitary) + ")");
  const UnitaryEig e = unitary_eig(U2);
  const ComplexMatrix F = circle_apply(e, fns.f);
  const ComplexMatrix G = circle_apply(e, fns.g);
  const ComplexMatrix Hh = circle_apply(e, fns.h);
  const ComplexMatrix a_star = anticommutator(Hh, U1.adjoint());
  const ComplexMatrix a = anticommutator(Hh, U1);
  SphereTriple out;
  out.H1 = hermitian_part(F);
  out.H2 = hermitian_part(G + 0.25 * a_star + 0.25 * a);
  out.H3 = hermitian_part(0.25 * I_unit * a_star - 0.25 * I_unit * a);
  return out;
}

struct UnitaryIndexOptions {
  double gap_tol = 1e-6;
  /// Largest ‖U_r*U_r − I‖ accepted before polar correction.
  double max_nonunitarity = 0.1;
  double symmetry_tol = 1e-8;
};

namespace detail {

struct LiftedPair {
  SphereTriple triple;
  double torus_delta = 0.0;
  double sphere_delta = 0.0;
};

inline LiftedPair lift_pair(const ComplexMatrix& U1, const ComplexMatrix& U2,
                            const CircleFunctions& fns, const UnitaryIndexOptions& opts,
                            SymmetryClass cls) {
  require_same_size(U1, U2, "index of unitaries");
  for (const ComplexMatrix* U : {&U1, &U2}) {
    const double res = unitarity_residual(*U);
    if (res > opts.max_nonunitarity)
      throw Error(Errc::NotUnitary, "input is " + std::to_string(res) +
                                        " from unitary; limit " +
                                        std::to_string(opts.max_nonunitarity));
  }
  // polar commutes with each involution up to rounding; re-symmetrize.
  const ComplexMatrix V1 = symmetrize(polar(U1), cls);
  const ComplexMatrix V2 = symmetrize(polar(U2), cls);
  LiftedPair out;
  out.torus_delta = torus2_residual(V1, V2).delta;
  out.triple = torus_to_sphere(V1, V2, fns);
  out.sphere_delta = sphere_residual(out.triple.H1, out.triple.H2, out.triple.H3).delta;
  return out;
}

}  // namespace detail

/// Bott(U₁, U₂) through the lifted triple. Near-unitary inputs are replaced by
/// their polar parts. The sphere residual gate of bott_index is not applied;
/// the spectral gap alone certifies the value.
inline IndexReport bott_index_unitaries(const ComplexMatrix& U1, const ComplexMatrix& U2,
                                        const CircleFunctions& fns = default_circle_functions(),
                                        const UnitaryIndexOptions& opts = {}) {
  const auto t0 = detail::Clock::now();
  const detail::LiftedPair lp = detail::lift_pair(U1, U2, fns, opts, SymmetryClass::Complex);
  IndexOptions io;
  io.gap_tol = opts.gap_tol;
  io.max_residual = std::numeric_limits<double>::infinity();
  IndexReport out = bott_index(lp.triple.H1, lp.triple.H2, lp.triple.H3, io);
  out.input_residual = lp.torus_delta;
  out.lifted_residual = lp.sphere_delta;
  out.seconds = detail::seconds_since(t0);
  return out;
}

inline IndexReport pf_bott_unitaries(const ComplexMatrix& U1, const ComplexMatrix& U2,
                                     const CircleFunctions& fns = default_circle_functions(),
                                     const UnitaryIndexOptions& opts = {}) {
  const auto t0 = detail::Clock::now();
  for (const ComplexMatrix* U : {&U1, &U2}) {
    require_square(*U, "pf_bott_unitaries");
    if (U->rows() % 2 != 0) throw Error(Errc::OddDimension, "pf_bott_unitaries: odd dimension");
    const double res = tau_residual(*U, SymmetryClass::SelfDual);
    if (res > opts.symmetry_tol * std::max(1.0, operator_norm(*U)))
      throw Error(Errc::NotSelfDual,
                  "pf_bott_unitaries: input is not self-dual (residual " + std::to_string(res) + ")");
  }
  const detail::LiftedPair lp = detail::lift_pair(U1, U2, fns, opts, SymmetryClass::SelfDual);
  IndexOptions io;
  io.gap_tol = opts.gap_tol;
  io.max_residual = std::numeric_limits<double>::infinity();
  io.symmetry_tol = std::max(opts.symmetry_tol, 1e-8);
  IndexReport out = pf_bott_index(lp.triple.H1, lp.triple.H2, lp.triple.H3, io);
  out.input_residual = lp.torus_delta;
  out.lifted_residual = lp.sphere_delta;
  out.seconds = detail::seconds_since(t0);
  return out;
}

/// Isometry W (n × rank) with W W* = P, built by Gram–Schmidt on P applied
/// to seeded random vectors. Symmetric: W is real. SelfDual: columns are
/// [b₁..b_k, 𝒯b₁..𝒯b_k] with 𝒯ξ = −Zξ̄, so W* = −Z_k Wᵀ Z_N.
inline ComplexMatrix structured_isometry(const ComplexMatrix& P, Eigen::Index rank,
                                         SymmetryClass cls, std::uint64_t seed) {
  require_square(P, "structured_isometry");
  const Eigen::Index n = P.rows();
  if (rank < 0 || rank > n) throw Error(Errc::InvalidArgument, "structured_isometry: bad rank");
  if (cls == SymmetryClass::Symmetric && P.imag().cwiseAbs().maxCoeff() > 1e-8)
    throw Error(Errc::PairingFailure, "structured_isometry: projection is not real");
  if (cls == SymmetryClass::SelfDual) {
    if (n % 2 != 0 || rank % 2 != 0)
      throw Error(Errc::PairingFailure, "structured_isometry: self-dual class needs even size and rank");
    if ((dual(P) - P).cwiseAbs().maxCoeff() > 1e-8)
      throw Error(Errc::PairingFailure, "structured_isometry: projection is not self-dual");
  }
  Rng rng(seed);
  const Eigen::Index half = cls == SymmetryClass::SelfDual ? rank / 2 : rank;
  ComplexMatrix first(n, half);
  ComplexMatrix second(n, cls == SymmetryClass::SelfDual ? half : 0);
  Eigen::Index accepted = 0;
  const Eigen::Index max_attempts = 4 * rank + 20;
  auto orthogonalize = [&](ComplexVector& v) {
    for (int pass = 0; pass < 2; ++pass) {
      if (accepted == 0) break;
      v -= first.leftCols(accepted) * (first.leftCols(accepted).adjoint() * v);
      if (second.cols() > 0) v -= second.leftCols(accepted) * (second.leftCols(accepted).adjoint() * v);
    }
  };
  for (Eigen::Index attempt = 0; accepted < half && attempt < max_attempts; ++attempt) {
    ComplexVector g = cls == SymmetryClass::Symmetric
                          ? ComplexVector(gaussian_real(n, 1, rng).cast<cplx>())
                          : ComplexVector(gaussian_complex(n, 1, rng));
    ComplexVector v = P * g;
    if (cls == SymmetryClass::Symmetric) v = v.real().cast<cplx>();
    const double before = v.norm();
    orthogonalize(v);
    const double after = v.norm();
    if (!(after > 1e-6 * std::max(before, 1e-300))) continue;
    v /= after;
    first.col(accepted) = v;
    if (cls == SymmetryClass::SelfDual) second.col(accepted) = time_reversal(v);
    ++accepted;
  }
  if (accepted < half)
    throw Error(Errc::PairingFailure, "structured_isometry: could not span the range of P");
  if (cls != SymmetryClass::SelfDual) return first;
  ComplexMatrix W(n, rank);
  W << first, second;
  return W;
}

struct CompressedIndexOptions {
  double gap_tol = 1e-6;
  std::uint64_t seed = 1;
  /// Upper limit on max_r ‖[P, X̂_r]‖.
  double commutator_limit = 0.125;
  double projection_tol = 1e-8;
};

/// Bott(P; X̂) or Pf-Bott(P; X̂): compress the exact torus positions by an
/// isometry onto the range of P, then take the index of (X₁ + iX₂, X₃ + iX₄).
inline IndexReport compressed_index(const ComplexMatrix& P, const ComplexMatrix& X1,
                                    const ComplexMatrix& X2, const ComplexMatrix& X3,
                                    const ComplexMatrix& X4, SymmetryClass cls,
                                    const CompressedIndexOptions& opts = {}) {
  const auto t0 = detail::Clock::now();
  require_same_size(P, X1, "compressed_index");
  const Eigen::Index n = P.rows();
  const double proj_res = std::max((P * P - P).cwiseAbs().maxCoeff(),
                                   (P - P.adjoint()).cwiseAbs().maxCoeff());
  if (proj_res > opts.projection_tol)
    throw Error(Errc::NotProjection, "compressed_index: P is not an orthogonal projection");
  const RelationReport exact = torus4_residual(X1, X2, X3, X4);
  if (exact.delta > 1e-8)
    throw Error(Errc::NotExactRepresentation,
                "compressed_index: position matrices are not an exact torus representation");
  double delta = 0.0;
  for (const ComplexMatrix* X : {&X1, &X2, &X3, &X4})
    delta = std::max(delta, operator_norm(commutator(P, *X)));
  if (delta >= opts.commutator_limit)
    throw Error(Errc::CommutatorTooLarge, "compressed_index: max ||[P, X_r]|| = " +
                                              std::to_string(delta) + " exceeds limit " +
                                              std::to_string(opts.commutator_limit));
  const auto rank = static_cast<Eigen::Index>(std::llround(P.trace().real()));
  IndexReport out;
  out.cls = cls;
  out.projection_delta = delta;
  out.rank = rank;
  if (rank == 0) {
    // An empty tuple carries the trivial class.
    out.value = cls == SymmetryClass::SelfDual ? 1 : 0;
    out.gap = std::numeric_limits<double>::infinity();
    out.input_residual = 0.0;
    out.seconds = detail::seconds_since(t0);
    return out;
  }
  (void)n;
  const ComplexMatrix W = structured_isometry(P, rank, cls, opts.seed);
  auto compress = [&](const ComplexMatrix& X) {
    return hermitian_part(symmetrize(ComplexMatrix(W.adjoint() * X * W), cls));
  };
  const ComplexMatrix Y1 = compress(X1), Y2 = compress(X2), Y3 = compress(X3), Y4 = compress(X4);
  const double compressed_delta = torus4_residual(Y1, Y2, Y3, Y4).delta;

  UnitaryIndexOptions uo;
  uo.gap_tol = opts.gap_tol;
  // ‖U*U − I‖ ≤ ‖X₁² + X₂² − I‖ + ‖[X₁, X₂]‖ ≤ 4δ for the compressed tuple.
  uo.max_nonunitarity = 4.0 * opts.commutator_limit;
  const ComplexMatrix U1 = Y1 + I_unit * Y2;
  const ComplexMatrix U2 = Y3 + I_unit * Y4;
  IndexReport idx = cls == SymmetryClass::SelfDual ? pf_bott_unitaries(U1, U2, default_circle_functions(), uo)
                                                   : bott_index_unitaries(U1, U2, default_circle_functions(), uo);
  out.value = idx.value;
  out.gap = idx.gap;
  out.input_residual = compressed_delta;
  out.lifted_residual = idx.lifted_residual;
  out.seconds = detail::seconds_since(t0);
  return out;
}

}  // namespace acm
