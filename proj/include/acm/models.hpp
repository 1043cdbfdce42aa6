#pragma once

// Example systems: the Voiculescu clock/shift pair, self-dual doubling,
// exact torus position matrices and a Harper–Hofstadter lattice with its
// Fermi projection.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>

#include "acm/invariants.hpp"
#include "acm/matkernel.hpp"
#include "acm/random.hpp"
#include "acm/symmetry.hpp"

namespace acm {

struct UnitaryPair {
  ComplexMatrix U1;
  ComplexMatrix U2;
};

struct PositionSet {
  ComplexMatrix X1, X2, X3, X4;
};

/// A_n = cyclic shift (ones on the subdiagonal and in the top-right corner),
/// B_n = diag(e^{2πik/n}), k = 1..n.
inline UnitaryPair voiculescu(Eigen::Index n) {
  if (n < 2) throw Error(Errc::InvalidArgument, "voiculescu: n must be at least 2");
  ComplexMatrix A = ComplexMatrix::Zero(n, n);
  for (Eigen::Index k = 0; k + 1 < n; ++k) A(k + 1, k) = 1.0;
  A(0, n - 1) = 1.0;
  ComplexMatrix B = ComplexMatrix::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(k + 1) / static_cast<double>(n);
    B(k, k) = std::polar(1.0, angle);
  }
  // The last entry is e^{2πi} = 1 exactly.
  B(n - 1, n - 1) = 1.0;
  return {std::move(A), std::move(B)};
}

/// V_r = diag(U_r, U_rᵀ); self-dual for the Z of matching size.
inline UnitaryPair selfdual_double(const ComplexMatrix& U1, const ComplexMatrix& U2) {
  require_same_size(U1, U2, "selfdual_double");
  const Eigen::Index n = U1.rows();
  auto doubled = [n](const ComplexMatrix& U) {
    ComplexMatrix V = ComplexMatrix::Zero(2 * n, 2 * n);
    V.topLeftCorner(n, n) = U;
    V.bottomRightCorner(n, n) = U.transpose();
    return V;
  };
  return {doubled(U1), doubled(U2)};
}

struct LatticeSpec {
  int L = 12;               // sites per side of the discrete two-torus
  double flux = 0.0;        // flux quanta per plaquette, in [0, 1)
  double fermi_level = 0.0;
  int orbitals = 1;         // 2 doubles H ⊕ H̄ for a self-dual model
  double stagger = 0.0;     // on-site potential m·(−1)^{x+y}

  void validate() const {
    if (L < 2) throw Error(Errc::InvalidArgument, "LatticeSpec: L must be at least 2");
    if (!(flux >= 0.0 && flux < 1.0))
      throw Error(Errc::InvalidArgument, "LatticeSpec: flux must lie in [0, 1)");
    if (orbitals != 1 && orbitals != 2)
      throw Error(Errc::InvalidArgument, "LatticeSpec: orbitals must be 1 or 2");
  }

  Eigen::Index sites() const { return static_cast<Eigen::Index>(L) * L; }
};

inline Eigen::Index site_index(int x, int y, int L) {
  return static_cast<Eigen::Index>(y) * L + x;
}

namespace detail {

inline ComplexMatrix double_block(const ComplexMatrix& A, const ComplexMatrix& B) {
  const Eigen::Index n = A.rows();
  ComplexMatrix out = ComplexMatrix::Zero(2 * n, 2 * n);
  out.topLeftCorner(n, n) = A;
  out.bottomRightCorner(n, n) = B;
  return out;
}

}  // namespace detail

/// X₁ = cos(2πx/L), X₂ = sin(2πx/L), X₃ = cos(2πy/L), X₄ = sin(2πy/L) as
/// diagonal matrices. With two orbitals each is diag(X, X).
inline PositionSet torus_positions(const LatticeSpec& spec) {
  spec.validate();
  const Eigen::Index n = spec.sites();
  RealVector cx(n), sx(n), cy(n), sy(n);
  for (int y = 0; y < spec.L; ++y)
    for (int x = 0; x < spec.L; ++x) {
      const Eigen::Index i = site_index(x, y, spec.L);
      const double ax = 2.0 * std::numbers::pi * x / spec.L;
      const double ay = 2.0 * std::numbers::pi * y / spec.L;
      cx(i) = std::cos(ax);
      sx(i) = std::sin(ax);
      cy(i) = std::cos(ay);
      sy(i) = std::sin(ay);
    }
  auto diag = [&](const RealVector& v) -> ComplexMatrix {
    ComplexMatrix D = v.cast<cplx>().asDiagonal();
    if (spec.orbitals == 2) return detail::double_block(D, D);
    return D;
  };
  return {diag(cx), diag(sx), diag(cy), diag(sy)};
}

/// Nearest-neighbour hopping on the L×L torus in Landau gauge: hops along x
/// carry amplitude −1, hops along y from column x carry −e^{2πi·flux·x}.
/// Periodic closure is gauge-consistent when flux·L is an integer.
inline ComplexMatrix harper_hamiltonian(const LatticeSpec& spec) {
  spec.validate();
  const Eigen::Index n = spec.sites();
  ComplexMatrix H = ComplexMatrix::Zero(n, n);
  const int L = spec.L;
  for (int y = 0; y < L; ++y)
    for (int x = 0; x < L; ++x) {
      const Eigen::Index i = site_index(x, y, L);
      const Eigen::Index jx = site_index((x + 1) % L, y, L);
      const Eigen::Index jy = site_index(x, (y + 1) % L, L);
      H(jx, i) += -1.0;
      H(i, jx) += -1.0;
      const cplx phase = std::polar(1.0, 2.0 * std::numbers::pi * spec.flux * x);
      H(jy, i) += -phase;
      H(i, jy) += -std::conj(phase);
      H(i, i) += spec.stagger * (((x + y) % 2 == 0) ? 1.0 : -1.0);
    }
  return H;
}

struct HarperModel {
  ComplexMatrix P;  // Fermi projection
  ComplexMatrix H;  // Hamiltonian
  double spectral_gap = 0.0;  // distance from the Fermi level to the spectrum
  Eigen::Index rank = 0;
  double commutator_delta = 0.0;  // max_r ‖[P, X̂_r]‖
};

/// Fermi projection of the Harper model. For two orbitals the Hamiltonian is
/// H ⊕ H̄ and the projection is self-dual.
inline HarperModel harper_projection(const LatticeSpec& spec) {
  spec.validate();
  const ComplexMatrix H0 = harper_hamiltonian(spec);
  const EigDecomposition e = herm_eig(H0);
  double gap = std::numeric_limits<double>::infinity();
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < e.eigenvalues.size(); ++i) {
    gap = std::min(gap, std::abs(e.eigenvalues(i) - spec.fermi_level));
    if (e.eigenvalues(i) < spec.fermi_level) ++rank;
  }
  if (gap < 1e-6)
    throw Error(Errc::NoGap, "harper_projection: Fermi level " + std::to_string(spec.fermi_level) +
                                 " lies within 1e-6 of the spectrum");
  const ComplexMatrix V = e.vectors.leftCols(rank);
  ComplexMatrix P0 = V * V.adjoint();
  P0 = hermitian_part(P0);

  HarperModel out;
  out.spectral_gap = gap;
  if (spec.orbitals == 2) {
    out.H = detail::double_block(H0, H0.conjugate());
    out.P = detail::double_block(P0, P0.conjugate());
    out.rank = 2 * rank;
  } else {
    out.H = H0;
    out.P = P0;
    out.rank = rank;
  }
  const PositionSet X = torus_positions(spec);
  for (const ComplexMatrix* Xr : {&X.X1, &X.X2, &X.X3, &X.X4})
    out.commutator_delta = std::max(out.commutator_delta, operator_norm(commutator(out.P, *Xr)));
  return out;
}

/// Commuting Hermitian triple on the sphere plus noise of norm `noise`:
/// H_r = V diag(x_r) V* with sphere points |x₃| ≤ 0.9, V real orthogonal
/// (Symmetric), symplectic unitary on doubled points (SelfDual, size 2n) or
/// unitary (Complex). The noise lies in the same class.
inline SphereTriple commuting_triple(Eigen::Index n, SymmetryClass cls, double noise,
                                     std::uint64_t seed) {
  if (n < 1) throw Error(Errc::InvalidArgument, "commuting_triple: n must be positive");
  if (!(noise >= 0.0)) throw Error(Errc::InvalidArgument, "commuting_triple: noise must be nonnegative");
  Rng rng(seed);
  std::uniform_real_distribution<double> height(-0.9, 0.9);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  RealVector x1(n), x2(n), x3(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double z = height(rng), t = angle(rng), r = std::sqrt(1.0 - z * z);
    x1(i) = r * std::cos(t);
    x2(i) = r * std::sin(t);
    x3(i) = z;
  }
  const Eigen::Index size = cls == SymmetryClass::SelfDual ? 2 * n : n;
  ComplexMatrix V;
  switch (cls) {
    case SymmetryClass::Symmetric: V = random_orthogonal(n, rng).cast<cplx>(); break;
    case SymmetryClass::SelfDual:
      V = exp_skew_hermitian(random_structured_generator(size, SymmetryClass::Symmetric, rng));
      break;
    case SymmetryClass::Complex: V = random_unitary(n, rng); break;
  }
  auto build = [&](const RealVector& x) {
    RealVector d(size);
    if (cls == SymmetryClass::SelfDual) d << x, x;
    else d = x;
    ComplexMatrix H = V * d.cast<cplx>().asDiagonal() * V.adjoint();
    if (noise > 0.0) {
      ComplexMatrix N = cls == SymmetryClass::Symmetric ? random_real_symmetric(size, rng)
                                                        : random_hermitian(size, rng);
      N = hermitian_part(symmetrize(N, cls));
      H += (noise / operator_norm(N)) * N;
    }
    return hermitian_part(symmetrize(H, cls));
  };
  SphereTriple out;
  out.H1 = build(x1);
  out.H2 = build(x2);
  out.H3 = build(x3);
  return out;
}

}  // namespace acm
