#pragma once

// Involutions on square complex matrices: transpose, the dual operation
// X^♯ = −Z Xᵀ Z, the coupled dual ♯⊗♯ on 4N×4N matrices, the unitary
// conjugation Φ carrying ♯⊗♯ to the transpose, and the quaternion
// embedding χ.
//
// Block convention for ♯⊗♯ and Φ: a 4N×4N matrix is read as 2×2 blocks of
// size 2N, each of which is again 2×2 blocks of size N. For N = 1:
//
//     X = [ a b | c d ]        X^{♯⊗♯} = [  D^♯  −B^♯ ]
//         [ e f | g h ]                  [ −C^♯   A^♯ ]
//         [ ----+---- ]
//         [ i j | k l ]   with A = [a b; e f], B = [c d; g h],
//         [ m n | o p ]        C = [i j; m n], D = [k l; o p],
//
// and for a 2×2 block [x y; z w]^♯ = [w −y; −z x].

#include <string>
#include <string_view>

#include "acm/matkernel.hpp"
#include "acm/random.hpp"

namespace acm {

enum class SymmetryClass {
  Complex,    // no involution
  Symmetric,  // τ = transpose (real matrices)
  SelfDual,   // τ = ♯ (quaternionic matrices)
};

constexpr std::string_view to_string(SymmetryClass c) {
  switch (c) {
    case SymmetryClass::Complex: return "complex";
    case SymmetryClass::Symmetric: return "symmetric";
    case SymmetryClass::SelfDual: return "selfdual";
  }
  return "complex";
}

inline SymmetryClass parse_symmetry_class(std::string_view s) {
  if (s == "complex") return SymmetryClass::Complex;
  if (s == "symmetric") return SymmetryClass::Symmetric;
  if (s == "selfdual") return SymmetryClass::SelfDual;
  throw Error(Errc::InvalidArgument, "unknown symmetry class '" + std::string(s) + "'");
}

/// Z_N = [[0, I], [−I, 0]], of size 2N.
inline ComplexMatrix symplectic_form(Eigen::Index half_size) {
  if (half_size <= 0) throw Error(Errc::InvalidArgument, "symplectic_form: half size must be positive");
  ComplexMatrix Z = ComplexMatrix::Zero(2 * half_size, 2 * half_size);
  Z.topRightCorner(half_size, half_size).setIdentity();
  Z.bottomLeftCorner(half_size, half_size) = -ComplexMatrix::Identity(half_size, half_size);
  return Z;
}

namespace detail {

inline void require_even(const ComplexMatrix& X, std::string_view who) {
  require_square(X, who);
  if (X.rows() % 2 != 0) throw Error(Errc::OddDimension, std::string(who) + ": odd dimension");
}

}  // namespace detail

/// X^♯ = −Z Xᵀ Z, computed blockwise as [[Dᵀ, −Bᵀ], [−Cᵀ, Aᵀ]].
inline ComplexMatrix dual(const ComplexMatrix& X) {
  detail::require_even(X, "dual");
  const Eigen::Index n = X.rows() / 2;
  ComplexMatrix out(X.rows(), X.cols());
  out.topLeftCorner(n, n) = X.bottomRightCorner(n, n).transpose();
  out.topRightCorner(n, n) = -X.topRightCorner(n, n).transpose();
  out.bottomLeftCorner(n, n) = -X.bottomLeftCorner(n, n).transpose();
  out.bottomRightCorner(n, n) = X.topLeftCorner(n, n).transpose();
  return out;
}

/// The involution of a class; identity for Complex.
inline ComplexMatrix tau(const ComplexMatrix& X, SymmetryClass c) {
  switch (c) {
    case SymmetryClass::Complex: return X;
    case SymmetryClass::Symmetric: return X.transpose();
    case SymmetryClass::SelfDual: return dual(X);
  }
  return X;
}

/// ‖X^τ − X‖; zero for the Complex class.
inline double tau_residual(const ComplexMatrix& X, SymmetryClass c) {
  if (c == SymmetryClass::Complex) {
    require_square(X, "tau_residual");
    return 0.0;
  }
  return operator_norm(tau(X, c) - X);
}

/// (X + X^τ)/2.
inline ComplexMatrix symmetrize(const ComplexMatrix& X, SymmetryClass c) {
  if (c == SymmetryClass::Complex) return X;
  return 0.5 * (X + tau(X, c));
}

/// Threshold under which a matrix counts as τ-fixed.
inline double tau_fixed_threshold(const ComplexMatrix& X) {
  return 1e-8 * std::max(1.0, operator_norm(X));
}

/// χ(A + B ĵ) = [[A, B], [−B̄, Ā]].
inline ComplexMatrix chi_embed(const ComplexMatrix& A, const ComplexMatrix& B) {
  require_same_size(A, B, "chi_embed");
  const Eigen::Index n = A.rows();
  ComplexMatrix X(2 * n, 2 * n);
  X.topLeftCorner(n, n) = A;
  X.topRightCorner(n, n) = B;
  X.bottomLeftCorner(n, n) = -B.conjugate();
  X.bottomRightCorner(n, n) = A.conjugate();
  return X;
}

/// Time reversal ξ ↦ −Z ξ̄ on C^{2N}.
inline ComplexVector time_reversal(const ComplexVector& v) {
  const Eigen::Index n = v.size() / 2;
  ComplexVector out(v.size());
  out.head(n) = -v.tail(n).conjugate();
  out.tail(n) = v.head(n).conjugate();
  return out;
}

namespace detail {

inline void require_quad(const ComplexMatrix& X, std::string_view who) {
  require_square(X, who);
  if (X.rows() % 4 != 0)
    throw Error(Errc::BadDimension, std::string(who) + ": size must be divisible by 4");
}

}  // namespace detail

/// [[A, B], [C, D]]^{♯⊗♯} = [[D^♯, −B^♯], [−C^♯, A^♯]] with blocks of size 2N.
inline ComplexMatrix sharp_sharp(const ComplexMatrix& X) {
  detail::require_quad(X, "sharp_sharp");
  const Eigen::Index m = X.rows() / 2;
  ComplexMatrix out(X.rows(), X.cols());
  out.topLeftCorner(m, m) = dual(X.bottomRightCorner(m, m));
  out.topRightCorner(m, m) = -dual(X.topRightCorner(m, m));
  out.bottomLeftCorner(m, m) = -dual(X.bottomLeftCorner(m, m));
  out.bottomRightCorner(m, m) = dual(X.topLeftCorner(m, m));
  return out;
}

/// U = (I⊗I − i Z_N⊗Z_1)/√2 = [[I, −iZ_N], [iZ_N, I]]/√2, size 4N.
inline ComplexMatrix phi_unitary(Eigen::Index quarter_size) {
  const Eigen::Index m = 2 * quarter_size;
  const ComplexMatrix Z = symplectic_form(quarter_size);
  ComplexMatrix U(2 * m, 2 * m);
  U.topLeftCorner(m, m).setIdentity();
  U.bottomRightCorner(m, m).setIdentity();
  U.topRightCorner(m, m) = -I_unit * Z;
  U.bottomLeftCorner(m, m) = I_unit * Z;
  return U / std::sqrt(2.0);
}

/// Φ(X) = U X U*. Carries ♯⊗♯ to the transpose: Φ(X^{♯⊗♯}) = Φ(X)ᵀ.
inline ComplexMatrix phi_conjugate(const ComplexMatrix& X) {
  detail::require_quad(X, "phi_conjugate");
  const ComplexMatrix U = phi_unitary(X.rows() / 4);
  return U * X * U.adjoint();
}

inline ComplexMatrix phi_inverse(const ComplexMatrix& X) {
  detail::require_quad(X, "phi_inverse");
  const ComplexMatrix U = phi_unitary(X.rows() / 4);
  return U.adjoint() * X * U;
}

/// Involution used for the Bott matrix of a class: the class τ tensored with ♯
/// on the 2×2 Pauli factor. For Symmetric this is ♯ on 2n×2n; for SelfDual it
/// is ♯⊗♯ on 4N×4N.
inline ComplexMatrix doubled_tau(const ComplexMatrix& X, SymmetryClass c) {
  switch (c) {
    case SymmetryClass::Complex: return X;
    case SymmetryClass::Symmetric: return dual(X);
    case SymmetryClass::SelfDual: return sharp_sharp(X);
  }
  return X;
}

/// Random element of the Lie algebra {G : G* = G^τ' = −G} for the doubled
/// involution τ' of a class; exp(G) is then a structured unitary.
inline ComplexMatrix random_structured_generator(Eigen::Index n, SymmetryClass c, Rng& rng) {
  const ComplexMatrix M = gaussian_complex(n, n, rng);
  const ComplexMatrix K = 0.5 * (M - M.adjoint());
  if (c == SymmetryClass::Complex) return K;
  return 0.5 * (K - doubled_tau(K, c));
}

/// exp(G) for skew-Hermitian G through the Hermitian matrix iG.
inline ComplexMatrix exp_skew_hermitian(const ComplexMatrix& G) {
  const EigDecomposition e = herm_eig(I_unit * G);
  RealVector lam = e.eigenvalues;
  Eigen::VectorXcd ph(lam.size());
  for (Eigen::Index i = 0; i < lam.size(); ++i) ph(i) = std::exp(-I_unit * lam(i));
  return e.vectors * ph.asDiagonal() * e.vectors.adjoint();
}

}  // namespace acm
