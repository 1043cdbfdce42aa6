#pragma once

// Structured canonical forms: symplectic diagonalization of Hermitian
// anti-self-dual matrices, the real skew block form, witnesses for trivial
// K₂ classes, and the commuting pair extracted from a soft sphere.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "acm/invariants.hpp"
#include "acm/matkernel.hpp"
#include "acm/random.hpp"
#include "acm/symmetry.hpp"

namespace acm {

struct WitnessReport {
  ComplexMatrix W;
  double bound = 0.0;           // ‖S − W·R·W*‖ for the reference R of the theorem
  double norm_condition = 0.0;  // ‖S² − I‖
  bool certified = false;       // bound ≤ ‖S² − I‖ + 1e−8
};

struct AntiSelfDualDiag {
  ComplexMatrix W;  // symplectic unitary
  RealVector D;     // ≥ 0, length N
};

namespace detail {

inline double rel_tol(const ComplexMatrix& X, double tol) {
  return tol * std::max(1.0, operator_norm(X));
}

inline void require_hermitian(const ComplexMatrix& X, double tol, std::string_view who) {
  const double res = hermitian_residual(X);
  if (res > rel_tol(X, tol))
    throw Error(Errc::NonHermitian, std::string(who) + ": input is not Hermitian (residual " +
                                        std::to_string(res) + ")");
}

inline double square_defect(const ComplexMatrix& S) {
  return operator_norm(S * S - identity(S.rows()));
}

inline double require_norm_condition(const ComplexMatrix& S, std::string_view who) {
  const double d = square_defect(S);
  if (!(d < 1.0))
    throw Error(Errc::NormConditionFailed,
                std::string(who) + ": ||S^2 - I|| = " + std::to_string(d) + " is not below 1");
  return d;
}

inline ComplexMatrix sign_reference(Eigen::Index half) {
  ComplexMatrix R = ComplexMatrix::Zero(2 * half, 2 * half);
  R.topLeftCorner(half, half).setIdentity();
  R.bottomRightCorner(half, half) = -ComplexMatrix::Identity(half, half);
  return R;
}

/// Removes the components along the accepted pairs, twice for stability.
inline void project_out(ComplexVector& v, const ComplexMatrix& first, const ComplexMatrix& second,
                        Eigen::Index accepted) {
  if (accepted == 0) return;
  for (int pass = 0; pass < 2; ++pass) {
    v -= first.leftCols(accepted) * (first.leftCols(accepted).adjoint() * v);
    v -= second.leftCols(accepted) * (second.leftCols(accepted).adjoint() * v);
  }
}

inline std::optional<AntiSelfDualDiag> pair_eigenvectors(const ComplexMatrix& X,
                                                         const EigDecomposition& e,
                                                         double zero_tol) {
  const Eigen::Index n = X.rows();
  const Eigen::Index half = n / 2;
  ComplexMatrix first(n, half), second(n, half);
  Eigen::Index accepted = 0;
  auto accept = [&](ComplexVector v) {
    v.normalize();
    first.col(accepted) = v;
    second.col(accepted) = time_reversal(v);
    ++accepted;
  };

  // Positive eigenvalues, largest first; each partner 𝒯b lies at −λ.
  for (Eigen::Index i = n - 1; i >= 0 && accepted < half; --i) {
    if (e.eigenvalues(i) <= zero_tol) break;
    ComplexVector v = e.vectors.col(i);
    project_out(v, first, second, accepted);
    if (v.norm() > 0.5) accept(std::move(v));
  }

  // Near-kernel: greedy structured Gram–Schmidt over the cluster.
  std::vector<Eigen::Index> kernel;
  for (Eigen::Index i = 0; i < n; ++i)
    if (std::abs(e.eigenvalues(i)) <= zero_tol) kernel.push_back(i);
  while (accepted < half) {
    double best_norm = 0.0;
    ComplexVector best;
    for (Eigen::Index i : kernel) {
      ComplexVector v = e.vectors.col(i);
      project_out(v, first, second, accepted);
      if (v.norm() > best_norm) {
        best_norm = v.norm();
        best = std::move(v);
      }
    }
    if (best_norm < 1e-3) return std::nullopt;
    accept(std::move(best));
  }

  AntiSelfDualDiag out;
  out.D.resize(half);
  for (Eigen::Index j = 0; j < half; ++j) {
    const double d = first.col(j).dot(X * first.col(j)).real();
    if (d < 0) {
      // Conjugating the j-th pair by [[0, i], [i, 0]] up to phase: b ↦ 𝒯b, 𝒯b ↦ −b.
      const ComplexVector b = first.col(j);
      first.col(j) = second.col(j);
      second.col(j) = -b;
    }
    out.D(j) = std::abs(d);
  }
  out.W.resize(n, n);
  out.W << first, second;
  return out;
}

}  // namespace detail

/// X = W·diag(D, −D)·W* with W symplectic unitary and D ≥ 0, for X Hermitian
/// with X^♯ = −X.
inline AntiSelfDualDiag diag_anti_selfdual(const ComplexMatrix& X) {
  detail::require_even(X, "diag_anti_selfdual");
  require_finite(X, "diag_anti_selfdual");
  detail::require_hermitian(X, 1e-8, "diag_anti_selfdual");
  const double sym = operator_norm(dual(X) + X);
  if (sym > detail::rel_tol(X, 1e-8))
    throw Error(Errc::WrongSymmetry, "diag_anti_selfdual: X^# != -X (residual " +
                                         std::to_string(sym) + ")");
  const ComplexMatrix Xs = hermitian_part(0.5 * (X - dual(X)));
  const EigDecomposition e = herm_eig(Xs);
  const double scale = std::max(1.0, e.eigenvalues.cwiseAbs().maxCoeff());
  for (double zero_tol : {1e-9 * scale, 1e-7 * scale, 1e-5 * scale}) {
    if (auto r = detail::pair_eigenvectors(Xs, e, zero_tol)) return std::move(*r);
  }
  throw Error(Errc::DegenerateFailure, "diag_anti_selfdual: eigenvector pairing failed");
}

/// Symplectic unitary W with ‖S − W·diag(I, −I)·W*‖ ≤ ‖S² − I‖, for S
/// Hermitian, anti-self-dual and ‖S² − I‖ < 1.
inline WitnessReport k2_quaternion_witness(const ComplexMatrix& S) {
  detail::require_even(S, "k2_quaternion_witness");
  detail::require_hermitian(S, 1e-8, "k2_quaternion_witness");
  if (operator_norm(dual(S) + S) > detail::rel_tol(S, 1e-8))
    throw Error(Errc::WrongSymmetry, "k2_quaternion_witness: S^# != -S");
  WitnessReport out;
  out.norm_condition = detail::require_norm_condition(S, "k2_quaternion_witness");
  AntiSelfDualDiag d = diag_anti_selfdual(S);
  out.W = std::move(d.W);
  out.bound = operator_norm(S - out.W * detail::sign_reference(S.rows() / 2) * out.W.adjoint());
  out.certified = out.bound <= out.norm_condition + 1e-8;
  return out;
}

/// S₀ of size 4n: 2×2 blocks [[0, i], [−i, 0]], the first one scaled by (−1)ⁿ.
/// Hermitian, antisymmetric, Pf(S₀) = 1.
inline ComplexMatrix k2_real_reference(Eigen::Index n) {
  if (n <= 0) throw Error(Errc::InvalidArgument, "k2_real_reference: n must be positive");
  ComplexMatrix S0 = ComplexMatrix::Zero(4 * n, 4 * n);
  for (Eigen::Index k = 0; k < 2 * n; ++k) {
    const double s = (k == 0 && n % 2 == 1) ? -1.0 : 1.0;
    S0(2 * k, 2 * k + 1) = s * I_unit;
    S0(2 * k + 1, 2 * k) = -s * I_unit;
  }
  return S0;
}

struct RealSkewCanonical {
  RealMatrix U;  // orthogonal, det U = +1
  RealVector a;  // R = U·⊕[[0, a_k], [−a_k, 0]]·Uᵀ, a_2.. > 0
};

/// Block form of a real skew-symmetric R of even size. The column order and
/// signs make a₂, a₃, … positive and det U = +1, so sign(a₁) = sign(Pf R).
inline RealSkewCanonical real_skew_canonical(const ComplexMatrix& R) {
  try {
    detail::require_real_skew(R, 1e-10, "real_skew_canonical");
  } catch (const Error& e) {
    throw Error(Errc::NotRealSkew, e.what());
  }
  const Eigen::Index n = R.rows();
  const Eigen::Index m = n / 2;
  const RealMatrix Rr = 0.5 * (R.real() - R.real().transpose());
  // iR is Hermitian with spectrum ±a_k; v = x + iy at +a gives R x = a y, R y = −a x.
  const EigDecomposition e = herm_eig(I_unit * Rr.cast<cplx>());
  RealSkewCanonical out;
  out.U.resize(n, n);
  out.a.resize(m);
  for (Eigen::Index k = 0; k < m; ++k) {
    const Eigen::Index i = n - m + k;
    const double a = e.eigenvalues(i);
    if (!(a >= 1e-10))
      throw Error(Errc::RankDeficient, "real_skew_canonical: block value " + std::to_string(a) +
                                           " is below 1e-10");
    const ComplexVector v = e.vectors.col(i);
    out.U.col(2 * k) = std::sqrt(2.0) * v.imag();
    out.U.col(2 * k + 1) = std::sqrt(2.0) * v.real();
    out.a(k) = a;
  }
  // Re-orthonormalize the real basis against rounding inside degenerate blocks.
  Eigen::HouseholderQR<RealMatrix> qr(out.U);
  RealMatrix Q = qr.householderQ();
  const RealVector diag = qr.matrixQR().diagonal();
  for (Eigen::Index j = 0; j < n; ++j)
    if (diag(j) < 0) Q.col(j) = -Q.col(j);
  out.U = Q;
  if (out.U.determinant() < 0) {
    out.U.col(0) = -out.U.col(0);
    out.a(0) = -out.a(0);
  }
  return out;
}

/// Real orthogonal W with det W = 1 and ‖S − W S₀ Wᵀ‖ ≤ ‖S² − I‖, for S
/// Hermitian antisymmetric of size 4n. Throws NontrivialClass when Pf(S) < 0.
inline WitnessReport k2_real_witness(const ComplexMatrix& S) {
  require_square(S, "k2_real_witness");
  if (S.rows() % 4 != 0)
    throw Error(Errc::BadDimension, "k2_real_witness: size must be divisible by 4");
  detail::require_hermitian(S, 1e-8, "k2_real_witness");
  if (operator_norm(ComplexMatrix(S.transpose()) + S) > detail::rel_tol(S, 1e-8))
    throw Error(Errc::WrongSymmetry, "k2_real_witness: S^T != -S");
  WitnessReport out;
  out.norm_condition = detail::require_norm_condition(S, "k2_real_witness");
  const Eigen::Index n = S.rows() / 4;
  // X = −iS is real skew and Pf(S) = (−1)ⁿ Pf(X).
  ComplexMatrix X = (-I_unit * S).real().cast<cplx>();
  X = 0.5 * (X - ComplexMatrix(X.transpose()));
  const PfaffianLog pf = pfaffian_real_skew_log(X, 1e-8);
  const int pf_sign = (n % 2 == 0) ? pf.sign : -pf.sign;
  if (pf_sign <= 0) throw Error(Errc::NontrivialClass, "k2_real_witness: Pf(S) is not positive");
  const RealSkewCanonical c = real_skew_canonical(X);
  out.W = c.U.cast<cplx>();
  out.bound = operator_norm(S - out.W * k2_real_reference(n) * out.W.adjoint());
  out.certified = out.bound <= out.norm_condition + 1e-8;
  return out;
}

/// Unitary W with W^{♯⊗♯} = W* and ‖S − W·diag(I, −I)·W*‖ ≤ ‖S² − I‖, for S
/// Hermitian with S^{♯⊗♯} = −S. Built as Φ⁻¹(W₂W₁ᵀ) where W₁ conjugates
/// S₀ to Φ(diag(I, −I)) and W₂ conjugates S₀ to Φ(S).
inline WitnessReport k2_twisted_witness(const ComplexMatrix& S) {
  detail::require_quad(S, "k2_twisted_witness");
  detail::require_hermitian(S, 1e-8, "k2_twisted_witness");
  if (operator_norm(sharp_sharp(S) + S) > detail::rel_tol(S, 1e-8))
    throw Error(Errc::WrongSymmetry, "k2_twisted_witness: S^(#x#) != -S");
  WitnessReport out;
  out.norm_condition = detail::require_norm_condition(S, "k2_twisted_witness");
  const ComplexMatrix ref = detail::sign_reference(S.rows() / 2);
  const ComplexMatrix W1 = k2_real_witness(phi_conjugate(ref)).W;
  WitnessReport w2;
  try {
    w2 = k2_real_witness(phi_conjugate(S));
  } catch (const Error& e) {
    if (e.code() == Errc::NontrivialClass)
      throw Error(Errc::NontrivialClass, "k2_twisted_witness: Pf(Phi(S)) is negative");
    throw;
  }
  out.W = phi_inverse(w2.W * W1.transpose());
  out.bound = operator_norm(S - out.W * ref * out.W.adjoint());
  out.certified = out.bound <= out.norm_condition + 1e-8;
  return out;
}

/// ‖polar(a*b) − polar(a)*·polar(b)‖ for invertible a, b with aa* + bb* = I.
inline double polar_product_check(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_size(a, b, "polar_product_check");
  const double hyp = operator_norm(a * a.adjoint() + b * b.adjoint() - identity(a.rows()));
  if (hyp > 1e-8)
    throw Error(Errc::HypothesisFailed,
                "polar_product_check: ||aa* + bb* - I|| = " + std::to_string(hyp));
  try {
    return operator_norm(acm::polar(ComplexMatrix(a.adjoint() * b)) - acm::polar(a).adjoint() * acm::polar(b));
  } catch (const Error& e) {
    if (e.code() == Errc::NearSingular)
      throw Error(Errc::HypothesisFailed, std::string("polar_product_check: ") + e.what());
    throw;
  }
}

struct CommutingPair {
  ComplexMatrix U;             // unitary, U^τ = U
  ComplexMatrix K;             // H₃
  double commutator = 0.0;     // ‖[U, K]‖
  double tau_defect = 0.0;     // ‖U^τ − U‖
  double reconstruction = 0.0; // ‖U(1 − K²)^{1/2} − (H₁ + iH₂)‖
  double witness_bound = 0.0;
  int perturbations = 0;       // structured perturbations applied to W
};

struct CommutingPairOptions {
  std::uint64_t seed = 7;
  double invertibility_tol = 1e-8;
  int max_retries = 5;
};

/// Commuting pair (U, K) from a symmetric or self-dual soft sphere: take the
/// trivializing witness W of the Bott matrix, read off its top blocks A, B
/// from S ≈ W'*·diag(I, −I)·W' with W' = W*, and set U = polar(A)*·polar(B),
/// K = H₃.
inline CommutingPair commuting_pair_from_sphere(const ComplexMatrix& H1, const ComplexMatrix& H2,
                                                const ComplexMatrix& H3, SymmetryClass cls,
                                                const CommutingPairOptions& opts = {}) {
  if (cls == SymmetryClass::Complex)
    throw Error(Errc::InvalidArgument, "commuting_pair_from_sphere: class must be symmetric or selfdual");
  require_same_size(H1, H2, "commuting_pair_from_sphere");
  require_same_size(H1, H3, "commuting_pair_from_sphere");
  const Eigen::Index n = H1.rows();
  SphereTriple H{hermitian_part(symmetrize(H1, cls)), hermitian_part(symmetrize(H2, cls)),
                 hermitian_part(symmetrize(H3, cls))};
  const ComplexMatrix B = bott_matrix(H.H1, H.H2, H.H3);
  const ComplexMatrix S = hermitian_part(polar(B));
  const WitnessReport w =
      cls == SymmetryClass::Symmetric ? k2_quaternion_witness(S) : k2_twisted_witness(S);

  ComplexMatrix Wp = w.W.adjoint();
  CommutingPair out;
  out.witness_bound = w.bound;
  Rng rng(opts.seed);
  auto smin_blocks = [&](const ComplexMatrix& M) {
    return std::min(smallest_singular_value(M.topLeftCorner(n, n)),
                    smallest_singular_value(M.topRightCorner(n, n)));
  };
  double smin = smin_blocks(Wp);
  double eps = 10.0 * std::max(opts.invertibility_tol - smin, opts.invertibility_tol);
  while (smin < opts.invertibility_tol) {
    if (out.perturbations >= opts.max_retries)
      throw Error(Errc::PerturbationFailed,
                  "commuting_pair_from_sphere: blocks stay singular after perturbation");
    ComplexMatrix G = random_structured_generator(2 * n, cls, rng);
    G /= operator_norm(G);
    const ComplexMatrix candidate = exp_skew_hermitian(eps * G) * Wp;
    ++out.perturbations;
    eps *= 10.0;
    const double s = smin_blocks(candidate);
    if (s > smin) {
      Wp = candidate;
      smin = s;
    }
  }

  const ComplexMatrix A = Wp.topLeftCorner(n, n);
  const ComplexMatrix Bb = Wp.topRightCorner(n, n);
  ComplexMatrix U = polar(A).adjoint() * polar(Bb);
  out.U = U;
  out.K = H.H3;
  out.commutator = operator_norm(commutator(out.U, out.K));
  const SymmetryClass inner = cls;
  out.tau_defect = operator_norm(tau(out.U, inner) - out.U);
  const ComplexMatrix root = hermitian_function(
      identity(n) - out.K * out.K, [](double x) { return std::sqrt(std::max(0.0, x)); });
  out.reconstruction = operator_norm(out.U * root - (H.H1 + I_unit * H.H2));
  return out;
}

}  // namespace acm
