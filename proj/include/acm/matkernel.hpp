#pragma once

// Dense complex kernels shared by every other module: Hermitian
// eigendecomposition, operator norm, polar part, signature, Pfaffians.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/SVD>

#include "acm/types.hpp"

namespace acm {

struct EigDecomposition {
  RealVector eigenvalues;  // ascending
  ComplexMatrix vectors;   // columns are eigenvectors
};

/// Largest singular value.
template <typename Derived>
double operator_norm(const Eigen::MatrixBase<Derived>& expr) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> X = expr;
  if (X.size() == 0) return 0.0;
  if (X.rows() == 1 || X.cols() == 1) return X.norm();
  Eigen::BDCSVD<Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>> svd(X);
  return svd.singularValues()(0);
}

/// Operator norm bounded through the Frobenius norm first. Returns the
/// exact value only when the cheap bound exceeds `threshold`.
inline double norm_bounded(const ComplexMatrix& X, double threshold) {
  const double fro = X.norm();
  if (fro <= threshold) return fro;
  return operator_norm(X);
}

inline ComplexMatrix commutator(const ComplexMatrix& A, const ComplexMatrix& B) {
  return A * B - B * A;
}

inline ComplexMatrix anticommutator(const ComplexMatrix& A, const ComplexMatrix& B) {
  return A * B + B * A;
}

inline ComplexMatrix hermitian_part(const ComplexMatrix& X) {
  return 0.5 * (X + X.adjoint());
}

/// ‖X − X*‖.
inline double hermitian_residual(const ComplexMatrix& X) {
  return operator_norm(X - X.adjoint());
}

/// ‖X*X − I‖.
inline double unitarity_residual(const ComplexMatrix& X) {
  return operator_norm(X.adjoint() * X - identity(X.rows()));
}

/// Hermitian eigendecomposition. The input is symmetrized as (H+H*)/2 after
/// checking ‖H − H*‖ ≤ tol·max(1,‖H‖).
inline EigDecomposition herm_eig(const ComplexMatrix& H, double tol = 1e-9) {
  require_square(H, "herm_eig");
  const ComplexMatrix Hs = hermitian_part(H);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(Hs);
  if (es.info() != Eigen::Success)
    throw Error(Errc::NoConvergence, "herm_eig: eigensolver did not converge");
  const RealVector& ev = es.eigenvalues();
  const double scale = std::max(1.0, std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1))));
  const double asym = norm_bounded(H - H.adjoint(), tol * scale);
  if (asym > tol * scale)
    throw Error(Errc::NonHermitian,
                "herm_eig: ||H - H*|| = " + std::to_string(asym) + " exceeds tolerance");
  return {ev, es.eigenvectors()};
}

inline ComplexMatrix reconstruct(const EigDecomposition& e) {
  return e.vectors * e.eigenvalues.cast<cplx>().asDiagonal() * e.vectors.adjoint();
}

/// f(H) by the spectral theorem, f applied to each eigenvalue.
inline ComplexMatrix spectral_apply(const EigDecomposition& e,
                                    const std::function<double(double)>& f) {
  RealVector fv(e.eigenvalues.size());
  for (Eigen::Index i = 0; i < fv.size(); ++i) fv(i) = f(e.eigenvalues(i));
  return e.vectors * fv.cast<cplx>().asDiagonal() * e.vectors.adjoint();
}

inline ComplexMatrix hermitian_function(const ComplexMatrix& H,
                                        const std::function<double(double)>& f,
                                        double tol = 1e-9) {
  return spectral_apply(herm_eig(H, tol), f);
}

/// Unitary factor of the polar decomposition, X (X*X)^{-1/2}, via SVD.
inline ComplexMatrix polar(const ComplexMatrix& X, double sigma_min_tol = 1e-10) {
  require_square(X, "polar");
  Eigen::BDCSVD<ComplexMatrix> svd(X, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double smin = s(s.size() - 1);
  if (!(smin >= sigma_min_tol))
    throw Error(Errc::NearSingular,
                "polar: smallest singular value " + std::to_string(smin) + " below tolerance");
  return svd.matrixU() * svd.matrixV().adjoint();
}

inline double smallest_singular_value(const ComplexMatrix& X) {
  if (X.size() == 0) return 0.0;
  Eigen::BDCSVD<ComplexMatrix> svd(X);
  const auto& s = svd.singularValues();
  return s(s.size() - 1);
}

/// Signature data read from a sorted spectrum.
struct SpectralSignature {
  int value = 0;      // (n+ − n−)/2
  double gap = 0.0;   // min |eigenvalue|
  int positive = 0;
  int negative = 0;
};

inline SpectralSignature signature_of_spectrum(const RealVector& ev, double gap_tol) {
  SpectralSignature out;
  out.gap = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    out.gap = std::min(out.gap, std::abs(ev(i)));
    if (ev(i) > 0) ++out.positive;
    if (ev(i) < 0) ++out.negative;
  }
  if (out.gap < gap_tol)
    throw Error(Errc::GapTooSmall, "smallest |eigenvalue| " + std::to_string(out.gap) +
                                       " is below gap tolerance " + std::to_string(gap_tol));
  const int diff = out.positive - out.negative;
  if (diff % 2 != 0)
    throw Error(Errc::GapTooSmall, "odd spectral asymmetry; signature undefined");
  out.value = diff / 2;
  return out;
}

/// Half of (number of positive eigenvalues − number of negative eigenvalues).
inline int signature(const ComplexMatrix& H, double gap_tol = 1e-6) {
  return signature_of_spectrum(herm_eig(H).eigenvalues, gap_tol).value;
}

/// Pfaffian of a real skew matrix held as sign and log-magnitude so large
/// products neither overflow nor underflow. sign == 0 means Pf = 0.
struct PfaffianLog {
  int sign = 1;
  double log_abs = 0.0;

  double value() const { return sign == 0 ? 0.0 : sign * std::exp(log_abs); }
};

/// Skew LTLᵀ (Parlett–Reid) reduction with partial pivoting. No input checks.
inline PfaffianLog pfaffian_ltl(RealMatrix A) {
  const Eigen::Index n = A.rows();
  PfaffianLog pf;
  if (n % 2 == 1) return {0, 0.0};
  for (Eigen::Index k = 0; k + 1 < n; k += 2) {
    Eigen::Index offset = 0;
    A.col(k).tail(n - k - 1).cwiseAbs().maxCoeff(&offset);
    const Eigen::Index kp = k + 1 + offset;
    if (kp != k + 1) {
      A.row(k + 1).tail(n - k).swap(A.row(kp).tail(n - k));
      A.col(k + 1).tail(n - k).swap(A.col(kp).tail(n - k));
      pf.sign = -pf.sign;
    }
    const double pivot = A(k, k + 1);
    if (pivot == 0.0) return {0, 0.0};
    if (pivot < 0) pf.sign = -pf.sign;
    pf.log_abs += std::log(std::abs(pivot));
    if (k + 2 < n) {
      const Eigen::Index m = n - k - 2;
      const RealVector tau = A.row(k).tail(m).transpose() / pivot;
      const RealVector col = A.col(k + 1).tail(m);
      A.bottomRightCorner(m, m) += tau * col.transpose() - col * tau.transpose();
    }
  }
  return pf;
}

namespace detail {

inline void require_real_skew(const ComplexMatrix& R, double tol, std::string_view who) {
  require_square(R, who);
  if (R.rows() % 2 != 0)
    throw Error(Errc::OddDimension, std::string(who) + ": odd dimension");
  const double scale = std::max(1.0, R.cwiseAbs().maxCoeff());
  if (R.imag().cwiseAbs().maxCoeff() > tol * scale)
    throw Error(Errc::NotReal, std::string(who) + ": entries are not real");
  if ((R + R.transpose()).cwiseAbs().maxCoeff() > tol * scale)
    throw Error(Errc::NotSkew, std::string(who) + ": matrix is not skew-symmetric");
}

}  // namespace detail

inline PfaffianLog pfaffian_real_skew_log(const ComplexMatrix& R, double tol = 1e-9) {
  detail::require_real_skew(R, tol, "pfaffian_real_skew");
  const RealMatrix A = 0.5 * (R.real() - R.real().transpose());
  return pfaffian_ltl(A);
}

/// Pfaffian of a real skew-symmetric matrix stored as complex.
inline double pfaffian_real_skew(const ComplexMatrix& R, double tol = 1e-9) {
  return pfaffian_real_skew_log(R, tol).value();
}

namespace detail {

inline cplx pfaffian_expand(const ComplexMatrix& A, std::vector<Eigen::Index>& idx) {
  if (idx.empty()) return 1.0;
  const Eigen::Index first = idx.front();
  cplx total = 0.0;
  for (std::size_t j = 1; j < idx.size(); ++j) {
    const cplx a = A(first, idx[j]);
    if (a == cplx(0.0)) continue;
    std::vector<Eigen::Index> rest;
    rest.reserve(idx.size() - 2);
    for (std::size_t k = 1; k < idx.size(); ++k)
      if (k != j) rest.push_back(idx[k]);
    const double sign = (j % 2 == 1) ? 1.0 : -1.0;
    total += sign * a * pfaffian_expand(A, rest);
  }
  return total;
}

}  // namespace detail

/// Exact Pfaffian as the signed sum over perfect matchings (expansion along
/// the first row). Testing oracle, limited to size 12.
inline cplx pfaffian_combinatorial(const ComplexMatrix& R, double tol = 1e-9) {
  require_square(R, "pfaffian_combinatorial");
  if (R.rows() > 12) throw Error(Errc::TooLarge, "pfaffian_combinatorial: size exceeds 12");
  if (R.rows() % 2 != 0) throw Error(Errc::OddDimension, "pfaffian_combinatorial: odd size");
  const double scale = std::max(1.0, R.cwiseAbs().maxCoeff());
  if ((R + R.transpose()).cwiseAbs().maxCoeff() > tol * scale)
    throw Error(Errc::NotSkew, "pfaffian_combinatorial: matrix is not skew-symmetric");
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(R.rows()));
  for (Eigen::Index i = 0; i < R.rows(); ++i) idx[static_cast<std::size_t>(i)] = i;
  return detail::pfaffian_expand(R, idx);
}

inline void require_finite(const ComplexMatrix& X, std::string_view who) {
  if (!X.allFinite()) throw Error(Errc::InvalidArgument, std::string(who) + ": non-finite entries");
}

}  // namespace acm
