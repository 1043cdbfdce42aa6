#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace acm {

using cplx = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

inline constexpr cplx I_unit{0.0, 1.0};

/// Failure categories. Two of them (NontrivialClass, GapTooSmall) are
/// mathematical obstructions rather than bad input; see is_obstruction().
enum class Errc {
  InvalidArgument,
  ParseError,
  ShapeMismatch,
  OddDimension,
  BadDimension,
  NonHermitian,
  NoConvergence,
  NearSingular,
  GapTooSmall,
  NotSkew,
  NotReal,
  TooLarge,
  ResidualTooLarge,
  NotSelfDual,
  NotSkewAfterPhi,
  NotUnitary,
  NotProjection,
  CommutatorTooLarge,
  PairingFailure,
  WrongSymmetry,
  DegenerateFailure,
  NormConditionFailed,
  NotRealSkew,
  RankDeficient,
  NontrivialClass,
  PerturbationFailed,
  HypothesisFailed,
  NotOrthonormal,
  NormTooLarge,
  NotExactRepresentation,
  NotCommuting,
  NoGap,
};

constexpr std::string_view to_string(Errc e) {
  switch (e) {
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::ParseError: return "ParseError";
    case Errc::ShapeMismatch: return "ShapeMismatch";
    case Errc::OddDimension: return "OddDimension";
    case Errc::BadDimension: return "BadDimension";
    case Errc::NonHermitian: return "NonHermitian";
    case Errc::NoConvergence: return "NoConvergence";
    case Errc::NearSingular: return "NearSingular";
    case Errc::GapTooSmall: return "GapTooSmall";
    case Errc::NotSkew: return "NotSkew";
    case Errc::NotReal: return "NotReal";
    case Errc::TooLarge: return "TooLarge";
    case Errc::ResidualTooLarge: return "ResidualTooLarge";
    case Errc::NotSelfDual: return "NotSelfDual";
    case Errc::NotSkewAfterPhi: return "NotSkewAfterPhi";
    case Errc::NotUnitary: return "NotUnitary";
    case Errc::NotProjection: return "NotProjection";
    case Errc::CommutatorTooLarge: return "CommutatorTooLarge";
    case Errc::PairingFailure: return "PairingFailure";
    case Errc::WrongSymmetry: return "WrongSymmetry";
    case Errc::DegenerateFailure: return "DegenerateFailure";
    case Errc::NormConditionFailed: return "NormConditionFailed";
    case Errc::NotRealSkew: return "NotRealSkew";
    case Errc::RankDeficient: return "RankDeficient";
    case Errc::NontrivialClass: return "NontrivialClass";
    case Errc::PerturbationFailed: return "PerturbationFailed";
    case Errc::HypothesisFailed: return "HypothesisFailed";
    case Errc::NotOrthonormal: return "NotOrthonormal";
    case Errc::NormTooLarge: return "NormTooLarge";
    case Errc::NotExactRepresentation: return "NotExactRepresentation";
    case Errc::NotCommuting: return "NotCommuting";
    case Errc::NoGap: return "NoGap";
  }
  return "Unknown";
}

constexpr bool is_obstruction(Errc e) {
  return e == Errc::NontrivialClass || e == Errc::GapTooSmall;
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

inline void require_square(const ComplexMatrix& X, std::string_view who) {
  if (X.rows() != X.cols() || X.rows() == 0)
    throw Error(Errc::ShapeMismatch, std::string(who) + ": matrix must be square and non-empty");
}

inline void require_same_size(const ComplexMatrix& A, const ComplexMatrix& B,
                              std::string_view who) {
  require_square(A, who);
  require_square(B, who);
  if (A.rows() != B.rows())
    throw Error(Errc::ShapeMismatch, std::string(who) + ": size mismatch");
}

inline ComplexMatrix identity(Eigen::Index n) { return ComplexMatrix::Identity(n, n); }

}  // namespace acm
