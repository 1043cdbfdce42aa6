#include <catch_amalgamated.hpp>

#include "acm/matkernel.hpp"
#include "acm/oracles.hpp"
#include "acm/random.hpp"

using namespace acm;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("operator norm of diagonal and rank-one matrices", "[matkernel]") {
  ComplexMatrix D = ComplexMatrix::Zero(3, 3);
  D.diagonal() << 1.0, cplx(0, -3.0), 2.0;
  CHECK_THAT(operator_norm(D), WithinAbs(3.0, 1e-14));
  ComplexVector u(3), v(3);
  u << 1.0, 2.0, 2.0;
  v << 0.0, 3.0, 4.0;
  CHECK_THAT(operator_norm(ComplexMatrix(u * v.adjoint())), WithinAbs(15.0, 1e-12));
}

TEST_CASE("herm_eig reconstructs and rejects non-Hermitian input", "[matkernel]") {
  Rng rng(11);
  for (int n : {1, 2, 7, 20}) {
    const ComplexMatrix H = random_hermitian(n, rng);
    const EigDecomposition e = herm_eig(H);
    CHECK(operator_norm(H - reconstruct(e)) < 1e-12 * std::max(1.0, operator_norm(H)));
    CHECK(unitarity_residual(e.vectors) < 1e-12);
    for (Eigen::Index i = 1; i < e.eigenvalues.size(); ++i) CHECK(e.eigenvalues(i) >= e.eigenvalues(i - 1));
  }
  ComplexMatrix A = random_hermitian(4, rng);
  A(0, 1) += 0.1;
  CHECK_THROWS_AS(herm_eig(A), Error);
  try {
    herm_eig(A);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NonHermitian);
  }
}

TEST_CASE("polar agrees with the Newton iteration oracle", "[matkernel]") {
  Rng rng(12);
  for (int k = 0; k < 20; ++k) {
    const ComplexMatrix A = gaussian_complex(9, 9, rng) + 3.0 * identity(9);
    const ComplexMatrix U = polar(A);
    CHECK(unitarity_residual(U) < 1e-12);
    CHECK(operator_norm(U - oracle::newton_polar(A)) < 1e-10);
    // A = U |A| with |A| positive.
    const ComplexMatrix absA = U.adjoint() * A;
    CHECK(hermitian_residual(absA) < 1e-10);
    CHECK(herm_eig(hermitian_part(absA)).eigenvalues.minCoeff() > 0);
  }
}

TEST_CASE("polar of a singular matrix is rejected", "[matkernel]") {
  ComplexMatrix A = identity(3);
  A(2, 2) = 0.0;
  try {
    polar(A);
    FAIL("expected NearSingular");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NearSingular);
  }
}

TEST_CASE("signature counts eigenvalue signs", "[matkernel]") {
  ComplexMatrix D = ComplexMatrix::Zero(4, 4);
  D.diagonal() << 1.0, 2.0, 3.0, -1.0;
  CHECK(signature(D) == 1);
  D(3, 3) = 1e-9;
  try {
    signature(D);
    FAIL("expected GapTooSmall");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::GapTooSmall);
  }
  ComplexMatrix odd = ComplexMatrix::Identity(3, 3);
  CHECK_THROWS_AS(signature(odd), Error);
}

TEST_CASE("signature is invariant under unitary conjugation", "[matkernel][property]") {
  Rng rng(13);
  for (int k = 0; k < 20; ++k) {
    ComplexMatrix D = ComplexMatrix::Zero(8, 8);
    int expected = 0;
    for (int i = 0; i < 8; ++i) {
      const double s = (rng() % 2 == 0) ? 1.0 : -1.0;
      D(i, i) = s * (0.5 + static_cast<double>(i));
      expected += static_cast<int>(s);
    }
    const ComplexMatrix V = random_unitary(8, rng);
    CHECK(signature(ComplexMatrix(V * D * V.adjoint())) == expected / 2);
  }
}

TEST_CASE("Pfaffian of small hand-computed matrices", "[matkernel]") {
  ComplexMatrix A = ComplexMatrix::Zero(2, 2);
  A(0, 1) = 3.0;
  A(1, 0) = -3.0;
  CHECK_THAT(pfaffian_real_skew(A), WithinAbs(3.0, 1e-15));
  // Pf of a 4×4 is a12·a34 − a13·a24 + a14·a23.
  RealMatrix B = RealMatrix::Zero(4, 4);
  B(0, 1) = 1; B(0, 2) = 2; B(0, 3) = 3; B(1, 2) = 4; B(1, 3) = 5; B(2, 3) = 6;
  B -= RealMatrix(B.transpose());
  CHECK_THAT(pfaffian_real_skew(B.cast<cplx>()), WithinAbs(1 * 6 - 2 * 5 + 3 * 4, 1e-12));
  CHECK(pfaffian_combinatorial(B.cast<cplx>()).real() == 8.0);
}

TEST_CASE("Pfaffian squared equals the determinant", "[matkernel][property]") {
  Rng rng(14);
  for (int n : {2, 4, 6, 8, 10}) {
    const RealMatrix R = random_real_skew(n, rng);
    const double pf = pfaffian_real_skew(R.cast<cplx>());
    CHECK_THAT(pf * pf, WithinRel(R.determinant(), 1e-9));
  }
}

TEST_CASE("Pf(B A Bᵀ) = det(B) Pf(A)", "[matkernel][property]") {
  Rng rng(15);
  for (int n : {4, 8, 12}) {
    const RealMatrix A = random_real_skew(n, rng);
    const RealMatrix B = gaussian_real(n, n, rng);
    const RealMatrix C = B * A * B.transpose();
    CHECK_THAT(pfaffian_real_skew(C.cast<cplx>(), 1e-8),
               WithinRel(B.determinant() * pfaffian_real_skew(A.cast<cplx>()), 1e-8));
  }
}

TEST_CASE("Pfaffian log form survives huge products", "[matkernel]") {
  const Eigen::Index n = 400;
  RealMatrix A = RealMatrix::Zero(n, n);
  for (Eigen::Index k = 0; k < n; k += 2) {
    A(k, k + 1) = 1e10;
    A(k + 1, k) = -1e10;
  }
  const PfaffianLog pf = pfaffian_real_skew_log(A.cast<cplx>());
  CHECK(pf.sign == 1);
  CHECK_THAT(pf.log_abs, WithinRel(200 * std::log(1e10), 1e-12));
}

TEST_CASE("Pfaffian input validation", "[matkernel]") {
  ComplexMatrix odd = ComplexMatrix::Zero(3, 3);
  CHECK_THROWS_AS(pfaffian_real_skew(odd), Error);
  ComplexMatrix sym = ComplexMatrix::Identity(2, 2);
  try {
    pfaffian_real_skew(sym);
    FAIL("expected NotSkew");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NotSkew);
  }
  ComplexMatrix cplx_skew = ComplexMatrix::Zero(2, 2);
  cplx_skew(0, 1) = I_unit;
  cplx_skew(1, 0) = -I_unit;
  try {
    pfaffian_real_skew(cplx_skew);
    FAIL("expected NotReal");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NotReal);
  }
  try {
    pfaffian_combinatorial(ComplexMatrix::Zero(14, 14));
    FAIL("expected TooLarge");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::TooLarge);
  }
}

TEST_CASE("empty and non-square inputs are shape errors", "[matkernel]") {
  CHECK_THROWS_AS(herm_eig(ComplexMatrix(0, 0)), Error);
  CHECK_THROWS_AS(acm::polar(ComplexMatrix(ComplexMatrix::Zero(2, 3))), Error);
}
