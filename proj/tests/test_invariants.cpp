#include <catch_amalgamated.hpp>

#include <functional>
#include <numbers>

#include "acm/invariants.hpp"
#include "acm/models.hpp"
#include "acm/random.hpp"

using namespace acm;

namespace {

ComplexMatrix direct_sum(const ComplexMatrix& A, const ComplexMatrix& B) {
  ComplexMatrix C = ComplexMatrix::Zero(A.rows() + B.rows(), A.cols() + B.cols());
  C.topLeftCorner(A.rows(), A.cols()) = A;
  C.bottomRightCorner(B.rows(), B.cols()) = B;
  return C;
}

Errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an acm::Error");
  return Errc::InvalidArgument;
}

}  // namespace

TEST_CASE("circle functions satisfy the pointwise identities", "[invariants]") {
  const CircleFunctions c = default_circle_functions();
  CHECK(c.f(0.0) == 1.0);
  CHECK(c.g(0.0) == 0.0);
  CHECK(c.h(0.0) == 0.0);
  CHECK(std::abs(c.h(std::numbers::pi / 2) - 1.0) < 1e-15);
  double worst = 0.0, worst_gh = 0.0;
  for (int k = 0; k <= 4000; ++k) {
    const double t = 2.0 * std::numbers::pi * k / 4000.0;
    worst = std::max(worst, std::abs(c.f(t) * c.f(t) + c.g(t) * c.g(t) + c.h(t) * c.h(t) - 1.0));
    worst_gh = std::max(worst_gh, std::abs(c.g(t) * c.h(t)));
  }
  CHECK(worst < 1e-15);
  CHECK(worst_gh == 0.0);
}

TEST_CASE("torus_to_sphere of U2 = I gives (I, 0, 0)", "[invariants]") {
  Rng rng(31);
  const ComplexMatrix U1 = random_unitary(5, rng);
  const SphereTriple t = torus_to_sphere(U1, identity(5));
  CHECK(operator_norm(t.H1 - identity(5)) < 1e-12);
  CHECK(operator_norm(t.H2) < 1e-12);
  CHECK(operator_norm(t.H3) < 1e-12);
  CHECK(code_of([&] { torus_to_sphere(U1, 2.0 * identity(5)); }) == Errc::NotUnitary);
}

TEST_CASE("torus_to_sphere preserves symmetry and tightens with n", "[invariants][property]") {
  double previous = 1e9;
  for (int n : {8, 16, 32}) {
    const UnitaryPair p = voiculescu(n);
    const SphereTriple t = torus_to_sphere(p.U1, p.U2);
    for (const ComplexMatrix* H : {&t.H1, &t.H2, &t.H3}) CHECK(hermitian_residual(*H) < 1e-10);
    const double delta = sphere_residual(t.H1, t.H2, t.H3).delta;
    CHECK(delta < previous);
    previous = delta;
  }
  const UnitaryPair p = voiculescu(6);
  const UnitaryPair d = selfdual_double(p.U1, p.U2);
  const SphereTriple t = torus_to_sphere(d.U1, d.U2);
  for (const ComplexMatrix* H : {&t.H1, &t.H2, &t.H3})
    CHECK(tau_residual(*H, SymmetryClass::SelfDual) < 1e-10);

  // Symmetric unitaries O·D·Oᵀ with O real orthogonal.
  Rng rng(36);
  auto symmetric_unitary = [&] {
    const RealMatrix O = random_orthogonal(8, rng);
    ComplexMatrix D = ComplexMatrix::Zero(8, 8);
    for (int k = 0; k < 8; ++k) D(k, k) = std::polar(1.0, 0.8 * k + 0.1);
    return ComplexMatrix(O.cast<cplx>() * D * O.transpose().cast<cplx>());
  };
  const ComplexMatrix V1 = symmetric_unitary(), V2 = symmetric_unitary();
  REQUIRE(tau_residual(V1, SymmetryClass::Symmetric) < 1e-12);
  const SphereTriple s = torus_to_sphere(V1, V2);
  for (const ComplexMatrix* H : {&s.H1, &s.H2, &s.H3})
    CHECK(tau_residual(*H, SymmetryClass::Symmetric) < 1e-10);
}

TEST_CASE("Bott index of the Voiculescu pair is one", "[invariants]") {
  for (int n : {4, 8, 16, 32}) {
    const UnitaryPair p = voiculescu(n);
    const IndexReport r = bott_index_unitaries(p.U1, p.U2);
    CHECK(r.value == 1);
    CHECK(r.gap > 0.0);
    CHECK(r.cls == SymmetryClass::Complex);
  }
}

TEST_CASE("transposed Voiculescu pair has Bott index minus one", "[invariants]") {
  const UnitaryPair p = voiculescu(16);
  const IndexReport r =
      bott_index_unitaries(ComplexMatrix(p.U1.transpose()), ComplexMatrix(p.U2.transpose()));
  CHECK(r.value == -1);
}

TEST_CASE("commuting unitaries have Bott index zero", "[invariants]") {
  Rng rng(32);
  const ComplexMatrix V = random_unitary(10, rng);
  ComplexMatrix D1 = ComplexMatrix::Zero(10, 10), D2 = D1;
  for (int k = 0; k < 10; ++k) {
    D1(k, k) = std::polar(1.0, 0.7 * k);
    D2(k, k) = std::polar(1.0, 1.3 * k + 0.2);
  }
  const IndexReport r = bott_index_unitaries(ComplexMatrix(V * D1 * V.adjoint()),
                                             ComplexMatrix(V * D2 * V.adjoint()));
  CHECK(r.value == 0);
}

TEST_CASE("doubled pair: Pf-Bott is -1 while Bott is 0", "[invariants]") {
  for (int n : {4, 8, 16}) {
    const UnitaryPair p = voiculescu(n);
    const UnitaryPair d = selfdual_double(p.U1, p.U2);
    CHECK(pf_bott_unitaries(d.U1, d.U2).value == -1);
    CHECK(bott_index_unitaries(d.U1, d.U2).value == 0);
  }
}

TEST_CASE("Pf-Bott of a commuting self-dual triple is +1", "[invariants]") {
  for (std::uint64_t seed : {1, 2, 3}) {
    const SphereTriple t = commuting_triple(6, SymmetryClass::SelfDual, 0.0, seed);
    const IndexReport r = pf_bott_index(t.H1, t.H2, t.H3);
    CHECK(r.value == 1);
    CHECK(r.cls == SymmetryClass::SelfDual);
    CHECK(bott_index(t.H1, t.H2, t.H3).value == 0);
  }
}

TEST_CASE("Bott index is invariant under unitary conjugation", "[invariants][property]") {
  const UnitaryPair p = voiculescu(12);
  const SphereTriple t = torus_to_sphere(p.U1, p.U2);
  IndexOptions opts;
  opts.max_residual = std::numeric_limits<double>::infinity();
  const int base = bott_index(t.H1, t.H2, t.H3, opts).value;
  Rng rng(33);
  for (int k = 0; k < 5; ++k) {
    const ComplexMatrix V = random_unitary(12, rng);
    auto c = [&](const ComplexMatrix& H) { return ComplexMatrix(V * H * V.adjoint()); };
    CHECK(bott_index(c(t.H1), c(t.H2), c(t.H3), opts).value == base);
  }
  // Orientation reversal flips the sign.
  CHECK(bott_index(t.H1, ComplexMatrix(-t.H2), t.H3, opts).value == -base);
}

TEST_CASE("Pf-Bott is invariant under symplectic conjugation", "[invariants][property]") {
  const UnitaryPair p = voiculescu(6);
  const UnitaryPair d = selfdual_double(p.U1, p.U2);
  const SphereTriple t = torus_to_sphere(d.U1, d.U2);
  IndexOptions opts;
  opts.max_residual = std::numeric_limits<double>::infinity();
  const int base = pf_bott_index(t.H1, t.H2, t.H3, opts).value;
  CHECK(base == -1);
  Rng rng(34);
  for (int k = 0; k < 5; ++k) {
    const ComplexMatrix V = exp_skew_hermitian(random_structured_generator(12, SymmetryClass::Symmetric, rng));
    auto c = [&](const ComplexMatrix& H) {
      return ComplexMatrix(hermitian_part(symmetrize(ComplexMatrix(V * H * V.adjoint()), SymmetryClass::SelfDual)));
    };
    CHECK(pf_bott_index(c(t.H1), c(t.H2), c(t.H3), opts).value == base);
  }
}

TEST_CASE("indices are additive over direct sums", "[invariants][property]") {
  const UnitaryPair a = voiculescu(8), b = voiculescu(8);
  const ComplexMatrix U1 = direct_sum(a.U1, a.U1), U2 = direct_sum(a.U2, b.U2);
  CHECK(bott_index_unitaries(U1, U2).value == 2);
  const ComplexMatrix V1 = direct_sum(a.U1, ComplexMatrix(b.U1.transpose()));
  const ComplexMatrix V2 = direct_sum(a.U2, ComplexMatrix(b.U2.transpose()));
  CHECK(bott_index_unitaries(V1, V2).value == 0);
  // Pf-Bott multiplies: the doubling of a Bott 1 pair is −1, so two copies give +1.
  const UnitaryPair d = selfdual_double(a.U1, a.U2);
  const ComplexMatrix W1 = direct_sum(d.U1, d.U1), W2 = direct_sum(d.U2, d.U2);
  // A direct sum of two self-dual blocks is self-dual after reordering to the global Z.
  const Eigen::Index m = d.U1.rows() / 2;
  Eigen::VectorXi perm(4 * m);
  for (Eigen::Index k = 0; k < m; ++k) {
    perm(k) = static_cast<int>(k);
    perm(m + k) = static_cast<int>(2 * m + k);
    perm(2 * m + k) = static_cast<int>(m + k);
    perm(3 * m + k) = static_cast<int>(3 * m + k);
  }
  Eigen::PermutationMatrix<Eigen::Dynamic> Pm(perm);
  const ComplexMatrix R1 = Pm.transpose() * W1 * Pm, R2 = Pm.transpose() * W2 * Pm;
  CHECK(tau_residual(R1, SymmetryClass::SelfDual) < 1e-12);
  CHECK(pf_bott_unitaries(R1, R2).value == 1);
}

TEST_CASE("index gates", "[invariants]") {
  Rng rng(35);
  const ComplexMatrix H = random_hermitian(4, rng);
  CHECK(code_of([&] { bott_index(H, H, H); }) == Errc::ResidualTooLarge);
  const SphereTriple t = commuting_triple(4, SymmetryClass::Complex, 0.0, 4);
  CHECK(code_of([&] { pf_bott_index(t.H1, t.H2, t.H3); }) == Errc::NotSelfDual);
  CHECK(code_of([&] { bott_index_unitaries(1.5 * identity(4), identity(4)); }) == Errc::NotUnitary);
  const UnitaryPair p = voiculescu(4);
  CHECK(code_of([&] { pf_bott_unitaries(p.U1, p.U2); }) == Errc::NotSelfDual);
  CHECK(code_of([&] { pf_bott_index(identity(3), identity(3), identity(3)); }) == Errc::OddDimension);
}

TEST_CASE("structured isometries span the projection", "[invariants]") {
  LatticeSpec spec;
  spec.L = 6;
  spec.flux = 1.0 / 3.0;
  spec.fermi_level = -1.5;
  const HarperModel m = harper_projection(spec);
  const ComplexMatrix W = structured_isometry(m.P, m.rank, SymmetryClass::Complex, 5);
  CHECK(operator_norm(W.adjoint() * W - identity(m.rank)) < 1e-10);
  CHECK(operator_norm(W * W.adjoint() - m.P) < 1e-10);

  spec.orbitals = 2;
  const HarperModel d = harper_projection(spec);
  const ComplexMatrix Ws = structured_isometry(d.P, d.rank, SymmetryClass::SelfDual, 5);
  CHECK(operator_norm(Ws * Ws.adjoint() - d.P) < 1e-10);
  const Eigen::Index N = d.P.rows() / 2, k = d.rank / 2;
  CHECK(operator_norm(Ws.adjoint() + symplectic_form(k) * Ws.transpose() * symplectic_form(N)) < 1e-10);

  CHECK(code_of([&] { structured_isometry(m.P, m.rank, SymmetryClass::Symmetric, 5); }) == Errc::PairingFailure);
}

TEST_CASE("compressed index with P = I matches the uncompressed index", "[invariants]") {
  LatticeSpec spec;
  spec.L = 6;
  const PositionSet X = torus_positions(spec);
  const ComplexMatrix P = identity(X.X1.rows());
  const IndexReport r = compressed_index(P, X.X1, X.X2, X.X3, X.X4, SymmetryClass::Complex);
  const IndexReport u = bott_index_unitaries(X.X1 + I_unit * X.X2, X.X3 + I_unit * X.X4);
  CHECK(r.value == u.value);
  CHECK(r.value == 0);
  CHECK(r.rank == P.rows());
}

TEST_CASE("compressed index of the empty projection is trivial", "[invariants]") {
  LatticeSpec spec;
  spec.L = 4;
  const PositionSet X = torus_positions(spec);
  const ComplexMatrix P = ComplexMatrix::Zero(16, 16);
  CHECK(compressed_index(P, X.X1, X.X2, X.X3, X.X4, SymmetryClass::Complex).value == 0);
  CHECK(compressed_index(P, X.X1, X.X2, X.X3, X.X4, SymmetryClass::SelfDual).value == 1);
}

TEST_CASE("compressed index input gates", "[invariants]") {
  LatticeSpec spec;
  spec.L = 6;
  spec.flux = 1.0 / 3.0;
  spec.fermi_level = -1.5;
  const HarperModel m = harper_projection(spec);
  const PositionSet X = torus_positions(spec);
  CHECK(code_of([&] { compressed_index(m.P, X.X1, X.X2, X.X3, X.X4, SymmetryClass::Complex); }) ==
        Errc::CommutatorTooLarge);
  CHECK(code_of([&] { compressed_index(ComplexMatrix(2.0 * m.P), X.X1, X.X2, X.X3, X.X4, SymmetryClass::Complex); }) ==
        Errc::NotProjection);
  CompressedIndexOptions opts;
  opts.commutator_limit = 0.9;
  CHECK(code_of([&] { compressed_index(m.P, X.X1, X.X1, X.X3, X.X4, SymmetryClass::Complex, opts); }) ==
        Errc::NotExactRepresentation);
}

TEST_CASE("Harper index is stable in L and independent of the isometry", "[invariants][property]") {
  CompressedIndexOptions opts;
  opts.commutator_limit = 0.5;
  std::vector<int> values;
  for (int L : {12, 15, 18}) {
    LatticeSpec spec;
    spec.L = L;
    spec.flux = 1.0 / 3.0;
    spec.fermi_level = -1.5;
    const HarperModel m = harper_projection(spec);
    const PositionSet X = torus_positions(spec);
    opts.seed = 1;
    const IndexReport a = compressed_index(m.P, X.X1, X.X2, X.X3, X.X4, SymmetryClass::Complex, opts);
    opts.seed = 2;
    const IndexReport b = compressed_index(m.P, X.X1, X.X2, X.X3, X.X4, SymmetryClass::Complex, opts);
    CHECK(a.value == b.value);
    CHECK(a.gap > 1e-3);
    values.push_back(a.value);
  }
  CHECK(values[0] != 0);
  CHECK(values[0] == values[1]);
  CHECK(values[1] == values[2]);
}
