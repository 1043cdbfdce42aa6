#include <catch_amalgamated.hpp>

#include <numbers>

#include "acm/models.hpp"
#include "acm/relations.hpp"

using namespace acm;
using Catch::Matchers::WithinAbs;

TEST_CASE("sphere residual of an exact commuting triple vanishes", "[relations]") {
  const SphereTriple t = commuting_triple(6, SymmetryClass::Symmetric, 0.0, 3);
  const RelationReport r = sphere_residual(t.H1, t.H2, t.H3);
  CHECK(r.delta < 1e-13);
  CHECK(r.per_term.size() == 7);
}

TEST_CASE("sphere residual terms are the named norms", "[relations]") {
  ComplexMatrix H1 = ComplexMatrix::Zero(2, 2), H2 = H1, H3 = H1;
  H1(0, 1) = H1(1, 0) = 1.0;   // σ₁
  H3(0, 0) = 1.0;
  H3(1, 1) = -1.0;              // σ₃
  const RelationReport r = sphere_residual(H1, H2, H3);
  // ‖[σ₁, σ₃]‖ = ‖2σ₂‖ = 2, and σ₁² + σ₃² − I = I.
  CHECK_THAT(r.term("commutator13"), WithinAbs(2.0, 1e-14));
  CHECK_THAT(r.term("sphere"), WithinAbs(1.0, 1e-14));
  CHECK(r.term("hermitian2") == 0.0);
  CHECK(r.worst_term == "commutator13");
  CHECK_THAT(r.delta, WithinAbs(2.0, 1e-14));
  CHECK_THROWS_AS(r.term("missing"), Error);
}

TEST_CASE("torus and disk residuals", "[relations]") {
  const UnitaryPair p = voiculescu(8);
  const RelationReport t = torus2_residual(p.U1, p.U2);
  CHECK(t.term("unitary1") < 1e-14);
  CHECK(t.term("unitary2") < 1e-14);
  CHECK_THAT(t.term("commutator12"), WithinAbs(std::abs(std::polar(1.0, 2 * std::numbers::pi / 8) - 1.0), 1e-12));

  ComplexMatrix X = ComplexMatrix::Zero(2, 2);
  X(0, 0) = 1.5;
  const RelationReport d = disk_residual(X, ComplexMatrix::Zero(2, 2));
  CHECK_THAT(d.term("contraction1"), WithinAbs(0.5, 1e-14));
  CHECK(d.term("contraction2") == 0.0);
  CHECK_THROWS_AS(torus2_residual(p.U1, ComplexMatrix::Identity(3, 3)), Error);
}

TEST_CASE("Voiculescu pair for n = 2", "[models]") {
  const UnitaryPair p = voiculescu(2);
  ComplexMatrix A(2, 2), B(2, 2);
  A << 0, 1, 1, 0;
  B << -1, 0, 0, 1;
  CHECK((p.U1 - A).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((p.U2 - B).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("Voiculescu pair is unitary and its commutator is |1 - w|", "[models]") {
  for (int n : {3, 4, 10, 33}) {
    const UnitaryPair p = voiculescu(n);
    CHECK((p.U1 * p.U1.transpose() - identity(n)).cwiseAbs().maxCoeff() == 0.0);
    CHECK(unitarity_residual(p.U2) < 1e-14);
    const double expected = 2.0 * std::sin(std::numbers::pi / n);
    CHECK_THAT(operator_norm(commutator(p.U1, p.U2)), WithinAbs(expected, 1e-12));
  }
  CHECK_THAT(operator_norm(commutator(voiculescu(4).U1, voiculescu(4).U2)), WithinAbs(std::sqrt(2.0), 1e-14));
  CHECK_THROWS_AS(voiculescu(1), Error);
}

TEST_CASE("self-dual doubling", "[models]") {
  const UnitaryPair p = voiculescu(6);
  const UnitaryPair d = selfdual_double(p.U1, p.U2);
  CHECK(tau_residual(d.U1, SymmetryClass::SelfDual) <= 1e-12);
  CHECK(tau_residual(d.U2, SymmetryClass::SelfDual) <= 1e-12);
  CHECK(unitarity_residual(d.U1) < 1e-14);
  ComplexMatrix C = ComplexMatrix::Zero(3, 3);
  C.diagonal() << 1.0, I_unit, -1.0;
  const UnitaryPair dc = selfdual_double(C, C);
  CHECK(operator_norm(commutator(dc.U1, dc.U2)) == 0.0);
  CHECK_THROWS_AS(selfdual_double(C, identity(2)), Error);
}

TEST_CASE("torus positions", "[models]") {
  LatticeSpec spec;
  spec.L = 2;
  const PositionSet X = torus_positions(spec);
  // Sites (x, y) in order (0,0), (1,0), (0,1), (1,1).
  RealVector c1(4), c3(4);
  c1 << 1, -1, 1, -1;
  c3 << 1, 1, -1, -1;
  CHECK((X.X1.diagonal().real() - c1).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((X.X3.diagonal().real() - c3).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(X.X2.cwiseAbs().maxCoeff() < 1e-15);
  for (int L : {3, 7, 12}) {
    spec.L = L;
    const PositionSet Y = torus_positions(spec);
    CHECK(torus4_residual(Y.X1, Y.X2, Y.X3, Y.X4).delta <= 1e-15);
  }
  spec.L = 4;
  spec.orbitals = 2;
  const PositionSet D = torus_positions(spec);
  CHECK(D.X1.rows() == 32);
  CHECK(tau_residual(D.X2, SymmetryClass::SelfDual) == 0.0);
}

TEST_CASE("lattice spec validation", "[models]") {
  LatticeSpec spec;
  spec.L = 1;
  CHECK_THROWS_AS(spec.validate(), Error);
  spec.L = 4;
  spec.flux = 1.0;
  CHECK_THROWS_AS(spec.validate(), Error);
  spec.flux = 0.0;
  spec.orbitals = 3;
  CHECK_THROWS_AS(spec.validate(), Error);
}

TEST_CASE("Harper projection is an orthogonal projection", "[models]") {
  LatticeSpec spec;
  spec.L = 9;
  spec.flux = 1.0 / 3.0;
  spec.fermi_level = -1.5;
  const HarperModel m = harper_projection(spec);
  CHECK((m.P * m.P - m.P).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK((m.P - m.P.adjoint()).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(hermitian_residual(m.H) == 0.0);
  CHECK(m.rank == 27);
  CHECK(m.spectral_gap > 0.1);
}

TEST_CASE("doubled Harper projection is self-dual", "[models]") {
  LatticeSpec spec;
  spec.L = 6;
  spec.flux = 1.0 / 3.0;
  spec.fermi_level = -1.5;
  spec.orbitals = 2;
  const HarperModel m = harper_projection(spec);
  CHECK(tau_residual(m.P, SymmetryClass::SelfDual) < 1e-12);
  CHECK(tau_residual(m.H, SymmetryClass::SelfDual) < 1e-12);
  CHECK(m.rank % 2 == 0);
}

TEST_CASE("Fermi level on the spectrum is rejected", "[models]") {
  LatticeSpec spec;
  spec.L = 4;
  spec.fermi_level = 0.0;  // flux 0, L = 4 has eigenvalue 0
  try {
    harper_projection(spec);
    FAIL("expected NoGap");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NoGap);
  }
}

TEST_CASE("Harper commutator norms shrink as L grows", "[models][property]") {
  double previous = 1e9;
  for (int L : {6, 12, 18}) {
    LatticeSpec spec;
    spec.L = L;
    spec.flux = 1.0 / 3.0;
    spec.fermi_level = -1.5;
    const double delta = harper_projection(spec).commutator_delta;
    CHECK(delta < previous);
    previous = delta;
  }
}

TEST_CASE("commuting triples lie in their class", "[models]") {
  for (auto cls : {SymmetryClass::Symmetric, SymmetryClass::SelfDual, SymmetryClass::Complex}) {
    const SphereTriple t = commuting_triple(5, cls, 1e-3, 9);
    for (const ComplexMatrix* H : {&t.H1, &t.H2, &t.H3}) {
      CHECK(hermitian_residual(*H) < 1e-14);
      CHECK(tau_residual(*H, cls) < 1e-13);
    }
    CHECK(sphere_residual(t.H1, t.H2, t.H3).delta < 1e-2);
  }
}
