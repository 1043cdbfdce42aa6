#pragma once

// Residual evaluators for the soft relation sets. Each report carries every
// labeled term; `delta` is their maximum, i.e. the smallest δ for which the
// tuple is a representation.

#include <string>
#include <utility>
#include <vector>

#include "acm/matkernel.hpp"

namespace acm {

enum class Relation { Sphere, Torus2, Torus4, Disk };

constexpr std::string_view to_string(Relation r) {
  switch (r) {
    case Relation::Sphere: return "sphere";
    case Relation::Torus2: return "torus2";
    case Relation::Torus4: return "torus4";
    case Relation::Disk: return "disk";
  }
  return "sphere";
}

struct RelationReport {
  Relation relation = Relation::Sphere;
  double delta = 0.0;
  std::string worst_term;
  std::vector<std::pair<std::string, double>> per_term;

  double term(std::string_view label) const {
    for (const auto& [l, v] : per_term)
      if (l == label) return v;
    throw Error(Errc::InvalidArgument, "no relation term '" + std::string(label) + "'");
  }
};

namespace detail {

class ReportBuilder {
 public:
  explicit ReportBuilder(Relation r) { report_.relation = r; }

  void add(std::string label, double value) {
    if (report_.per_term.empty() || value > report_.delta) {
      report_.delta = value;
      report_.worst_term = label;
    }
    report_.per_term.emplace_back(std::move(label), value);
  }

  RelationReport finish() && { return std::move(report_); }

 private:
  RelationReport report_;
};

inline void require_tuple(const std::vector<const ComplexMatrix*>& xs, std::string_view who) {
  for (const auto* x : xs) require_same_size(*xs.front(), *x, who);
}

inline void add_hermitian_terms(ReportBuilder& b, const std::vector<const ComplexMatrix*>& xs) {
  for (std::size_t r = 0; r < xs.size(); ++r)
    b.add("hermitian" + std::to_string(r + 1), hermitian_residual(*xs[r]));
}

inline void add_commutator_terms(ReportBuilder& b, const std::vector<const ComplexMatrix*>& xs) {
  for (std::size_t r = 0; r < xs.size(); ++r)
    for (std::size_t s = r + 1; s < xs.size(); ++s)
      b.add("commutator" + std::to_string(r + 1) + std::to_string(s + 1),
            operator_norm(commutator(*xs[r], *xs[s])));
}

}  // namespace detail

/// S_δ: Hermitian, pairwise commutators, ‖H₁² + H₂² + H₃² − I‖.
inline RelationReport sphere_residual(const ComplexMatrix& H1, const ComplexMatrix& H2,
                                      const ComplexMatrix& H3) {
  const std::vector<const ComplexMatrix*> xs{&H1, &H2, &H3};
  detail::require_tuple(xs, "sphere_residual");
  detail::ReportBuilder b(Relation::Sphere);
  detail::add_hermitian_terms(b, xs);
  detail::add_commutator_terms(b, xs);
  b.add("sphere", operator_norm(H1 * H1 + H2 * H2 + H3 * H3 - identity(H1.rows())));
  return std::move(b).finish();
}

/// T_δ: unitarity of both and ‖U₁U₂ − U₂U₁‖.
inline RelationReport torus2_residual(const ComplexMatrix& U1, const ComplexMatrix& U2) {
  detail::require_tuple({&U1, &U2}, "torus2_residual");
  detail::ReportBuilder b(Relation::Torus2);
  b.add("unitary1", unitarity_residual(U1));
  b.add("unitary2", unitarity_residual(U2));
  b.add("commutator12", operator_norm(commutator(U1, U2)));
  return std::move(b).finish();
}

/// T′_δ: Hermitian, all pairwise commutators, both circle equations.
inline RelationReport torus4_residual(const ComplexMatrix& X1, const ComplexMatrix& X2,
                                      const ComplexMatrix& X3, const ComplexMatrix& X4) {
  const std::vector<const ComplexMatrix*> xs{&X1, &X2, &X3, &X4};
  detail::require_tuple(xs, "torus4_residual");
  detail::ReportBuilder b(Relation::Torus4);
  detail::add_hermitian_terms(b, xs);
  detail::add_commutator_terms(b, xs);
  const ComplexMatrix Id = identity(X1.rows());
  b.add("circle12", operator_norm(X1 * X1 + X2 * X2 - Id));
  b.add("circle34", operator_norm(X3 * X3 + X4 * X4 - Id));
  return std::move(b).finish();
}

/// D_δ: Hermitian, commutator, contraction excess max(0, ‖X_r‖ − 1).
inline RelationReport disk_residual(const ComplexMatrix& X1, const ComplexMatrix& X2) {
  const std::vector<const ComplexMatrix*> xs{&X1, &X2};
  detail::require_tuple(xs, "disk_residual");
  detail::ReportBuilder b(Relation::Disk);
  detail::add_hermitian_terms(b, xs);
  detail::add_commutator_terms(b, xs);
  b.add("contraction1", std::max(0.0, operator_norm(X1) - 1.0));
  b.add("contraction2", std::max(0.0, operator_norm(X2) - 1.0));
  return std::move(b).finish();
}

}  // namespace acm
