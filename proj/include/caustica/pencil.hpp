#pragma once

#include <cstdint>
#include <vector>

#include "caustica/caustics.hpp"

namespace caustica {

struct FormSignature {
  int pos = 0, neg = 0, zero = 0;
};

FormSignature form_signature(const RMat3& a, double tol = kRankTol);

// real coordinate change bringing a symmetric form to a constant-curvature
// model form: map^T * normalized * map is proportional to the input
struct NormalizationResult {
  RMat3 map;
  RMat3 normalized;  // diag(1,1,1), diag(1,1,-1) or diag(1,1,0)
  SurfaceKind model;
};

NormalizationResult normalize_form(const RMat3& a, double tol = kRankTol);

// transversal field on a conic boundary defined by a-orthogonality: the field
// line joins x with the a-orthogonal complement direction of the tangent plane
struct OrthogonalField {
  ConicBoundary boundary;
  RMat3 a;
};

OrthogonalField make_a_orthogonal_field(const ConicBoundary& c, const RMat3& a);
Line a_orthogonal_field_eval(const OrthogonalField& f, const Point& x, double tol = kTol);

struct EquivalenceReport {
  double max_discrepancy = 0;
  int evaluated = 0;
  bool pass = false;
  std::vector<SampleRow> rows;
};

// compare the projective reflection of the a-orthogonal field with the
// geodesic reflection on the constant-curvature model of a, projected back
EquivalenceReport equivalence_check(const ConicBoundary& c, const RMat3& a, int n,
                                    std::uint64_t seed, double tol = 1e-9);

// limit of the rescaled adjugates adj(u - lambda a) for lambda -> lambda0
// where u - lambda0 a has rank 1; extrapolated over the step sequence
RMat3 degenerate_pencil_limit(const RMat3& u, const RMat3& a, double lambda0,
                              const std::vector<double>& h = {1e-2, 1e-3, 1e-4});

}  // namespace caustica
