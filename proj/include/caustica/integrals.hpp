#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "caustica/billiard.hpp"

namespace caustica {

// dense homogeneous polynomial in (M1, M2, M3); coefficients stored in
// graded-lex order over exponent triples (i, j, k), i descending then j
struct HomPoly {
  int deg = 0;
  std::vector<double> c;

  static HomPoly zero(int d);
  static HomPoly constant(double v);
  static HomPoly variable(int which);  // 0 -> M1, 1 -> M2, 2 -> M3

  static int size(int d) { return (d + 1) * (d + 2) / 2; }
  static int index(int d, int i, int j) { return (d - i) * (d - i + 1) / 2 + (d - i - j); }
  double& at(int i, int j) { return c[index(deg, i, j)]; }
  double at(int i, int j) const { return c[index(deg, i, j)]; }

  Cx eval(const Vec3& m) const;
  double eval(const RVec3& m) const;
  double coeff_scale() const;  // sum of |coefficients|

  HomPoly operator+(const HomPoly& o) const;
  HomPoly operator-(const HomPoly& o) const;
  HomPoly operator*(const HomPoly& o) const;
  HomPoly operator*(double s) const;
  HomPoly pow(int k) const;
  std::string to_string() const;
};

// list of (factor, exponent) pairs whose product is a homogeneous polynomial
using PolyFactors = std::vector<std::pair<HomPoly, int>>;

// 0-homogeneous rational function num/den with matching degrees; when the
// factored forms are supplied, evaluation multiplies the small factors instead
// of summing the expanded monomials, which stays accurate near factor zeros
struct RationalIntegral {
  HomPoly num, den;
  PolyFactors num_factors, den_factors;
  RationalIntegral() = default;
  RationalIntegral(HomPoly n, HomPoly d);
  RationalIntegral(PolyFactors nf, PolyFactors df);
};

double eval_rational_integral(const RationalIntegral& r, const RVec3& m);
Cx eval_rational_integral(const RationalIntegral& r, const Vec3& m);

// moment coordinates of the line through x with direction v
RVec3 moment_vector(const Vec2& x, const Vec2& v);

// the named first integrals of the exotic parabola billiards, stated in the
// variables v1 = M2, v2 = -M1, Delta = M3
struct CanonicalIntegral {
  RationalIntegral rat;
  std::string factored;  // human-readable factored form
};
CanonicalIntegral canonical_integral(ExoticCase c, int n = 1);

// ratio of two quadratic forms <U M, M> / <A M, M>
RationalIntegral pencil_ratio_integral(const RMat3& u, const RMat3& a);
HomPoly quadratic_form_poly(const RMat3& a);

// H^2 / (M1^2 + M2^2)^d for H homogeneous of degree d
RationalIntegral invariant_curve_integral(const HomPoly& h, int d);

struct SampleRow {
  int id = 0;
  double residual = 0;
  bool pass = true;
};

struct InvarianceReport {
  double max_jump = 0;
  double mean_jump = 0;
  int evaluated = 0;
  int failures = 0;
  bool pass = true;
  bool primal_agrees = true;  // only meaningful for the dual-side check
  std::vector<SampleRow> rows;
};

// relative jump of R across n sampled reflections on the boundary
InvarianceReport check_reflection_invariance(const RationalIntegral& r, const ConicBoundary& b,
                                             const TransversalField& f, int n, std::uint64_t seed,
                                             double tol = 1e-8);

// relative jump of R across n sampled dual reflections sigma_P; also
// cross-checks that the verdict agrees with the primal-side check
InvarianceReport check_dual_invariance(const RationalIntegral& r, const DualBilliard& d, int n,
                                       std::uint64_t seed, double tol = 1e-8);

// real parts of the exotic tangency locus parameters (for sample exclusion)
std::vector<double> real_locus_params(ExoticCase c, int n);

}  // namespace caustica
