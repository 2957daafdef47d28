#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "caustica/integrals.hpp"
#include "caustica/surface.hpp"

namespace caustica {

// confocal family of an anchor conic w.r.t. a metric form: the x-side member
// at parameter lambda has matrix adj(B - lambda A)
struct ConfocalPencil {
  RMat3 b;  // anchor data (dual of the boundary in the classical scaling)
  RMat3 a;  // metric form

  // classical Euclidean family of a central conic: a = diag(1,1,0) and b
  // scaled so b(2,2) = -1 (ellipse a0, b0 gives b = diag(a0^2, b0^2, -1))
  static ConfocalPencil euclidean(const Conic& anchor);
  Conic member(double lambda, double tol = kRankTol) const;
};

// pencil of conics U - lambda A on the M-side; x-side members are adjugates
struct DualPencilFamily {
  RMat3 u, a;
  Conic member_m(double lambda) const;
  Conic member_x(double lambda, double tol = kRankTol) const;
  std::vector<Point> base_points() const;  // common points of all M-side members
};

struct CausticReport {
  double max_residual = 0;
  double mean_residual = 0;
  int evaluated = 0;
  int failures = 0;
  int permuted = 0;     // samples where the tangent/intersection pair swaps
  int fixed_count = 0;  // samples where each element maps to itself
  bool pass = false;
  std::vector<SampleRow> rows;
};

// at sampled boundary points: reflect both (possibly complex) tangent lines
// to alpha through the field involution and measure their tangency residual
CausticReport check_complex_caustic(const ConicBoundary& b, const TransversalField& f,
                                    const Conic& alpha, int n, std::uint64_t seed,
                                    double tol = 1e-9);

// at sampled points P of gamma: sigma_P must permute L_P intersect S_star
CausticReport check_invariant_curve(const DualBilliard& d, const Conic& s_star, int n,
                                    std::uint64_t seed, double tol = 1e-9);

// implicit real curve f = 0, star-shaped around the origin; points found by
// radial Newton iteration from radius r0
struct ImplicitCurve {
  std::function<double(double, double)> f;
  std::function<Vec2(double, double)> grad;
  double r0 = 1.0;

  Vec2 point_at(double theta) const;
  Vec2 tangent_at(const Vec2& p) const;  // gradient rotated by 90 degrees
};

ImplicitCurve quartic_oval(double a = 2.0);  // (x/a)^4 + y^4 = 1

// mirror-law billiard on an implicit oval, tested against a candidate caustic
CausticReport check_oval_caustic(const ImplicitCurve& c, const Conic& alpha, int n,
                                 std::uint64_t seed, double tol = 1e-9);

struct TangencySample {
  Point a;    // source point on the curve
  Point b;    // contact point on alpha
  Line line;  // the tangent line a-b
};

// all pairs (A, B) with A sampled on c and line AB tangent to alpha at B
std::vector<TangencySample> tangential_correspondence_samples(const ImplicitCurve& c,
                                                              const Conic& alpha, int n,
                                                              std::uint64_t seed);

// curved models: the two degenerate complex 2-planes through a boundary point
// must be swapped by the geodesic reflection there
CausticReport check_absolute_caustic(SurfaceKind k, const SurfaceBoundary& b, int n,
                                     std::uint64_t seed, double tol = 1e-9);

// deterministic low-discrepancy parameter sequence used by the samplers
double golden_sequence(double phase, int k);

}  // namespace caustica
