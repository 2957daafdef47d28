#pragma once

#include <Eigen/Dense>
#include <complex>

#include "caustica/error.hpp"

namespace caustica {

using Cx = std::complex<double>;
using Vec3 = Eigen::Vector3cd;
using Mat3 = Eigen::Matrix3cd;
using RVec3 = Eigen::Vector3d;
using RMat3 = Eigen::Matrix3d;
using Vec2 = Eigen::Vector2d;

// default relative tolerance for algebraic predicates
inline constexpr double kTol = 1e-10;
// relative singular-value cutoff for rank decisions
inline constexpr double kRankTol = 1e-9;
// imaginary parts below this are truncated at output boundaries
inline constexpr double kImagChop = 1e-9;

Cx chop_im(const Cx& z, double eps = kImagChop);
bool nearly_real(const Vec3& v, double eps = kImagChop);

// scale so the largest-magnitude coordinate becomes exactly 1
Vec3 canonical(const Vec3& v);

// norm of the 2x2 minors of [u v], normalized; zero iff projectively equal
double proj_distance(const Vec3& u, const Vec3& v);
bool proj_equal(const Vec3& u, const Vec3& v, double tol = kTol);

struct Point {
  Vec3 h;
  Point() : h(Cx(0), Cx(0), Cx(0)) {}
  explicit Point(const Vec3& v) : h(canonical(v)) {}
  Point(const Cx& x, const Cx& y, const Cx& z) : Point(Vec3(x, y, z)) {}
  static Point affine(double x, double y) { return Point(Cx(x), Cx(y), Cx(1)); }
  static Point real(const RVec3& v) { return Point(v.cast<Cx>()); }
  bool is_infinite(double tol = kTol) const { return std::abs(h[2]) <= tol; }
  Vec2 affine_xy() const;  // requires finite point with nearly real chart coords
};

struct Line {
  Vec3 h;  // points p on the line satisfy h.dot(p) = 0 (bilinear, no conjugation)
  Line() : h(Cx(0), Cx(0), Cx(0)) {}
  explicit Line(const Vec3& v) : h(canonical(v)) {}
  Line(const Cx& a, const Cx& b, const Cx& c) : Line(Vec3(a, b, c)) {}
  static Line real(const RVec3& v) { return Line(v.cast<Cx>()); }
  // line through an affine point with affine direction d
  static Line through_dir(const Point& p, const Cx& dx, const Cx& dy);
};

bool proj_equal(const Point& a, const Point& b, double tol = kTol);
bool proj_equal(const Line& a, const Line& b, double tol = kTol);

Cx incidence(const Line& l, const Point& p);
// bilinear cross product; Eigen's cross() conjugates complex operands
Vec3 bilinear_cross(const Vec3& a, const Vec3& b);
Line join(const Point& p, const Point& q);
Point meet(const Line& l, const Line& m);
// direction of a line = its point on x3 = 0
Vec3 line_direction(const Line& l);

// value at the projective infinity of the scalar field
Cx projective_infinity();
bool is_projective_infinity(const Cx& z);

// cross ratio of four collinear points / concurrent lines, basis (a, b)
Cx cross_ratio(const Point& a, const Point& b, const Point& c, const Point& d,
               double tol = kTol);
Cx cross_ratio(const Line& a, const Line& b, const Line& c, const Line& d,
               double tol = kTol);

// unique b with cross_ratio(t, n, a, b) = -1; idempotent; fixes t and n
Line harmonic_conjugate(const Line& t, const Line& n, const Line& a,
                        double tol = kTol);
Point harmonic_conjugate(const Point& t, const Point& n, const Point& a,
                         double tol = kTol);

// orthogonal polarity: affine lines <-> points spanned by the moment vector;
// in homogeneous coordinates both directions are the identity on coordinates
Point line_dual_point(const Line& l);
Line point_dual_line(const Point& p);

}  // namespace caustica
