#pragma once

#include <array>
#include <vector>

#include "caustica/projective.hpp"

namespace caustica {

enum class ConicClass { Regular, LinePair, DoubleLine };

struct Conic {
  Mat3 m;  // symmetric by construction
  Conic() : m(Mat3::Zero()) {}
  explicit Conic(const Mat3& a);
  static Conic from_coeffs(const std::array<double, 6>& c);  // a11 a12 a13 a22 a23 a33
  static Conic real(const RMat3& a) { return Conic(a.cast<Cx>()); }
  ConicClass classify(double tol = kRankTol) const;
  bool is_real(double eps = kImagChop) const;
  RMat3 real_matrix() const;  // requires is_real after canonical scaling
};

Mat3 adjugate(const Mat3& m);

Cx conic_eval(const Conic& c, const Point& p);
// gradient line: polar of p; for p on a regular conic this is the tangent there
Line polar_line(const Point& p, const Conic& c);
Point pole_of_line(const Line& l, const Conic& c);

// relative tangency residual |l^T adj(c) l| / (|l|^2 |adj(c)|_F)
double tangency_residual(const Line& l, const Conic& c);
// the two tangent lines through p, ordered lexicographically (re, then im)
std::array<Line, 2> tangent_lines_from_point(const Point& p, const Conic& c,
                                             double tol = kTol);
// envelope of tangent lines as a point conic in the dual plane
Conic dualize_conic(const Conic& c, double tol = kRankTol);

// both intersection points of a line with a regular conic (complex allowed);
// raises TangentLine if the pair collapses tighter than the separation floor
std::array<Point, 2> line_conic_points(const Line& l, const Conic& c,
                                       double tol = kTol);

// degenerate conics: the two lines of a rank-2 conic (equal for rank 1)
std::array<Line, 2> split_line_pair(const Conic& c, double tol = kRankTol);
// common points of two conics (at most 4, deduplicated projectively)
std::vector<Point> conic_conic_intersection(const Conic& a, const Conic& b,
                                            double tol = kTol);

struct ProjectiveMap {
  Mat3 m;
  explicit ProjectiveMap(const Mat3& a);
  static ProjectiveMap real(const RMat3& a) { return ProjectiveMap(a.cast<Cx>()); }
  ProjectiveMap inverse() const;
};

Point apply_map(const ProjectiveMap& f, const Point& p);
Line apply_map(const ProjectiveMap& f, const Line& l);
Conic apply_map(const ProjectiveMap& f, const Conic& c);

// global trigonometric chart of a real regular conic with nonempty real locus:
// t -> Point(T (cos t, sin t, 1)); derivative never vanishes
struct ConicChart {
  RMat3 T;
  Point at(double t) const;
  Vec3 velocity(double t) const;  // d/dt of the homogeneous representative
};
ConicChart conic_trig_chart(const Conic& c);

}  // namespace caustica
