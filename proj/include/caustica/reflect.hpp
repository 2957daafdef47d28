#pragma once

#include "caustica/conic.hpp"

namespace caustica {

using Cx2 = Eigen::Vector2cd;
using Mat2c = Eigen::Matrix2cd;

// Euclidean mirror image of v across the line spanned by tangent_dir
Vec2 mirror_reflection(const Vec2& tangent_dir, const Vec2& v);

// linear involution on directions at a base point: eigenvalue +1 along the
// tangent line, -1 along the transversal line
struct PlaneInvolution {
  Mat2c m;  // unit Frobenius norm, first nonzero entry made positive
  Point base;
  Cx2 apply(const Cx2& dir) const { return m * dir; }
};

PlaneInvolution build_projective_involution(const Line& tangent, const Line& transversal,
                                            const Point& q, double tol = kTol);

// image of a line of the pencil through the involution's base point
Line reflect_line_pencil(const PlaneInvolution& inv, const Line& l, double tol = kTol);

// linear involution of R^3 preserving <form x, x>, fixing the plane span{u,w}
// and negating its form-orthogonal direction adj(form) (u x w)
struct SpaceInvolution {
  RMat3 j;
  RVec3 apply(const RVec3& v) const { return j * v; }
};

SpaceInvolution constant_curvature_reflection(const RMat3& form, const RVec3& u,
                                              const RVec3& w, double tol = kTol);

// projective involution of a line fixing p and swapping the two intersection
// points of the carrier with a conic
struct LineInvolution {
  Line carrier;
  Vec3 b1, b2;  // point basis of the carrier
  Mat2c m;      // action on (alpha, beta) with x = alpha b1 + beta b2
  Point apply(const Point& x, double tol = kTol) const;
};

LineInvolution line_involution_fixing_point(const Point& p, const Line& carrier,
                                            const Conic& c, double tol = kTol);

// basis of the points of a line (shared by several constructions)
void line_point_basis(const Line& l, Vec3& b1, Vec3& b2);

}  // namespace caustica
