#include "caustica/reflect.hpp"

#include <algorithm>
#include <cmath>

namespace caustica {

namespace {

void normalize_involution(Mat2c& m) {
  double n = std::sqrt(m.squaredNorm());
  if (n == 0.0) fail(ErrorCode::ZeroVector, "zero involution matrix");
  m /= n;
  for (int i = 0; i < 4; ++i) {
    Cx e = m(i % 2, i / 2);  // column-major scan
    if (std::abs(e) > 1e-14) {
      double ang = (std::abs(e.real()) >= std::abs(e.imag())) ? (e.real() < 0 ? -1.0 : 1.0)
                                                              : (e.imag() < 0 ? -1.0 : 1.0);
      m *= ang;
      return;
    }
  }
}

Eigen::Vector2cd solve_coords(const Vec3& b1, const Vec3& b2, const Vec3& x,
                              double tol, ErrorCode off) {
  Eigen::Matrix<Cx, 3, 2> basis;
  basis.col(0) = b1;
  basis.col(1) = b2;
  Eigen::Vector2cd sol = basis.colPivHouseholderQr().solve(x);
  if ((basis * sol - x).norm() > 1e3 * tol * x.norm())
    fail(off, "element does not lie on the carrier");
  return sol;
}

}  // namespace

Vec2 mirror_reflection(const Vec2& tangent_dir, const Vec2& v) {
  double n2 = tangent_dir.squaredNorm();
  if (n2 == 0.0) fail(ErrorCode::ZeroVector, "zero tangent direction");
  return 2.0 * (v.dot(tangent_dir) / n2) * tangent_dir - v;
}

PlaneInvolution build_projective_involution(const Line& tangent, const Line& transversal,
                                            const Point& q, double tol) {
  if (std::abs(incidence(tangent, q)) > 1e3 * tol || std::abs(incidence(transversal, q)) > 1e3 * tol)
    fail(ErrorCode::NotThroughPoint, "eigenlines must pass through the base point");
  Vec3 td = line_direction(tangent);
  Vec3 nd = line_direction(transversal);
  Mat2c b;
  b << td[0], nd[0], td[1], nd[1];
  Cx det = b(0, 0) * b(1, 1) - b(0, 1) * b(1, 0);
  double scale = td.norm() * nd.norm();
  if (std::abs(det) <= tol * scale)
    fail(ErrorCode::CoincidentEigenlines, "tangent and transversal directions coincide");
  Mat2c binv;
  binv << b(1, 1), -b(0, 1), -b(1, 0), b(0, 0);
  binv /= det;
  Mat2c m = b * Eigen::DiagonalMatrix<Cx, 2>(Cx(1), Cx(-1)) * binv;
  normalize_involution(m);
  return PlaneInvolution{m, q};
}

Line reflect_line_pencil(const PlaneInvolution& inv, const Line& l, double tol) {
  if (std::abs(incidence(l, inv.base)) > 1e3 * tol * inv.base.h.norm())
    fail(ErrorCode::NotThroughPoint, "line is not in the pencil of the base point");
  Vec3 d = line_direction(l);
  Cx2 img = inv.apply(Cx2(d[0], d[1]));
  if (img.norm() <= tol * d.norm()) fail(ErrorCode::ZeroVector, "reflected direction vanishes");
  return Line(bilinear_cross(inv.base.h, Vec3(img[0], img[1], Cx(0))));
}

SpaceInvolution constant_curvature_reflection(const RMat3& form, const RVec3& u,
                                              const RVec3& w, double tol) {
  RVec3 cr = u.cross(w);
  double scale = u.norm() * w.norm();
  if (cr.norm() <= tol * scale)
    fail(ErrorCode::DegenerateRestriction, "tangent plane basis is degenerate");
  RMat3 adjf = adjugate(form.cast<Cx>()).real();
  RVec3 n = adjf * cr;
  RMat3 basis;
  basis.col(0) = u;
  basis.col(1) = w;
  basis.col(2) = n;
  double det = basis.determinant();
  if (n.norm() <= tol * adjf.norm() * cr.norm() + 1e-300 ||
      std::abs(det) <= tol * u.norm() * w.norm() * n.norm())
    fail(ErrorCode::DegenerateRestriction, "form-orthogonal direction lies in the tangent plane");
  RMat3 d = RVec3(1.0, 1.0, -1.0).asDiagonal();
  SpaceInvolution out{basis * d * basis.inverse()};
  return out;
}

void line_point_basis(const Line& l, Vec3& b1, Vec3& b2) {
  Vec3 cand[3] = {bilinear_cross(l.h, Vec3(1, 0, 0)), bilinear_cross(l.h, Vec3(0, 1, 0)),
                  bilinear_cross(l.h, Vec3(0, 0, 1))};
  std::sort(cand, cand + 3, [](const Vec3& x, const Vec3& y) { return x.norm() > y.norm(); });
  b1 = cand[0];
  b2 = cand[1] - b1 * (b1.conjugate().cwiseProduct(cand[1]).sum() / b1.squaredNorm());
  if (b2.norm() < 1e-10 * b1.norm())
    b2 = cand[2] - b1 * (b1.conjugate().cwiseProduct(cand[2]).sum() / b1.squaredNorm());
}

Point LineInvolution::apply(const Point& x, double tol) const {
  Eigen::Vector2cd co = solve_coords(b1, b2, x.h, tol, ErrorCode::NotThroughPoint);
  Eigen::Vector2cd img = m * co;
  return Point(img[0] * b1 + img[1] * b2);
}

LineInvolution line_involution_fixing_point(const Point& p, const Line& carrier,
                                            const Conic& c, double tol) {
  if (std::abs(incidence(carrier, p)) > 1e3 * tol * p.h.norm())
    fail(ErrorCode::NotThroughPoint, "fixed point must lie on the carrier line");
  Vec3 b1, b2;
  line_point_basis(carrier, b1, b2);
  // intersections of the carrier with the conic, in carrier coordinates
  Cx qa = b2.cwiseProduct(c.m * b2).sum();
  Cx qb = b1.cwiseProduct(c.m * b2).sum();
  Cx qc = b1.cwiseProduct(c.m * b1).sum();
  double qs = std::abs(qa) + std::abs(qb) + std::abs(qc);
  if (qs <= 1e-14 * c.m.cwiseAbs().maxCoeff())
    fail(ErrorCode::LineInConic, "carrier lies inside the conic");
  Cx disc = qb * qb - qa * qc;
  Cx rt = std::sqrt(disc);
  Eigen::Vector2cd w1, w2;
  if (std::abs(qa) > 1e-14 * qs) {
    Cx q = (std::abs(-qb + rt) >= std::abs(-qb - rt)) ? (-qb + rt) : (-qb - rt);
    if (std::abs(q) == 0.0) { w1 << Cx(1), Cx(0); w2 = w1; }
    else { w1 << Cx(1), q / qa; w2 << Cx(1), qc / q; }
  } else if (std::abs(qb) > 1e-14 * qs) {
    w1 << Cx(1), -qc / (Cx(2) * qb);  // finite root
    w2 << Cx(0), Cx(1);               // root at infinity of the chart
  } else {
    fail(ErrorCode::TangentLine, "carrier is tangent: intersection pair collapses");
  }
  Vec3 z1 = w1[0] * b1 + w1[1] * b2;
  Vec3 z2 = w2[0] * b1 + w2[1] * b2;
  if (proj_distance(z1, z2) < 1e-7)
    fail(ErrorCode::TangentLine, "carrier is tangent: intersection pair collapses");
  // p in the basis of the two intersection points
  Mat2c wmat;
  wmat << w1[0], w2[0], w1[1], w2[1];
  Eigen::Vector2cd pc = solve_coords(b1, b2, p.h, tol, ErrorCode::NotThroughPoint);
  Cx det = wmat(0, 0) * wmat(1, 1) - wmat(0, 1) * wmat(1, 0);
  Eigen::Vector2cd ab;
  ab[0] = (wmat(1, 1) * pc[0] - wmat(0, 1) * pc[1]) / det;
  ab[1] = (-wmat(1, 0) * pc[0] + wmat(0, 0) * pc[1]) / det;
  double absc = std::abs(ab[0]) + std::abs(ab[1]);
  if (std::abs(ab[0]) <= 1e-7 * absc || std::abs(ab[1]) <= 1e-7 * absc)
    fail(ErrorCode::TangentLine, "fixed point collides with an intersection point");
  Mat2c sw;
  sw << Cx(0), ab[0] * ab[0], ab[1] * ab[1], Cx(0);
  Mat2c winv;
  winv << wmat(1, 1), -wmat(0, 1), -wmat(1, 0), wmat(0, 0);
  winv /= det;
  Mat2c m = wmat * sw * winv;
  normalize_involution(m);
  return LineInvolution{carrier, b1, b2, m};
}

}  // namespace caustica
