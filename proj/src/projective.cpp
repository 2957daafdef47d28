#include "caustica/projective.hpp"

#include <cmath>
#include <limits>

namespace caustica {

const char* error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::NotInPencil: return "NotInPencil";
    case ErrorCode::NotConcurrent: return "NotConcurrent";
    case ErrorCode::DegenerateQuadruple: return "DegenerateQuadruple";
    case ErrorCode::DegeneratePencil: return "DegeneratePencil";
    case ErrorCode::DegenerateConic: return "DegenerateConic";
    case ErrorCode::SingularMap: return "SingularMap";
    case ErrorCode::CoincidentEigenlines: return "CoincidentEigenlines";
    case ErrorCode::DegenerateRestriction: return "DegenerateRestriction";
    case ErrorCode::TangentLine: return "TangentLine";
    case ErrorCode::LineInConic: return "LineInConic";
    case ErrorCode::NotThroughPoint: return "NotThroughPoint";
    case ErrorCode::SingularPoint: return "SingularPoint";
    case ErrorCode::OffBoundary: return "OffBoundary";
    case ErrorCode::SingularReflection: return "SingularReflection";
    case ErrorCode::ZeroVelocity: return "ZeroVelocity";
    case ErrorCode::InvalidCase: return "InvalidCase";
    case ErrorCode::OnPolarLocus: return "OnPolarLocus";
    case ErrorCode::ProportionalConics: return "ProportionalConics";
    case ErrorCode::NotHomogeneous: return "NotHomogeneous";
    case ErrorCode::SingularParameter: return "SingularParameter";
    case ErrorCode::SingularCurvePoint: return "SingularCurvePoint";
    case ErrorCode::SelfOrthogonalTangent: return "SelfOrthogonalTangent";
    case ErrorCode::AlphaEqualsC: return "AlphaEqualsC";
    case ErrorCode::UnsupportedSignature: return "UnsupportedSignature";
    case ErrorCode::RankMismatch: return "RankMismatch";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::LiftDomainEmpty: return "LiftDomainEmpty";
    case ErrorCode::OutsideDomain: return "OutsideDomain";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
  }
  return "UnknownError";
}

Cx chop_im(const Cx& z, double eps) {
  if (std::abs(z.imag()) < eps * std::max(1.0, std::abs(z.real()))) return Cx(z.real(), 0.0);
  return z;
}

bool nearly_real(const Vec3& v, double eps) {
  double scale = v.cwiseAbs().maxCoeff();
  if (scale == 0.0) return true;
  for (int i = 0; i < 3; ++i)
    if (std::abs(v[i].imag()) > eps * scale) return false;
  return true;
}

Vec3 canonical(const Vec3& v) {
  if (!v.allFinite()) fail(ErrorCode::ZeroVector, "non-finite homogeneous vector");
  int imax = 0;
  double best = -1.0;
  for (int i = 0; i < 3; ++i) {
    double a = std::abs(v[i]);
    if (a > best) { best = a; imax = i; }
  }
  if (best <= 0.0) fail(ErrorCode::ZeroVector, "zero homogeneous vector");
  return v / v[imax];
}

double proj_distance(const Vec3& u, const Vec3& v) {
  double nu = u.norm(), nv = v.norm();
  if (nu == 0.0 || nv == 0.0) fail(ErrorCode::ZeroVector, "projective distance of zero vector");
  Cx m01 = u[0] * v[1] - u[1] * v[0];
  Cx m02 = u[0] * v[2] - u[2] * v[0];
  Cx m12 = u[1] * v[2] - u[2] * v[1];
  return std::sqrt(std::norm(m01) + std::norm(m02) + std::norm(m12)) / (nu * nv);
}

bool proj_equal(const Vec3& u, const Vec3& v, double tol) {
  return proj_distance(u, v) <= tol;
}

bool proj_equal(const Point& a, const Point& b, double tol) { return proj_equal(a.h, b.h, tol); }
bool proj_equal(const Line& a, const Line& b, double tol) { return proj_equal(a.h, b.h, tol); }

Vec2 Point::affine_xy() const {
  if (is_infinite()) fail(ErrorCode::OutsideDomain, "affine chart of an infinite point");
  Cx x = h[0] / h[2], y = h[1] / h[2];
  return Vec2(chop_im(x).real(), chop_im(y).real());
}

Line Line::through_dir(const Point& p, const Cx& dx, const Cx& dy) {
  Vec3 d(dx, dy, Cx(0));
  return Line(bilinear_cross(p.h, d));
}

Cx incidence(const Line& l, const Point& p) { return l.h.cwiseProduct(p.h).sum(); }

Vec3 bilinear_cross(const Vec3& a, const Vec3& b) {
  return Vec3(a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]);
}

Line join(const Point& p, const Point& q) { return Line(bilinear_cross(p.h, q.h)); }
Point meet(const Line& l, const Line& m) { return Point(bilinear_cross(l.h, m.h)); }

Vec3 line_direction(const Line& l) {
  Vec3 d(l.h[1], -l.h[0], Cx(0));
  if (d.cwiseAbs().maxCoeff() <= 0.0) fail(ErrorCode::ZeroVector, "line at infinity has no affine direction");
  return d;
}

Cx projective_infinity() { return Cx(std::numeric_limits<double>::infinity(), 0.0); }
bool is_projective_infinity(const Cx& z) { return std::isinf(z.real()) || std::isinf(z.imag()); }

namespace {

// decompose v = alpha*a + beta*b with residual check against the span
struct PencilCoords { Cx alpha, beta; };

PencilCoords pencil_coords(const Vec3& a, const Vec3& b, const Vec3& v,
                           double tol, ErrorCode offspan) {
  Eigen::Matrix<Cx, 3, 2> basis;
  basis.col(0) = a;
  basis.col(1) = b;
  Eigen::Vector2cd sol = basis.colPivHouseholderQr().solve(v);
  double res = (basis * sol - v).norm();
  if (res > 1e3 * tol * v.norm()) fail(offspan, "element lies outside the pencil span");
  return {sol[0], sol[1]};
}

Cx cross_ratio_raw(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d,
                   double tol) {
  if (proj_equal(a, b, tol)) fail(ErrorCode::DegenerateQuadruple, "basis pair coincides");
  PencilCoords pc = pencil_coords(a, b, c, tol, ErrorCode::NotInPencil);
  PencilCoords pd = pencil_coords(a, b, d, tol, ErrorCode::NotInPencil);
  Cx num = pc.beta * pd.alpha;
  Cx den = pc.alpha * pd.beta;
  double scale = std::abs(pc.alpha * pd.alpha) + std::abs(pc.beta * pd.beta) + std::abs(num);
  if (std::abs(den) <= tol * std::max(scale, 1e-300)) return projective_infinity();
  return num / den;
}

Vec3 harmonic_raw(const Vec3& t, const Vec3& n, const Vec3& a, double tol) {
  if (proj_equal(t, n, tol)) fail(ErrorCode::DegeneratePencil, "harmonic basis pair coincides");
  PencilCoords pa = pencil_coords(t, n, a, tol, ErrorCode::NotConcurrent);
  Vec3 out = pa.alpha * t - pa.beta * n;
  if (out.cwiseAbs().maxCoeff() <= 0.0) fail(ErrorCode::ZeroVector, "harmonic conjugate degenerates");
  return canonical(out);
}

}  // namespace

Cx cross_ratio(const Point& a, const Point& b, const Point& c, const Point& d, double tol) {
  return cross_ratio_raw(a.h, b.h, c.h, d.h, tol);
}

Cx cross_ratio(const Line& a, const Line& b, const Line& c, const Line& d, double tol) {
  return cross_ratio_raw(a.h, b.h, c.h, d.h, tol);
}

Line harmonic_conjugate(const Line& t, const Line& n, const Line& a, double tol) {
  return Line(harmonic_raw(t.h, n.h, a.h, tol));
}

Point harmonic_conjugate(const Point& t, const Point& n, const Point& a, double tol) {
  return Point(harmonic_raw(t.h, n.h, a.h, tol));
}

Point line_dual_point(const Line& l) { return Point(l.h); }
Line point_dual_line(const Point& p) { return Line(p.h); }

}  // namespace caustica
