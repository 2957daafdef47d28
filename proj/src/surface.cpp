#include "caustica/surface.hpp"

#include <cmath>

namespace caustica {

RMat3 surface_form(SurfaceKind k) {
  switch (k) {
    case SurfaceKind::Plane: return RVec3(1, 1, 0).asDiagonal();
    case SurfaceKind::Sphere: return RMat3::Identity();
    case SurfaceKind::Hyperbolic: return RVec3(1, 1, -1).asDiagonal();
  }
  fail(ErrorCode::InvalidCase, "unknown surface kind");
}

RVec3 lift_to_surface(SurfaceKind k, const Point& p) {
  if (!nearly_real(p.h)) fail(ErrorCode::OutsideDomain, "cannot lift a complex point");
  RVec3 x = p.h.real();
  switch (k) {
    case SurfaceKind::Plane: {
      if (std::abs(x[2]) <= kTol * x.norm())
        fail(ErrorCode::OutsideDomain, "point at infinity has no planar lift");
      return x / x[2];
    }
    case SurfaceKind::Sphere: {
      x.normalize();
      if (x[2] < -1e-14) x = -x;
      else if (std::abs(x[2]) <= 1e-14) {
        if (x[0] < -1e-14) x = -x;
        else if (std::abs(x[0]) <= 1e-14 && x[1] < 0) x = -x;
      }
      return x;
    }
    case SurfaceKind::Hyperbolic: {
      double q = x[0] * x[0] + x[1] * x[1] - x[2] * x[2];
      if (q >= -kTol * x.squaredNorm())
        fail(ErrorCode::OutsideDomain, "point lies on or outside the absolute");
      x /= std::sqrt(-q);
      if (x[2] < 0) x = -x;
      return x;
    }
  }
  fail(ErrorCode::InvalidCase, "unknown surface kind");
}

Point project_to_plane(const RVec3& x) {
  if (x.norm() == 0.0) fail(ErrorCode::ZeroVector, "cannot project the origin");
  return Point(x.cast<Cx>());
}

SurfaceBoundary SurfaceBoundary::make(const RMat3& cone, const RVec3& interior_witness) {
  RMat3 m = (cone + cone.transpose()) / 2.0;
  double val = interior_witness.dot(m * interior_witness);
  if (val == 0.0) fail(ErrorCode::DegenerateConic, "interior witness lies on the boundary cone");
  if (val > 0.0) m = -m;
  return SurfaceBoundary{m};
}

SurfaceState normalize_state(SurfaceKind k, const RVec3& x, const RVec3& v) {
  RMat3 a = surface_form(k);
  RVec3 xx = lift_to_surface(k, Point(x.cast<Cx>()));
  RVec3 vv = v;
  switch (k) {
    case SurfaceKind::Plane:
      vv[2] = 0.0;
      break;
    case SurfaceKind::Sphere:
      vv -= xx * xx.dot(vv);
      break;
    case SurfaceKind::Hyperbolic: {
      double xax = xx.dot(a * xx);  // = -1
      vv -= xx * (xx.dot(a * vv) / xax);
      break;
    }
  }
  double n2 = vv.dot(a * vv);
  if (n2 <= 0.0) fail(ErrorCode::ZeroVelocity, "velocity is not spacelike");
  vv /= std::sqrt(n2);
  return SurfaceState{xx, vv};
}

RVec3 surface_boundary_tangent(SurfaceKind k, const SurfaceBoundary& b, const RVec3& x) {
  RVec3 grad = b.cone * x;
  RVec3 w;
  if (k == SurfaceKind::Plane) w = RVec3(-grad[1], grad[0], 0.0);
  else w = (surface_form(k) * x).cross(grad);
  if (w.norm() <= 1e-12 * (x.norm() * grad.norm() + 1e-300))
    fail(ErrorCode::SingularCurvePoint, "boundary curve is singular here");
  return w;
}

namespace {

// smallest admissible root of c0 + 2 b u + d u^2 mapped through `remap`
struct GeoHit { bool ok = false; double t = 0; };

GeoHit smallest_hit_sphere(double c0, double beta, double delta) {
  constexpr double kFloor = 1e-7;
  double bestt = 1e18;
  bool ok = false;
  auto consider = [&](double theta) {
    while (theta <= kFloor) theta += M_PI;  // roots of the cone quadric repeat mod pi
    if (theta < bestt) { bestt = theta; ok = true; }
  };
  double qs = std::abs(delta) + std::abs(beta) + std::abs(c0);
  if (qs == 0.0) return {};
  if (std::abs(delta) > 1e-14 * qs) {
    double disc = beta * beta - delta * c0;
    if (disc >= 0) {
      double rt = std::sqrt(disc);
      double q = (std::abs(-beta + rt) >= std::abs(-beta - rt)) ? (-beta + rt) : (-beta - rt);
      if (q != 0.0) {
        consider(std::atan(q / delta));
        consider(std::atan(c0 / q));
      } else {
        consider(std::atan(0.0) + M_PI);  // double root at u = 0
      }
    }
  } else if (std::abs(beta) > 1e-14 * qs) {
    consider(std::atan(-c0 / (2 * beta)));
    consider(M_PI / 2);  // u -> infinity root
  } else if (std::abs(c0) <= 1e-14 * qs) {
    return {};  // geodesic inside the cone
  } else {
    consider(M_PI / 2);
  }
  if (!ok) return {};
  return {true, bestt};
}

}  // namespace

std::optional<SurfaceState> surface_billiard_step(SurfaceKind k, const SurfaceBoundary& b,
                                                  const SurfaceState& sIn, double tol) {
  SurfaceState s = normalize_state(k, sIn.x, sIn.v);
  RMat3 a = surface_form(k);
  constexpr double kFloor = 1e-7;
  RVec3 y, u;
  double c0 = s.x.dot(b.cone * s.x);
  double beta = s.x.dot(b.cone * s.v);
  double delta = s.v.dot(b.cone * s.v);
  switch (k) {
    case SurfaceKind::Plane: {
      // straight line x + t v in the chart x3 = 1
      double best = -1;
      double qs = std::abs(delta) + std::abs(beta) + std::abs(c0);
      if (std::abs(delta) > 1e-14 * qs) {
        double disc = beta * beta - delta * c0;
        if (disc < 0) return std::nullopt;
        double rt = std::sqrt(disc);
        double q = (std::abs(-beta + rt) >= std::abs(-beta - rt)) ? (-beta + rt) : (-beta - rt);
        if (q != 0.0) {
          for (double cand : {q / delta, c0 / q})
            if (cand > kFloor && (best < 0 || cand < best)) best = cand;
        }
      } else if (std::abs(beta) > 1e-14 * qs) {
        double cand = -c0 / (2 * beta);
        if (cand > kFloor) best = cand;
      }
      if (best <= 0) return std::nullopt;
      y = s.x + best * s.v;
      u = s.v;
      break;
    }
    case SurfaceKind::Sphere: {
      GeoHit hit = smallest_hit_sphere(c0, beta, delta);
      if (!hit.ok) return std::nullopt;
      y = s.x * std::cos(hit.t) + s.v * std::sin(hit.t);
      u = -s.x * std::sin(hit.t) + s.v * std::cos(hit.t);
      break;
    }
    case SurfaceKind::Hyperbolic: {
      // roots of c0 + 2 beta w + delta w^2 with w = tanh t in (-1, 1)
      double best = 1e18;
      bool ok = false;
      auto consider = [&](double w) {
        if (!(w > -1 && w < 1)) return;
        double t = std::atanh(w);
        if (t > kFloor && t < best) { best = t; ok = true; }
      };
      double qs = std::abs(delta) + std::abs(beta) + std::abs(c0);
      if (qs == 0.0) return std::nullopt;
      if (std::abs(delta) > 1e-14 * qs) {
        double disc = beta * beta - delta * c0;
        if (disc >= 0) {
          double rt = std::sqrt(disc);
          double q = (std::abs(-beta + rt) >= std::abs(-beta - rt)) ? (-beta + rt) : (-beta - rt);
          if (q != 0.0) { consider(q / delta); consider(c0 / q); }
        }
      } else if (std::abs(beta) > 1e-14 * qs) {
        consider(-c0 / (2 * beta));
      }
      if (!ok) return std::nullopt;
      y = s.x * std::cosh(best) + s.v * std::sinh(best);
      u = s.x * std::sinh(best) + s.v * std::cosh(best);
      break;
    }
  }
  RVec3 w = surface_boundary_tangent(k, b, y);
  SpaceInvolution j = constant_curvature_reflection(a, y, w, tol);
  RVec3 vout = j.apply(u);
  double side = vout.dot(b.cone * y);
  if (side > 0) vout = -vout;
  return normalize_state(k, y, vout);
}

}  // namespace caustica
