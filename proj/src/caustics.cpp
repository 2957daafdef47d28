#include "caustica/caustics.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace caustica {

namespace {

RMat3 real_adjugate(const RMat3& m) { return adjugate(m.cast<Cx>()).real(); }

RMat3 euclidean_absolute() {
  RMat3 a = RMat3::Zero();
  a(0, 0) = a(1, 1) = 1;
  return a;
}

}  // namespace

double golden_sequence(double phase, int k) {
  constexpr double golden = 0.6180339887498949;
  double v = std::fmod(phase + golden * k, 1.0);
  return v < 0 ? v + 1.0 : v;
}

ConfocalPencil ConfocalPencil::euclidean(const Conic& anchor) {
  RMat3 cm = anchor.real_matrix();
  RMat3 adj = real_adjugate(cm);
  double d = adj(2, 2);
  if (std::abs(d) <= 1e-12 * adj.cwiseAbs().maxCoeff())
    fail(ErrorCode::DegenerateConic, "anchor admits no classical confocal scaling");
  ConfocalPencil p;
  p.b = -adj / d;
  p.a = euclidean_absolute();
  return p;
}

Conic ConfocalPencil::member(double lambda, double tol) const {
  RMat3 d = b - lambda * a;
  double s = d.cwiseAbs().maxCoeff();
  if (s == 0.0 || std::abs(d.determinant()) <= tol * s * s * s)
    fail(ErrorCode::SingularParameter, "pencil member degenerates at this parameter");
  return Conic::real(real_adjugate(d));
}

Conic DualPencilFamily::member_m(double lambda) const { return Conic::real(u - lambda * a); }

Conic DualPencilFamily::member_x(double lambda, double tol) const {
  RMat3 d = u - lambda * a;
  double s = d.cwiseAbs().maxCoeff();
  if (s == 0.0 || std::abs(d.determinant()) <= tol * s * s * s)
    fail(ErrorCode::SingularParameter, "pencil member degenerates at this parameter");
  return Conic::real(real_adjugate(d));
}

std::vector<Point> DualPencilFamily::base_points() const {
  return conic_conic_intersection(Conic::real(u), Conic::real(a));
}

namespace {

void push_sample(CausticReport& rep, double res, bool swapped, double tol, double& sum) {
  bool ok = res <= tol;
  rep.rows.push_back({rep.evaluated, res, ok});
  rep.max_residual = std::max(rep.max_residual, res);
  sum += res;
  if (!ok) ++rep.failures;
  if (swapped) ++rep.permuted;
  else ++rep.fixed_count;
  ++rep.evaluated;
}

void finish_report(CausticReport& rep, int n, double sum) {
  rep.mean_residual = rep.evaluated ? sum / rep.evaluated : 0.0;
  rep.pass = rep.evaluated == n && rep.failures == 0;
}

}  // namespace

CausticReport check_complex_caustic(const ConicBoundary& b, const TransversalField& f,
                                    const Conic& alpha, int n, std::uint64_t seed, double tol) {
  std::mt19937_64 rng(seed);
  double phase = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  std::vector<double> excluded;
  if (f.kind == TransversalField::Kind::Exotic) excluded = real_locus_params(f.ecase, f.n);
  CausticReport rep;
  double sum = 0;
  for (int k = 0; rep.evaluated < n && k < 200 * n; ++k) {
    double t = b.t_lo + golden_sequence(phase, k) * (b.t_hi - b.t_lo);
    bool skip = false;
    for (double e : excluded)
      if (std::abs(t - e) < 1e-3) skip = true;
    if (skip) continue;
    try {
      Point q = b.point_at(t);
      Line tangent = polar_line(q, b.conic);
      Line trans = transversal_field_eval(b, f, q);
      PlaneInvolution inv = build_projective_involution(tangent, trans, q);
      std::array<Line, 2> tl = tangent_lines_from_point(q, alpha);
      Line i0 = reflect_line_pencil(inv, tl[0]);
      Line i1 = reflect_line_pencil(inv, tl[1]);
      double res = std::max(tangency_residual(i0, alpha), tangency_residual(i1, alpha));
      double swap_d = std::max(proj_distance(i0.h, tl[1].h), proj_distance(i1.h, tl[0].h));
      double fix_d = std::max(proj_distance(i0.h, tl[0].h), proj_distance(i1.h, tl[1].h));
      push_sample(rep, res, swap_d < fix_d, tol, sum);
    } catch (const Error&) {
      continue;  // tangency collapse or excluded configuration; draw another
    }
  }
  finish_report(rep, n, sum);
  return rep;
}

CausticReport check_invariant_curve(const DualBilliard& d, const Conic& s_star, int n,
                                    std::uint64_t seed, double tol) {
  std::mt19937_64 rng(seed);
  double phase = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  std::vector<double> excluded;
  if (d.field.kind == TransversalField::Kind::Exotic)
    excluded = real_locus_params(d.field.ecase, d.field.n);
  CausticReport rep;
  double sum = 0;
  for (int k = 0; rep.evaluated < n && k < 200 * n; ++k) {
    double t = d.primal.t_lo + golden_sequence(phase, k) * (d.primal.t_hi - d.primal.t_lo);
    bool skip = false;
    for (double e : excluded)
      if (std::abs(t - e) < 1e-3) skip = true;
    if (skip) continue;
    try {
      Line lp = dual_tangent_at(d, t);
      std::array<Point, 2> w = line_conic_points(lp, s_star);
      Point j0 = dual_reflect(d, t, w[0]);
      Point j1 = dual_reflect(d, t, w[1]);
      double swap_d = std::max(proj_distance(j0.h, w[1].h), proj_distance(j1.h, w[0].h));
      double fix_d = std::max(proj_distance(j0.h, w[0].h), proj_distance(j1.h, w[1].h));
      push_sample(rep, std::min(swap_d, fix_d), swap_d < fix_d, tol, sum);
    } catch (const Error&) {
      continue;
    }
  }
  finish_report(rep, n, sum);
  return rep;
}

Vec2 ImplicitCurve::point_at(double theta) const {
  Vec2 dir(std::cos(theta), std::sin(theta));
  double r = r0;
  for (int it = 0; it < 80; ++it) {
    Vec2 p = r * dir;
    double g = f(p[0], p[1]);
    double dg = grad(p[0], p[1]).dot(dir);
    if (std::abs(dg) < 1e-14)
      fail(ErrorCode::SingularCurvePoint, "radial derivative vanishes during the solve");
    double step = g / dg;
    r -= step;
    if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(r))) return r * dir;
  }
  fail(ErrorCode::NoConvergence, "radial solve did not converge");
}

Vec2 ImplicitCurve::tangent_at(const Vec2& p) const {
  Vec2 g = grad(p[0], p[1]);
  if (g.norm() < 1e-10)
    fail(ErrorCode::SingularCurvePoint, "gradient vanishes at the sampled point");
  return Vec2(-g[1], g[0]);
}

ImplicitCurve quartic_oval(double a) {
  ImplicitCurve c;
  c.f = [a](double x, double y) {
    double u = x / a;
    return u * u * u * u + y * y * y * y - 1.0;
  };
  c.grad = [a](double x, double y) {
    double u = x / a;
    return Vec2(4.0 * u * u * u / a, 4.0 * y * y * y);
  };
  c.r0 = a;
  return c;
}

CausticReport check_oval_caustic(const ImplicitCurve& c, const Conic& alpha, int n,
                                 std::uint64_t seed, double tol) {
  std::mt19937_64 rng(seed);
  double phase = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  CausticReport rep;
  double sum = 0;
  const double two_pi = 2.0 * std::numbers::pi;
  for (int k = 0; rep.evaluated < n && k < 200 * n; ++k) {
    double theta = golden_sequence(phase, k) * two_pi;
    try {
      Vec2 xy = c.point_at(theta);
      Vec2 tau = c.tangent_at(xy);
      Vec2 g = c.grad(xy[0], xy[1]);
      Point q = Point::affine(xy[0], xy[1]);
      Line tangent = Line::through_dir(q, Cx(tau[0]), Cx(tau[1]));
      Line normal = Line::through_dir(q, Cx(g[0]), Cx(g[1]));
      PlaneInvolution inv = build_projective_involution(tangent, normal, q);
      std::array<Line, 2> tl = tangent_lines_from_point(q, alpha);
      Line i0 = reflect_line_pencil(inv, tl[0]);
      Line i1 = reflect_line_pencil(inv, tl[1]);
      double res = std::max(tangency_residual(i0, alpha), tangency_residual(i1, alpha));
      double swap_d = std::max(proj_distance(i0.h, tl[1].h), proj_distance(i1.h, tl[0].h));
      double fix_d = std::max(proj_distance(i0.h, tl[0].h), proj_distance(i1.h, tl[1].h));
      push_sample(rep, res, swap_d < fix_d, tol, sum);
    } catch (const Error&) {
      continue;
    }
  }
  finish_report(rep, n, sum);
  return rep;
}

std::vector<TangencySample> tangential_correspondence_samples(const ImplicitCurve& c,
                                                              const Conic& alpha, int n,
                                                              std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  double phase = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  std::vector<TangencySample> out;
  const double two_pi = 2.0 * std::numbers::pi;
  int produced = 0;
  for (int k = 0; produced < n && k < 200 * n; ++k) {
    double theta = golden_sequence(phase, k) * two_pi;
    try {
      Vec2 xy = c.point_at(theta);
      Point a = Point::affine(xy[0], xy[1]);
      std::array<Line, 2> tl = tangent_lines_from_point(a, alpha);
      for (const Line& l : tl) out.push_back({a, pole_of_line(l, alpha), l});
      ++produced;
    } catch (const Error&) {
      continue;
    }
  }
  return out;
}

CausticReport check_absolute_caustic(SurfaceKind k, const SurfaceBoundary& b, int n,
                                     std::uint64_t seed, double tol) {
  if (k == SurfaceKind::Plane)
    fail(ErrorCode::UnsupportedSignature, "degenerate absolute: use the curved models");
  RMat3 form = surface_form(k);
  ConicChart chart = conic_trig_chart(Conic::real(b.cone));
  std::mt19937_64 rng(seed);
  double phase = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  CausticReport rep;
  double sum = 0;
  const double two_pi = 2.0 * std::numbers::pi;
  for (int i = 0; rep.evaluated < n && i < 200 * n; ++i) {
    double t = golden_sequence(phase, i) * two_pi;
    try {
      RVec3 y = lift_to_surface(k, chart.at(t));
      RVec3 w = surface_boundary_tangent(k, b, y);
      RVec3 nv = real_adjugate(form) * y.cross(w);
      double sw = w.dot(form * w), sn = nv.dot(form * nv);
      if (sw <= 1e-12 || sn <= 1e-12)
        fail(ErrorCode::DegenerateRestriction, "tangent frame is not spacelike");
      SpaceInvolution j = constant_curvature_reflection(form, y, w);
      Vec3 e1 = (w / std::sqrt(sw)).cast<Cx>();
      Vec3 e2 = (nv / std::sqrt(sn)).cast<Cx>();
      Vec3 up = e1 + Cx(0, 1) * e2, um = e1 - Cx(0, 1) * e2;
      Vec3 yc = y.cast<Cx>();
      Vec3 mp = bilinear_cross(yc, up), mm = bilinear_cross(yc, um);
      Vec3 ip = bilinear_cross(yc, j.j.cast<Cx>() * up);
      Vec3 im = bilinear_cross(yc, j.j.cast<Cx>() * um);
      double swap_d = std::max(proj_distance(ip, mm), proj_distance(im, mp));
      double fix_d = std::max(proj_distance(ip, mp), proj_distance(im, mm));
      push_sample(rep, std::min(swap_d, fix_d), swap_d < fix_d, tol, sum);
    } catch (const Error&) {
      continue;  // off-surface chart point or degenerate frame
    }
  }
  finish_report(rep, n, sum);
  return rep;
}

}  // namespace caustica
