#include "caustica/billiard.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace caustica {

namespace {

const struct { ExoticCase c; const char* name; } kCaseNames[] = {
    {ExoticCase::C2a1, "2a1"}, {ExoticCase::C2a2, "2a2"}, {ExoticCase::C2b1, "2b1"},
    {ExoticCase::C2b2, "2b2"}, {ExoticCase::C2c1, "2c1"}, {ExoticCase::C2c2, "2c2"},
    {ExoticCase::C2d, "2d"},
};

// coefficients (ascending) of a polynomial sampled at integer nodes
std::vector<double> interp_poly(int deg, const std::function<double(double)>& f) {
  int n = deg + 1;
  Eigen::MatrixXd vand(n, n);
  Eigen::VectorXd rhs(n);
  for (int i = 0; i < n; ++i) {
    double x = i - deg / 2.0;
    double p = 1;
    for (int j = 0; j < n; ++j) { vand(i, j) = p; p *= x; }
    rhs[i] = f(x);
  }
  Eigen::VectorXd c = vand.colPivHouseholderQr().solve(rhs);
  return std::vector<double>(c.data(), c.data() + n);
}

int poly_degree(const std::vector<double>& c, double tol = 1e-9) {
  double top = 0;
  for (double x : c) top = std::max(top, std::abs(x));
  int d = -1;
  for (int i = 0; i < (int)c.size(); ++i)
    if (std::abs(c[i]) > tol * top) d = i;
  return d;
}

std::vector<Cx> poly_roots(std::vector<double> c) {
  int d = poly_degree(c);
  std::vector<Cx> roots;
  if (d <= 0) return roots;
  Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(d, d);
  for (int i = 0; i < d; ++i) comp(i, d - 1) = Cx(-c[i] / c[d]);
  for (int i = 1; i < d; ++i) comp(i, i - 1) = Cx(1);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp);
  for (int i = 0; i < d; ++i) roots.push_back(chop_im(es.eigenvalues()[i]));
  std::sort(roots.begin(), roots.end(), [](const Cx& a, const Cx& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return roots;
}

}  // namespace

const char* exotic_name(ExoticCase c) {
  for (const auto& e : kCaseNames)
    if (e.c == c) return e.name;
  return "?";
}

std::optional<ExoticCase> exotic_from_name(const std::string& s) {
  for (const auto& e : kCaseNames)
    if (s == e.name) return e.c;
  return std::nullopt;
}

bool exotic_needs_degree(ExoticCase c) {
  return c == ExoticCase::C2a1 || c == ExoticCase::C2a2;
}

const std::vector<ExoticCase>& all_exotic_cases() {
  static const std::vector<ExoticCase> cases = {
      ExoticCase::C2a1, ExoticCase::C2a2, ExoticCase::C2b1, ExoticCase::C2b2,
      ExoticCase::C2c1, ExoticCase::C2c2, ExoticCase::C2d};
  return cases;
}

double exotic_rho(ExoticCase c, int n) {
  if (n < 1) fail(ErrorCode::InvalidCase, "family index must be >= 1");
  if (c == ExoticCase::C2a1) return 2.0 - 2.0 / (2 * n + 1);
  if (c == ExoticCase::C2a2) return 2.0 - 1.0 / (n + 1);
  fail(ErrorCode::InvalidCase, "only the 2a families carry a parameter rho");
}

Vec2 exotic_field_dir(ExoticCase c, int n, double x1, double x2) {
  switch (c) {
    case ExoticCase::C2a1:
    case ExoticCase::C2a2: {
      double rho = exotic_rho(c, n);
      return Vec2(rho, 2 * (rho - 2) * x1);
    }
    case ExoticCase::C2b1: return Vec2(5 * x1 + 3, 2 * (x2 - x1));
    case ExoticCase::C2b2: return Vec2(3 * x1, 2 * x2 - 4);
    case ExoticCase::C2c1: return Vec2(x2, x1 * x2 - 1);
    case ExoticCase::C2c2: return Vec2(2 * x1 + 1, x2 - x1);
    case ExoticCase::C2d:  return Vec2(7 * x1 + 4, 2 * x2 - 4 * x1);
  }
  fail(ErrorCode::InvalidCase, "unknown exotic case");
}

std::vector<Point> exotic_tangency_locus(ExoticCase c, int n) {
  // tangency at (t, t^2): 2t f1 - f2 = 0 along the curve
  auto par = [&](double t) {
    Vec2 f = exotic_field_dir(c, n, t, t * t);
    return 2 * t * f[0] - f[1];
  };
  std::vector<double> coeffs = interp_poly(3, par);
  std::vector<Point> out;
  for (const Cx& t : poly_roots(coeffs)) out.emplace_back(t, t * t, Cx(1));
  // the infinite point of the parabola belongs to the locus iff the line
  // joining (t, t^2) to the field direction converges to the tangent there,
  // i.e. the third line coordinate dominates as t grows
  auto lc = [&](int k) {
    return interp_poly(5, [&](double t) {
      Vec2 f = exotic_field_dir(c, n, t, t * t);
      double l[3] = {-f[1], f[0], t * f[1] - t * t * f[0]};
      return l[k];
    });
  };
  int d0 = poly_degree(lc(0)), d1 = poly_degree(lc(1)), d2 = poly_degree(lc(2));
  if (d2 > std::max(d0, d1)) out.emplace_back(Cx(0), Cx(1), Cx(0));
  return out;
}

ConicBoundary ConicBoundary::ellipse(double a, double b) {
  if (!(a > 0) || !(b > 0)) fail(ErrorCode::DegenerateConic, "ellipse semi-axes must be positive");
  ConicBoundary out;
  out.shape = (a == b) ? Shape::Circle : Shape::Ellipse;
  RMat3 m = RVec3(1 / (a * a), 1 / (b * b), -1.0).asDiagonal();
  out.cm = m;
  out.conic = Conic::real(m);
  out.ea = a;
  out.eb = b;
  out.closed = true;
  out.t_lo = 0;
  out.t_hi = 2 * M_PI;
  return out;
}

ConicBoundary ConicBoundary::circle(double r) { return ellipse(r, r); }

ConicBoundary ConicBoundary::parabola(double span) {
  ConicBoundary out;
  out.shape = Shape::Parabola;
  RMat3 m;
  m << 1, 0, 0,
       0, 0, -0.5,
       0, -0.5, 0;  // x1^2 - x2 x3, epigraph negative
  out.cm = m;
  out.conic = Conic::real(m);
  out.closed = false;
  out.t_lo = -span;
  out.t_hi = span;
  return out;
}

ConicBoundary ConicBoundary::general(const Conic& c, const RVec3& interior_witness) {
  if (c.classify() != ConicClass::Regular)
    fail(ErrorCode::DegenerateConic, "boundary conic must be regular");
  ConicBoundary out;
  out.shape = Shape::General;
  RMat3 m = c.real_matrix();
  double val = interior_witness.dot(m * interior_witness);
  if (val == 0.0) fail(ErrorCode::DegenerateConic, "interior witness lies on the conic");
  if (val > 0.0) m = -m;
  out.cm = m;
  out.conic = Conic::real(m);
  out.chart = conic_trig_chart(out.conic);
  out.closed = true;
  out.t_lo = 0;
  out.t_hi = 2 * M_PI;
  return out;
}

Point ConicBoundary::point_at(double t) const {
  switch (shape) {
    case Shape::Ellipse:
    case Shape::Circle: return Point::affine(ea * std::cos(t), eb * std::sin(t));
    case Shape::Parabola: return Point::affine(t, t * t);
    case Shape::General: return chart.at(t);
  }
  fail(ErrorCode::InvalidCase, "unknown boundary shape");
}

Vec2 ConicBoundary::tangent_dir(double t) const {
  switch (shape) {
    case Shape::Ellipse:
    case Shape::Circle: return Vec2(-ea * std::sin(t), eb * std::cos(t));
    case Shape::Parabola: return Vec2(1.0, 2.0 * t);
    case Shape::General: {
      Vec3 vel = chart.velocity(t);
      Point p = chart.at(t);
      // affine velocity of p(t) = (x/z, y/z)
      Cx z = p.h[2];
      if (std::abs(z) < kTol) fail(ErrorCode::SingularParameter, "chart point at infinity");
      Vec3 raw = chart.T.cast<Cx>() * Vec3(std::cos(t), std::sin(t), 1.0);
      Cx dz = vel[2], zz = raw[2];
      Vec2 out((vel[0] / zz - raw[0] * dz / (zz * zz)).real(),
               (vel[1] / zz - raw[1] * dz / (zz * zz)).real());
      return out;
    }
  }
  fail(ErrorCode::InvalidCase, "unknown boundary shape");
}

Line ConicBoundary::tangent_line_at(double t) const { return polar_line(point_at(t), conic); }

bool ConicBoundary::contains(const Point& p, double tol) const {
  double scale = cm.cwiseAbs().maxCoeff() * p.h.squaredNorm();
  return std::abs(conic_eval(conic, p)) <= 1e3 * tol * scale;
}

TransversalField TransversalField::normal() { return TransversalField{}; }

TransversalField TransversalField::dual_pencil(const Conic& s) {
  TransversalField f;
  f.kind = Kind::DualPencil;
  f.s = s;
  return f;
}

TransversalField TransversalField::exotic(ExoticCase c, int n) {
  TransversalField f;
  f.kind = Kind::Exotic;
  f.ecase = c;
  f.n = n;
  return f;
}

Line transversal_field_eval(const ConicBoundary& b, const TransversalField& f,
                            const Point& x, double tol) {
  if (!b.contains(x, tol)) fail(ErrorCode::OffBoundary, "field evaluated off the boundary");
  Line tangent = polar_line(x, b.conic);
  Line out;
  switch (f.kind) {
    case TransversalField::Kind::Normal: {
      Vec3 td = line_direction(tangent);
      out = Line(bilinear_cross(x.h, Vec3(-td[1], td[0], Cx(0))));
      break;
    }
    case TransversalField::Kind::DualPencil: {
      Point pole = pole_of_line(tangent, f.s);
      if (proj_equal(pole, x, 1e-9))
        fail(ErrorCode::SingularPoint, "pole coincides with the boundary point");
      out = join(x, pole);
      break;
    }
    case TransversalField::Kind::Exotic: {
      if (b.shape != ConicBoundary::Shape::Parabola)
        fail(ErrorCode::InvalidCase, "exotic fields live on the standard parabola");
      Vec2 xy = x.affine_xy();
      Vec2 dir = exotic_field_dir(f.ecase, f.n, xy[0], xy[1]);
      if (dir.norm() == 0.0) fail(ErrorCode::SingularPoint, "field vanishes at this point");
      out = Line::through_dir(x, Cx(dir[0]), Cx(dir[1]));
      break;
    }
  }
  if (proj_distance(out.h, tangent.h) < 1e-7)
    fail(ErrorCode::SingularPoint, "field is tangent to the boundary here");
  return out;
}

Line PhaseState::line() const {
  return Line::through_dir(Point::affine(pos[0], pos[1]), Cx(dir[0]), Cx(dir[1]));
}

std::optional<PhaseState> billiard_step(const ConicBoundary& b, const TransversalField& f,
                                        const PhaseState& s, double tol) {
  double dn = s.dir.norm();
  if (dn == 0.0) fail(ErrorCode::ZeroVelocity, "zero direction");
  Vec2 v = s.dir / dn;
  RVec3 r0(s.pos[0], s.pos[1], 1.0);
  RVec3 vv(v[0], v[1], 0.0);
  double qa = vv.dot(b.cm * vv);
  double qb = r0.dot(b.cm * vv);
  double qc = r0.dot(b.cm * r0);
  constexpr double kStepFloor = 1e-7;
  double best = -1.0;
  double qs = std::abs(qa) + std::abs(qb) + std::abs(qc);
  if (std::abs(qa) > 1e-14 * qs) {
    double disc = qb * qb - qa * qc;
    if (disc >= 0.0) {
      double rt = std::sqrt(disc);
      double q = (std::abs(-qb + rt) >= std::abs(-qb - rt)) ? (-qb + rt) : (-qb - rt);
      if (q != 0.0) {
        double s1 = q / qa, s2 = qc / q;
        for (double cand : {s1, s2})
          if (cand > kStepFloor) best = std::max(best, cand);
      }
    }
  } else if (std::abs(qb) > 1e-14 * qs) {
    double cand = -qc / (2 * qb);
    if (cand > kStepFloor) best = cand;
  }
  if (best <= 0.0) return std::nullopt;
  Vec2 hit = s.pos + best * v;
  Point hp = Point::affine(hit[0], hit[1]);
  try {
    Line tangent = polar_line(hp, b.conic);
    Line trans = transversal_field_eval(b, f, hp, tol);
    PlaneInvolution inv = build_projective_involution(tangent, trans, hp, tol);
    Cx2 img = inv.apply(Cx2(Cx(v[0]), Cx(v[1])));
    Vec2 nd(chop_im(img[0]).real(), chop_im(img[1]).real());
    if (nd.norm() == 0.0) fail(ErrorCode::SingularReflection, "reflected direction vanishes");
    nd.normalize();
    RVec3 h3(hit[0], hit[1], 1.0);
    RVec3 grad = b.cm * h3;
    double side = nd[0] * grad[0] + nd[1] * grad[1];
    if (side > 0) nd = -nd;
    return PhaseState{hit, nd};
  } catch (const Error& e) {
    if (e.code() == ErrorCode::SingularPoint || e.code() == ErrorCode::CoincidentEigenlines)
      fail(ErrorCode::SingularReflection, e.what());
    throw;
  }
}

std::vector<PhaseState> billiard_orbit(const ConicBoundary& b, const TransversalField& f,
                                       const PhaseState& s0, int steps, double tol) {
  std::vector<PhaseState> orbit{s0};
  PhaseState cur = s0;
  for (int i = 0; i < steps; ++i) {
    std::optional<PhaseState> nxt = billiard_step(b, f, cur, tol);
    if (!nxt) break;
    cur = *nxt;
    orbit.push_back(cur);
  }
  return orbit;
}

DualBilliard dualize_billiard(const ConicBoundary& b, const TransversalField& f) {
  return DualBilliard{dualize_conic(b.conic), b, f};
}

Point dual_point_at(const DualBilliard& d, double t) {
  return line_dual_point(d.primal.tangent_line_at(t));
}

Line dual_tangent_at(const DualBilliard& d, double t) {
  return point_dual_line(d.primal.point_at(t));
}

Point dual_reflect(const DualBilliard& d, double t, const Point& a, double tol) {
  Point q = d.primal.point_at(t);
  Line tangent = d.primal.tangent_line_at(t);
  Line trans = transversal_field_eval(d.primal, d.field, q, tol);
  Line la = point_dual_line(a);
  if (std::abs(incidence(la, q)) > 1e3 * tol * q.h.norm())
    fail(ErrorCode::NotThroughPoint, "argument does not lie on the dual tangent line");
  Line img = harmonic_conjugate(tangent, trans, la, tol);
  return line_dual_point(img);
}

}  // namespace caustica
