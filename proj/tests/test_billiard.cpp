#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "caustica/billiard.hpp"
#include "caustica/caustics.hpp"
#include "doctest.h"

using namespace caustica;

namespace {

constexpr double kPi = 3.14159265358979323846;

std::mt19937_64 rng_for(std::uint64_t seed) { return std::mt19937_64(seed); }

double unit(std::mt19937_64& g) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  return u(g);
}

double conic_residual(const Point& p, const Conic& c) {
  Cx v = p.h.cwiseProduct(c.m * p.h).sum();
  return std::abs(v) / (c.m.cwiseAbs().maxCoeff() * p.h.squaredNorm());
}

// orient d so that pos + eps d enters the interior { x^T cm x < 0 }
Vec2 inward(const ConicBoundary& b, const Vec2& pos, Vec2 d) {
  RVec3 x(pos[0], pos[1], 1.0);
  RVec3 dh(d[0], d[1], 0.0);
  if (dh.dot(b.cm * x) > 0) d = -d;
  return d / d.norm();
}

double cross2(const Vec2& a, const Vec2& b) { return a[0] * b[1] - a[1] * b[0]; }

template <typename Fn>
ErrorCode code_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::ZeroVector;
}

}  // namespace

TEST_CASE("boundary parametrizations lie on their conic with matching tangents") {
  ConicBoundary tables[] = {
      ConicBoundary::ellipse(2.0, 1.0), ConicBoundary::circle(1.5), ConicBoundary::parabola(3.0),
      ConicBoundary::general(Conic::real(RVec3(0.25, 1.0, -1.0).asDiagonal()), RVec3(0, 0, 1))};
  auto g = rng_for(71);
  for (const ConicBoundary& b : tables) {
    for (int i = 0; i < 50; ++i) {
      double t = b.t_lo + (unit(g) * 0.5 + 0.5) * (b.t_hi - b.t_lo);
      Point p = b.point_at(t);
      CHECK(conic_residual(p, b.conic) < 1e-12);
      CHECK(b.contains(p, 1e-9));
      Line l = b.tangent_line_at(t);
      CHECK(std::abs(incidence(l, p)) < 1e-10 * l.h.norm() * p.h.norm());
      CHECK(tangency_residual(l, b.conic) < 1e-10);
      Vec2 d = b.tangent_dir(t);
      Vec3 ld = line_direction(l);
      CHECK(std::abs(d[0] * ld[1] - d[1] * ld[0]) < 1e-9 * d.norm() * ld.norm());
    }
  }
  CHECK(ConicBoundary::parabola().closed == false);
  CHECK(ConicBoundary::ellipse(2.0, 1.0).closed == true);
}

TEST_CASE("exotic field directions match their closed forms") {
  Vec2 f = exotic_field_dir(ExoticCase::C2a1, 1, 1.0, 1.0);
  CHECK(std::abs(f[0] * (-1.0) - f[1] * 1.0) < 1e-14);  // parallel to (1,-1)
  CHECK(std::abs(exotic_rho(ExoticCase::C2a1, 1) - 4.0 / 3.0) < 1e-15);
  CHECK(std::abs(exotic_rho(ExoticCase::C2a2, 1) - 3.0 / 2.0) < 1e-15);

  Vec2 f22 = exotic_field_dir(ExoticCase::C2b2, 1, 2.0, 4.0);
  CHECK(f22.isApprox(Vec2(6.0, 4.0), 1e-14));

  CHECK(code_of([] { exotic_rho(ExoticCase::C2b1, 1); }) == ErrorCode::InvalidCase);
  CHECK(code_of([] { exotic_rho(ExoticCase::C2a1, 0); }) == ErrorCode::InvalidCase);

  CHECK(all_exotic_cases().size() == 7);
  for (ExoticCase c : all_exotic_cases()) {
    CHECK(exotic_from_name(exotic_name(c)) == c);
    CHECK(exotic_needs_degree(c) == (c == ExoticCase::C2a1 || c == ExoticCase::C2a2));
  }
  CHECK(!exotic_from_name("2z9").has_value());
}

TEST_CASE("exotic tangency loci have the expected points on the parabola") {
  struct Expect {
    ExoticCase c;
    int n;
    int finite;
    bool infinite;
  };
  Expect table[] = {{ExoticCase::C2a1, 1, 1, true},  {ExoticCase::C2a1, 3, 1, true},
                    {ExoticCase::C2a2, 2, 1, true},  {ExoticCase::C2b1, 1, 2, true},
                    {ExoticCase::C2b2, 1, 2, true},  {ExoticCase::C2c1, 1, 3, false},
                    {ExoticCase::C2c2, 1, 2, true},  {ExoticCase::C2d, 1, 2, true}};
  for (const Expect& e : table) {
    std::vector<Point> locus = exotic_tangency_locus(e.c, e.n);
    int fin = 0;
    bool inf = false;
    for (const Point& p : locus) {
      if (p.is_infinite()) {
        inf = true;
        CHECK(proj_equal(p, Point(Cx(0), Cx(1), Cx(0)), 1e-12));
        continue;
      }
      ++fin;
      Cx x1 = p.h[0] / p.h[2], x2 = p.h[1] / p.h[2];
      CHECK(std::abs(x2 - x1 * x1) < 1e-10);  // lies on the curve
      if (std::abs(x1.imag()) < 1e-12) {
        // at real locus points the field is parallel to the curve tangent
        Vec2 fd = exotic_field_dir(e.c, e.n, x1.real(), x2.real());
        CHECK(std::abs(2 * x1.real() * fd[0] - fd[1]) < 1e-9 * (1 + fd.norm()));
      }
    }
    CHECK(fin == e.finite);
    CHECK(inf == e.infinite);
  }

  // case-specific algebraic positions of the finite points
  auto finite_x1 = [](ExoticCase c, int n) {
    std::vector<Cx> out;
    for (const Point& p : exotic_tangency_locus(c, n))
      if (!p.is_infinite()) out.push_back(p.h[0] / p.h[2]);
    return out;
  };
  for (Cx x1 : finite_x1(ExoticCase::C2a1, 2)) CHECK(std::abs(x1) < 1e-12);
  for (Cx x1 : finite_x1(ExoticCase::C2b2, 1)) CHECK(std::abs(x1 * x1 + 1.0) < 1e-10);
  for (Cx x1 : finite_x1(ExoticCase::C2c1, 1)) CHECK(std::abs(x1 * x1 * x1 + 1.0) < 1e-10);
  std::vector<Cx> b1 = finite_x1(ExoticCase::C2b1, 1);
  REQUIRE(b1.size() == 2);
  CHECK(std::abs(b1[0] + 1.0) < 1e-10);  // ordered by real part: -1 before 0
  CHECK(std::abs(b1[1]) < 1e-10);
}

TEST_CASE("transversal field evaluation covers the three field kinds") {
  ConicBoundary circ = ConicBoundary::circle(1.0);
  Point right = circ.point_at(0.0);  // (1, 0)

  // concentric generator: the pole of the tangent stays on the radius
  Conic big = Conic::real(RVec3(1.0, 1.0, -4.0).asDiagonal());
  Line tr = transversal_field_eval(circ, TransversalField::dual_pencil(big), right);
  CHECK(proj_equal(tr, Line(Cx(0), Cx(1), Cx(0)), 1e-10));  // the x axis

  // normal field on a circle: every transversal passes through the center
  auto g = rng_for(72);
  for (int i = 0; i < 30; ++i) {
    double t = 2 * kPi * (unit(g) * 0.5 + 0.5);
    Line n = transversal_field_eval(circ, TransversalField::normal(), circ.point_at(t));
    CHECK(std::abs(incidence(n, Point(Cx(0), Cx(0), Cx(1)))) < 1e-10 * n.h.norm());
  }

  // generator equal to the table: the pole is the base point itself
  CHECK(code_of([&] {
          transversal_field_eval(circ, TransversalField::dual_pencil(circ.conic), right);
        }) == ErrorCode::SingularPoint);

  // generator tangent to the table at the sample point: same degeneration
  RMat3 sm;
  sm << 1, 0, -3, 0, 1, 0, -3, 0, 5;  // circle of radius 2 centered at (3, 0)
  CHECK(code_of([&] {
          transversal_field_eval(circ, TransversalField::dual_pencil(Conic::real(sm)), right);
        }) == ErrorCode::SingularPoint);

  // exotic fields only live on the parabola
  CHECK(code_of([&] {
          transversal_field_eval(circ, TransversalField::exotic(ExoticCase::C2b1), right);
        }) == ErrorCode::InvalidCase);

  // at a tangency-locus point the exotic transversal degenerates
  ConicBoundary par = ConicBoundary::parabola();
  CHECK(code_of([&] {
          transversal_field_eval(par, TransversalField::exotic(ExoticCase::C2b1),
                                 Point::affine(-1.0, 1.0));
        }) == ErrorCode::SingularPoint);
  CHECK(code_of([&] {
          transversal_field_eval(par, TransversalField::exotic(ExoticCase::C2b1),
                                 Point::affine(2.0, 2.0));
        }) == ErrorCode::OffBoundary);

  // regular exotic sample: the transversal follows the field direction
  Point q = Point::affine(1.0, 1.0);
  Line ex = transversal_field_eval(par, TransversalField::exotic(ExoticCase::C2b2), q);
  Vec2 fd = exotic_field_dir(ExoticCase::C2b2, 1, 1.0, 1.0);
  CHECK(proj_equal(ex, Line::through_dir(q, Cx(fd[0]), Cx(fd[1])), 1e-10));
}

TEST_CASE("circular billiard conserves the chord length and the caustic radius") {
  ConicBoundary b = ConicBoundary::circle(1.0);
  PhaseState s0{Vec2(0.3, -0.2), inward(b, Vec2(0.3, -0.2), Vec2(0.7, 0.45))};
  std::vector<PhaseState> orbit = billiard_orbit(b, TransversalField::normal(), s0, 60);
  REQUIRE(orbit.size() == 61);

  double rc = std::abs(cross2(s0.pos, s0.dir));
  double chord = -1;
  for (std::size_t k = 1; k < orbit.size(); ++k) {
    CHECK(std::abs(orbit[k].pos.norm() - 1.0) < 1e-10);
    CHECK(std::abs(std::abs(cross2(orbit[k].pos, orbit[k].dir)) - rc) < 1e-10);
    CHECK(std::abs(orbit[k].dir.norm() - 1.0) < 1e-12);
    if (k >= 2) {
      double len = (orbit[k].pos - orbit[k - 1].pos).norm();
      if (chord < 0) chord = len;
      CHECK(std::abs(len - chord) < 1e-9);
    }
  }
}

TEST_CASE("elliptical billiard orbits stay tangent to a confocal conic") {
  ConicBoundary b = ConicBoundary::ellipse(2.0, 1.0);
  ConfocalPencil pencil = ConfocalPencil::euclidean(b.conic);
  Conic member = pencil.member(0.5);

  Point p = b.point_at(0.7);
  auto tl = tangent_lines_from_point(p, member);
  Vec3 ld = line_direction(tl[0]);
  Vec2 d(ld[0].real(), ld[1].real());
  PhaseState s0{p.affine_xy(), inward(b, p.affine_xy(), d)};

  std::vector<PhaseState> orbit = billiard_orbit(b, TransversalField::normal(), s0, 100);
  REQUIRE(orbit.size() == 101);
  for (std::size_t k = 0; k < orbit.size(); ++k) {
    CHECK(tangency_residual(orbit[k].line(), member) < 1e-9);
    if (k >= 1) CHECK(conic_residual(orbit[k].point(), b.conic) < 1e-10);
  }
}

TEST_CASE("parabola orbits bounce on the curve and escape upward") {
  ConicBoundary b = ConicBoundary::parabola();
  TransversalField f = TransversalField::exotic(ExoticCase::C2b2);
  PhaseState s0{Vec2(0.5, 2.0), Vec2(0.2, -1.0).normalized()};
  std::vector<PhaseState> orbit = billiard_orbit(b, f, s0, 30);
  REQUIRE(orbit.size() >= 3);  // at least two bounces before any escape
  for (std::size_t k = 1; k < orbit.size(); ++k)
    CHECK(conic_residual(orbit[k].point(), b.conic) < 1e-9);

  // moving straight up from the interior never meets the boundary again
  PhaseState up{Vec2(0.0, 1.0), Vec2(0.0, 1.0)};
  CHECK(!billiard_step(b, f, up).has_value());
}

TEST_CASE("surface lifts follow the hemisphere and sheet conventions") {
  RVec3 s = lift_to_surface(SurfaceKind::Sphere, Point(Cx(1), Cx(1), Cx(1)));
  CHECK(s.isApprox(RVec3(1, 1, 1) / std::sqrt(3.0), 1e-13));
  CHECK(lift_to_surface(SurfaceKind::Sphere, Point(Cx(0), Cx(0), Cx(1))).isApprox(RVec3(0, 0, 1)));

  RVec3 h = lift_to_surface(SurfaceKind::Hyperbolic, Point(Cx(1), Cx(2), Cx(10)));
  CHECK(h.isApprox(RVec3(1, 2, 10) / std::sqrt(95.0), 1e-13));
  CHECK(std::abs(h[0] * h[0] + h[1] * h[1] - h[2] * h[2] + 1.0) < 1e-13);

  RVec3 pl = lift_to_surface(SurfaceKind::Plane, Point(Cx(3), Cx(4), Cx(2)));
  CHECK(pl.isApprox(RVec3(1.5, 2.0, 1.0), 1e-13));

  auto g = rng_for(73);
  for (int i = 0; i < 60; ++i) {
    // stay inside the unit disc so the hyperbolic lift exists
    Point p = Point::affine(0.65 * unit(g), 0.65 * unit(g));
    for (SurfaceKind k : {SurfaceKind::Plane, SurfaceKind::Sphere, SurfaceKind::Hyperbolic}) {
      RVec3 x = lift_to_surface(k, p);
      CHECK(proj_distance(project_to_plane(x).h, p.h) < 1e-12);
    }
  }

  // the second hyperbolic sheet is reached through the same projective point
  CHECK(lift_to_surface(SurfaceKind::Hyperbolic, Point(Cx(0), Cx(0), Cx(-1)))
            .isApprox(RVec3(0, 0, 1), 1e-13));
  // points on or outside the absolute have no hyperbolic lift
  CHECK(code_of([] { lift_to_surface(SurfaceKind::Hyperbolic, Point(Cx(1), Cx(0), Cx(0))); }) ==
        ErrorCode::OutsideDomain);
  CHECK(code_of([] { lift_to_surface(SurfaceKind::Hyperbolic, Point(Cx(2), Cx(0), Cx(1))); }) ==
        ErrorCode::OutsideDomain);
  CHECK(code_of([] { lift_to_surface(SurfaceKind::Plane, Point(Cx(1), Cx(1), Cx(0))); }) ==
        ErrorCode::OutsideDomain);
}

TEST_CASE("spherical cap billiard conserves the axial momentum and the impact angle") {
  // latitude z = 0.8 as the boundary of a polar cap
  double z0 = 0.8;
  RMat3 cone = RVec3(1.0, 1.0, -(1.0 - z0 * z0) / (z0 * z0)).asDiagonal();
  SurfaceBoundary b = SurfaceBoundary::make(cone, RVec3(0, 0, 1));

  SurfaceState s = normalize_state(SurfaceKind::Sphere, RVec3(0.05, -0.02, 1.0),
                                   RVec3(0.6, 0.25, 0.0));
  double lz = s.x[0] * s.v[1] - s.x[1] * s.v[0];
  double angle = -10;
  for (int k = 0; k < 50; ++k) {
    std::optional<SurfaceState> nxt = surface_billiard_step(SurfaceKind::Sphere, b, s);
    REQUIRE(nxt.has_value());
    s = *nxt;
    CHECK(std::abs(s.x.norm() - 1.0) < 1e-10);                       // on the sphere
    CHECK(std::abs(s.x.dot(s.v)) < 1e-10);                           // tangent velocity
    CHECK(std::abs(s.x.dot(cone * s.x)) < 1e-9);                     // on the boundary
    CHECK(std::abs(s.x[0] * s.v[1] - s.x[1] * s.v[0] - lz) < 1e-10);  // axial momentum
    RVec3 w = surface_boundary_tangent(SurfaceKind::Sphere, b, s.x);
    double ca = std::abs(s.v.dot(w)) / (s.v.norm() * w.norm());
    if (angle < -1) angle = ca;
    CHECK(std::abs(ca - angle) < 1e-9);  // equal impact angles at every bounce
  }
}

TEST_CASE("hyperbolic billiard conserves the rotational momentum and the speed") {
  RMat3 form = surface_form(SurfaceKind::Hyperbolic);
  RMat3 cone = RVec3(1.0, 1.0, -0.5).asDiagonal();
  SurfaceBoundary b = SurfaceBoundary::make(cone, RVec3(0, 0, 1));

  SurfaceState s = normalize_state(SurfaceKind::Hyperbolic, RVec3(0.1, 0.05, 1.0),
                                   RVec3(0.3, 0.7, 0.0));
  double j = s.x[0] * s.v[1] - s.x[1] * s.v[0];
  double speed = s.v.dot(form * s.v);
  for (int k = 0; k < 50; ++k) {
    std::optional<SurfaceState> nxt = surface_billiard_step(SurfaceKind::Hyperbolic, b, s);
    REQUIRE(nxt.has_value());
    s = *nxt;
    CHECK(std::abs(s.x.dot(form * s.x) + 1.0) < 1e-9);   // on the hyperboloid
    CHECK(std::abs(s.x.dot(form * s.v)) < 1e-9);         // tangent in the form metric
    CHECK(std::abs(s.v.dot(form * s.v) - speed) < 1e-9);  // spacelike speed
    CHECK(std::abs(s.x[0] * s.v[1] - s.x[1] * s.v[0] - j) < 1e-9);
  }
}

TEST_CASE("dual billiard on a circle is the central symmetry in the support point") {
  DualBilliard d = dualize_billiard(ConicBoundary::circle(1.0), TransversalField::normal());
  auto g = rng_for(74);
  for (int i = 0; i < 40; ++i) {
    double t = 2 * kPi * (unit(g) * 0.5 + 0.5);
    Point p = dual_point_at(d, t);
    Line lp = dual_tangent_at(d, t);
    CHECK(std::abs(incidence(lp, p)) < 1e-10 * lp.h.norm() * p.h.norm());
    Vec3 ld = line_direction(lp);
    Vec2 dir(ld[0].real(), ld[1].real());
    Vec2 pa = p.affine_xy();
    double sshift = 2.0 * unit(g);
    if (std::abs(sshift) < 0.05) continue;
    Point a = Point::affine(pa[0] + sshift * dir[0], pa[1] + sshift * dir[1]);
    Point img = dual_reflect(d, t, a);
    Vec2 expect = 2.0 * pa - a.affine_xy();
    CHECK((img.affine_xy() - expect).norm() < 1e-9);
  }

  CHECK(code_of([&] { dual_reflect(d, 0.3, Point::affine(5.0, 5.0)); }) ==
        ErrorCode::NotThroughPoint);
}

TEST_CASE("dual reflection is conjugate to the primal pencil reflection") {
  ConicBoundary tables[] = {ConicBoundary::ellipse(2.0, 1.0), ConicBoundary::circle(1.3)};
  auto g = rng_for(75);
  for (const ConicBoundary& b : tables) {
    DualBilliard d = dualize_billiard(b, TransversalField::normal());
    for (int i = 0; i < 50; ++i) {
      double t = 2 * kPi * (unit(g) * 0.5 + 0.5);
      Point x = b.point_at(t);
      Line tan = b.tangent_line_at(t);
      Line trans = transversal_field_eval(b, TransversalField::normal(), x);
      PlaneInvolution inv = build_projective_involution(tan, trans, x);
      Line l = Line::through_dir(x, Cx(unit(g), unit(g)), Cx(unit(g), unit(g)));
      Line r = reflect_line_pencil(inv, l);
      Point img = dual_reflect(d, t, line_dual_point(l));
      CHECK(proj_distance(img.h, line_dual_point(r).h) < 1e-9);
    }
  }
}

TEST_CASE("dual-pencil fields do not depend on the member choice") {
  ConicBoundary b = ConicBoundary::ellipse(2.0, 1.0);
  DualPencilFamily confocal{RVec3(4.0, 1.0, -1.0).asDiagonal(), RVec3(1.0, 1.0, 0.0).asDiagonal()};
  DualPencilFamily skew{RVec3(4.0, 1.0, -1.0).asDiagonal(), RVec3(1.0, 2.0, 1.0).asDiagonal()};

  auto g = rng_for(76);
  double max_cross = 0;
  for (int i = 0; i < 50; ++i) {
    double t = 2 * kPi * (unit(g) * 0.5 + 0.5);
    Point x = b.point_at(t);
    Line c1 = transversal_field_eval(b, TransversalField::dual_pencil(confocal.member_x(0.3)), x);
    Line c2 = transversal_field_eval(b, TransversalField::dual_pencil(confocal.member_x(0.7)), x);
    Line k1 = transversal_field_eval(b, TransversalField::dual_pencil(skew.member_x(0.3)), x);
    Line k2 = transversal_field_eval(b, TransversalField::dual_pencil(skew.member_x(0.7)), x);
    CHECK(proj_distance(c1.h, c2.h) < 1e-9);
    CHECK(proj_distance(k1.h, k2.h) < 1e-9);
    max_cross = std::max(max_cross, proj_distance(c1.h, k1.h));
  }
  CHECK(max_cross > 1e-3);  // different pencils give genuinely different fields
}
