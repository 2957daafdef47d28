#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>
#include <set>

#include "caustica/caustics.hpp"
#include "doctest.h"

using namespace caustica;

namespace {

std::mt19937_64 rng_for(std::uint64_t seed) { return std::mt19937_64(seed); }

double unit(std::mt19937_64& g) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  return u(g);
}

bool conic_proj_equal(const Conic& a, const Conic& b, double tol = 1e-9) {
  Mat3 ma = a.m, mb = b.m;
  Cx sa(0), sb(0);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      if (std::abs(ma(i, j)) > std::abs(sa)) sa = ma(i, j);
      if (std::abs(mb(i, j)) > std::abs(sb)) sb = mb(i, j);
    }
  return ((ma / sa) - (mb / sb)).cwiseAbs().maxCoeff() < tol;
}

double conic_residual(const Point& p, const Conic& c) {
  Cx v = p.h.cwiseProduct(c.m * p.h).sum();
  return std::abs(v) / (c.m.cwiseAbs().maxCoeff() * p.h.squaredNorm());
}

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

TEST_CASE("confocal members share the foci and hit the anchor at zero") {
  ConicBoundary ell = ConicBoundary::ellipse(2.0, 1.0);
  ConfocalPencil pencil = ConfocalPencil::euclidean(ell.conic);

  CHECK(conic_proj_equal(pencil.member(0.0), ell.conic, 1e-12));
  CHECK(conic_proj_equal(pencil.member(0.5),
                         Conic::real(RVec3(1.0 / 3.5, 2.0, -1.0).asDiagonal()), 1e-12));

  // normalized so the constant term is -1: the axis gap stays 4 - 1 = 3
  for (double lambda : {0.1, 0.5, 0.9, 2.5, 6.0}) {
    RMat3 m = pencil.member(lambda).m.real();
    m /= -m(2, 2);
    CHECK(std::abs(1.0 / m(0, 0) - 1.0 / m(1, 1) - 3.0) < 1e-9);
  }

  CHECK(code_of([&] { pencil.member(1.0); }) == ErrorCode::SingularParameter);
  CHECK(code_of([&] { pencil.member(4.0); }) == ErrorCode::SingularParameter);
}

TEST_CASE("complex caustic check accepts confocal members and rejects others") {
  ConicBoundary ell = ConicBoundary::ellipse(2.0, 1.0);
  ConfocalPencil pencil = ConfocalPencil::euclidean(ell.conic);
  TransversalField nf = TransversalField::normal();

  CausticReport rep = check_complex_caustic(ell, nf, pencil.member(0.5), 300, 11, 1e-9);
  CHECK(rep.pass);
  CHECK(rep.max_residual < 1e-9);
  CHECK(rep.evaluated == 300);
  CHECK(rep.permuted + rep.fixed_count == rep.evaluated);

  // hyperbola members and members with no real points are caustics as well
  CHECK(check_complex_caustic(ell, nf, pencil.member(2.5), 150, 11, 1e-9).pass);
  CHECK(check_complex_caustic(ell, nf, pencil.member(6.0), 150, 11, 1e-9).pass);

  auto g = rng_for(91);
  for (int i = 0; i < 12; ++i) {
    double lambda = 0.05 + 0.9 * (unit(g) * 0.5 + 0.5);
    CHECK(check_complex_caustic(ell, nf, pencil.member(lambda), 80, 11, 1e-9).pass);
  }

  CausticReport bad =
      check_complex_caustic(ell, nf, Conic::real(RVec3(1.0 / 3.0, 1.0, -1.0).asDiagonal()), 150,
                            11, 1e-9);
  CHECK(!bad.pass);
  CHECK(bad.max_residual > 1e-3);
}

TEST_CASE("invariant curve check mirrors the caustic verdict on the dual side") {
  ConicBoundary circ = ConicBoundary::circle(1.0);
  DualBilliard dc = dualize_billiard(circ, TransversalField::normal());

  // concentric circles in the moment plane are invariant for the circle table
  CausticReport rep =
      check_invariant_curve(dc, Conic::real(RVec3(1.0, 1.0, -2.0).asDiagonal()), 200, 13, 1e-9);
  CHECK(rep.pass);
  CHECK(rep.max_residual < 1e-9);

  ConicBoundary ell = ConicBoundary::ellipse(2.0, 1.0);
  ConfocalPencil pencil = ConfocalPencil::euclidean(ell.conic);
  DualBilliard de = dualize_billiard(ell, TransversalField::normal());

  for (double lambda : {0.3, 0.7}) {
    Conic s_star = Conic::real(RMat3(pencil.b - lambda * pencil.a));
    CausticReport r = check_invariant_curve(de, s_star, 200, 13, 1e-9);
    CHECK(r.pass);
    // the same member passes the primal caustic check: verdicts agree
    CHECK(check_complex_caustic(ell, TransversalField::normal(), pencil.member(lambda), 200, 13,
                                1e-9)
              .pass == r.pass);
  }

  // a conic outside the pencil is not invariant, on either side
  Conic off = Conic::real(RVec3(1.0, 3.0, -2.0).asDiagonal());
  CausticReport bad = check_invariant_curve(de, off, 150, 13, 1e-9);
  CHECK(!bad.pass);
  CHECK(bad.max_residual > 1e-3);
  CHECK(!check_complex_caustic(ell, TransversalField::normal(), dualize_conic(off), 150, 13, 1e-9)
             .pass);
}

TEST_CASE("dual pencil families expose base points and adjugate members") {
  DualPencilFamily fam{RVec3(1.0, 2.0, -1.0).asDiagonal(), RVec3(2.0, 1.0, -1.0).asDiagonal()};
  std::vector<Point> base = fam.base_points();
  REQUIRE(base.size() == 4);
  for (const Point& p : base) {
    CHECK(conic_residual(p, fam.member_m(0.0)) < 1e-10);
    CHECK(conic_residual(p, fam.member_m(1.3)) < 1e-10);   // a third member
    CHECK(conic_residual(p, fam.member_m(-0.7)) < 1e-10);  // and a fourth
  }
  for (std::size_t i = 0; i < base.size(); ++i)
    for (std::size_t j = i + 1; j < base.size(); ++j)
      CHECK(proj_distance(base[i].h, base[j].h) > 1e-6);  // all distinct

  // x-side members are the adjugates of the m-side members
  CHECK(conic_proj_equal(fam.member_x(0.3), dualize_conic(fam.member_m(0.3)), 1e-10));

  // the pencil parameter 0.5 kills det(U - lambda A): no regular x-side member
  CHECK(code_of([&] { fam.member_x(0.5); }) == ErrorCode::SingularParameter);
}

TEST_CASE("quartic oval parametrization and tangents are consistent") {
  ImplicitCurve oval = quartic_oval(2.0);
  auto g = rng_for(92);
  for (int i = 0; i < 100; ++i) {
    double th = 6.28318530717958647692 * (unit(g) * 0.5 + 0.5);
    Vec2 p = oval.point_at(th);
    CHECK(std::abs(oval.f(p[0], p[1])) < 1e-10);
    Vec2 tan = oval.tangent_at(p);
    Vec2 grad = oval.grad(p[0], p[1]);
    CHECK(std::abs(tan.dot(grad)) < 1e-10 * tan.norm() * grad.norm());
    CHECK(tan.norm() > 0);
  }
  // axis crossings of (x/2)^4 + y^4 = 1
  CHECK((oval.point_at(0.0) - Vec2(2, 0)).norm() < 1e-10);
  CHECK((oval.point_at(1.5707963267948966) - Vec2(0, 1)).norm() < 1e-10);
}

TEST_CASE("no conic is a caustic of the quartic oval billiard") {
  ImplicitCurve oval = quartic_oval(2.0);
  Conic cands[] = {Conic::real(RVec3(1.0, 1.0, -1.0).asDiagonal()),
                   Conic::real(RVec3(0.5, 2.0, -1.0).asDiagonal()),
                   Conic::real(RVec3(1.0, 4.0, -0.5).asDiagonal())};
  for (const Conic& alpha : cands) {
    CausticReport rep = check_oval_caustic(oval, alpha, 120, 15, 1e-9);
    CHECK(!rep.pass);
    CHECK(rep.max_residual > 1e-4);
  }
}

TEST_CASE("tangential correspondence samples join the oval to contact points") {
  ImplicitCurve oval = quartic_oval(2.0);
  Conic alpha = Conic::real(RVec3(1.0, 4.0, -1.0).asDiagonal());  // x^2 + 4 y^2 = 1
  std::vector<TangencySample> samples = tangential_correspondence_samples(oval, alpha, 80, 17);
  CHECK(samples.size() >= 150);  // two tangents for most source points
  for (const TangencySample& s : samples) {
    Vec2 a = s.a.affine_xy();
    CHECK(std::abs(oval.f(a[0], a[1])) < 1e-8);                  // source on the oval
    CHECK(conic_residual(s.b, alpha) < 1e-10);                   // contact on alpha
    CHECK(tangency_residual(s.line, alpha) < 1e-10);             // line touches alpha
    CHECK(std::abs(incidence(s.line, s.a)) < 1e-8);              // through the source
    CHECK(std::abs(incidence(s.line, s.b)) < 1e-8);              // through the contact
    // the contact point is the pole of the tangent line
    CHECK(proj_distance(s.b.h, pole_of_line(s.line, alpha).h) < 1e-8);
  }
}

TEST_CASE("geodesic reflections swap the absolute contact planes") {
  SurfaceBoundary cap = SurfaceBoundary::make(RVec3(1.0, 1.0, -2.0).asDiagonal(), RVec3(0, 0, 1));
  CausticReport sph = check_absolute_caustic(SurfaceKind::Sphere, cap, 100, 19, 1e-9);
  CHECK(sph.pass);
  CHECK(sph.max_residual < 1e-9);
  CHECK(sph.permuted == sph.evaluated);
  CHECK(sph.fixed_count == 0);

  SurfaceBoundary disc = SurfaceBoundary::make(RVec3(2.0, 2.0, -1.0).asDiagonal(), RVec3(0, 0, 1));
  CausticReport hyp = check_absolute_caustic(SurfaceKind::Hyperbolic, disc, 100, 19, 1e-9);
  CHECK(hyp.pass);
  CHECK(hyp.max_residual < 1e-9);
  CHECK(hyp.permuted == hyp.evaluated);
}

TEST_CASE("golden sequence sampling is deterministic and well spread") {
  for (int k = 0; k < 50; ++k) {
    double a = golden_sequence(0.25, k);
    CHECK(a >= 0.0);
    CHECK(a < 1.0);
    CHECK(a == golden_sequence(0.25, k));  // pure function of (phase, k)
  }
  std::set<long long> cells;
  for (int k = 0; k < 100; ++k)
    cells.insert(static_cast<long long>(golden_sequence(0.0, k) * 100));
  CHECK(cells.size() > 55);  // low-discrepancy: spreads over most cells
}
