#include "caustica/pencil.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace caustica {

namespace {

RMat3 real_adjugate(const RMat3& m) { return adjugate(m.cast<Cx>()).real(); }

// divide by the (signed) entry of largest magnitude, making it +1
RMat3 canonical_rescale(const RMat3& m) {
  double best = 0;
  double pivot = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (std::abs(m(i, j)) > best) {
        best = std::abs(m(i, j));
        pivot = m(i, j);
      }
  if (best == 0.0) fail(ErrorCode::ZeroVector, "zero matrix cannot be rescaled");
  return m / pivot;
}

}  // namespace

FormSignature form_signature(const RMat3& a, double tol) {
  RMat3 s = (a + a.transpose()) / 2.0;
  Eigen::SelfAdjointEigenSolver<RMat3> es(s);
  RVec3 ev = es.eigenvalues();
  double scale = ev.cwiseAbs().maxCoeff();
  if (scale == 0.0) fail(ErrorCode::ZeroVector, "zero form has no signature");
  FormSignature sig;
  for (int i = 0; i < 3; ++i) {
    if (ev[i] > tol * scale) ++sig.pos;
    else if (ev[i] < -tol * scale) ++sig.neg;
    else ++sig.zero;
  }
  return sig;
}

NormalizationResult normalize_form(const RMat3& a, double tol) {
  RMat3 s = (a + a.transpose()) / 2.0;
  Eigen::SelfAdjointEigenSolver<RMat3> es(s);
  RVec3 ev = es.eigenvalues();
  RMat3 v = es.eigenvectors();
  double scale = ev.cwiseAbs().maxCoeff();
  if (scale == 0.0) fail(ErrorCode::ZeroVector, "zero form cannot be normalized");
  int pos = 0, neg = 0;
  for (int i = 0; i < 3; ++i) {
    if (ev[i] > tol * scale) ++pos;
    else if (ev[i] < -tol * scale) ++neg;
  }
  double sign = (neg > pos) ? -1.0 : 1.0;
  RVec3 e = sign * ev;
  // order the model axes: positive directions first, the odd one third
  std::array<int, 3> idx = {0, 1, 2};
  std::sort(idx.begin(), idx.end(), [&](int i, int j) { return e[i] > e[j]; });
  NormalizationResult r;
  int np = 0, nn = 0, nz = 0;
  for (int i = 0; i < 3; ++i) {
    if (e[idx[i]] > tol * scale) ++np;
    else if (e[idx[i]] < -tol * scale) ++nn;
    else ++nz;
  }
  if (np == 3) r.model = SurfaceKind::Sphere;
  else if (np == 2 && nn == 1) r.model = SurfaceKind::Hyperbolic;
  else if (np == 2 && nz == 1) r.model = SurfaceKind::Plane;
  else fail(ErrorCode::UnsupportedSignature, "form is not of sphere, hyperbolic or plane type");
  r.normalized = RMat3::Zero();
  for (int i = 0; i < 3; ++i) {
    double lam = e[idx[i]];
    bool null_axis = std::abs(lam) <= tol * scale;
    r.normalized(i, i) = null_axis ? 0.0 : (lam > 0 ? 1.0 : -1.0);
    double row_scale = null_axis ? 1.0 : std::sqrt(std::abs(lam));
    r.map.row(i) = row_scale * v.col(idx[i]).transpose();
  }
  return r;
}

OrthogonalField make_a_orthogonal_field(const ConicBoundary& c, const RMat3& a) {
  double na = a.norm(), nc = c.cm.norm();
  if (na == 0.0) fail(ErrorCode::ZeroVector, "zero form");
  RMat3 u = a / na, w = c.cm / nc;
  if (std::min((u - w).norm(), (u + w).norm()) <= 1e-9)
    fail(ErrorCode::AlphaEqualsC, "form conic coincides with the boundary");
  return {c, a};
}

Line a_orthogonal_field_eval(const OrthogonalField& f, const Point& x, double tol) {
  if (!f.boundary.contains(x, 1e3 * tol))
    fail(ErrorCode::OffBoundary, "field is defined along the boundary only");
  Line tangent = polar_line(x, f.boundary.conic);
  Mat3 adj = adjugate(f.a.cast<Cx>());
  Vec3 l = tangent.h;
  Vec3 nv = adj * l;
  double adj_scale = adj.cwiseAbs().maxCoeff();
  Cx iso = l.cwiseProduct(nv).sum();  // induced form of a on the tangent plane
  if (std::abs(iso) <= 1e-9 * l.squaredNorm() * adj_scale || nv.norm() <= 1e-12 * adj_scale * l.norm())
    fail(ErrorCode::SelfOrthogonalTangent, "tangent plane is isotropic for this form");
  if (proj_distance(nv, x.h) <= 1e-9)
    fail(ErrorCode::SingularPoint, "complement direction coincides with the base point");
  return join(x, Point(nv));
}

EquivalenceReport equivalence_check(const ConicBoundary& c, const RMat3& a, int n,
                                    std::uint64_t seed, double tol) {
  NormalizationResult nr = normalize_form(a);
  OrthogonalField field = make_a_orthogonal_field(c, a);
  RMat3 m = nr.map;
  RMat3 minv = m.inverse();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> tpick(c.t_lo, c.t_hi);
  std::uniform_real_distribution<double> apick(0.0, std::numbers::pi);
  EquivalenceReport rep;
  for (int k = 0; rep.evaluated < n && k < 500 * n; ++k) {
    double t = tpick(rng);
    Point q = c.point_at(t);
    Vec2 xy = q.affine_xy();
    RVec3 h(xy[0], xy[1], 1.0);
    RVec3 y0 = m * h;
    // stay clearly inside the model domain
    if (nr.model == SurfaceKind::Hyperbolic &&
        y0.dot(nr.normalized * y0) >= -1e-6 * y0.squaredNorm())
      continue;
    if (nr.model == SurfaceKind::Plane && std::abs(y0[2]) <= 1e-6 * y0.norm()) continue;
    double ang = apick(rng);
    Vec2 dir(std::cos(ang), std::sin(ang));
    Vec2 tau = c.tangent_dir(t).normalized();
    if (std::abs(dir[0] * tau[1] - dir[1] * tau[0]) < 0.05) continue;
    try {
      // projective reflection through the a-orthogonal field
      Line tangent = polar_line(q, c.conic);
      Line trans = a_orthogonal_field_eval(field, q);
      PlaneInvolution inv = build_projective_involution(tangent, trans, q);
      Cx2 img = inv.apply(Cx2(Cx(dir[0]), Cx(dir[1])));
      Line lp = Line::through_dir(q, chop_im(img[0]), chop_im(img[1]));
      // geodesic reflection on the model surface, projected back
      RVec3 y = lift_to_surface(nr.model, Point::real(y0));
      RVec3 wb = m * RVec3(tau[0], tau[1], 0.0);
      SpaceInvolution j = constant_curvature_reflection(nr.normalized, y, wb);
      RVec3 vin = m * RVec3(dir[0], dir[1], 0.0);
      RVec3 back = minv * (j.j * vin);
      if (proj_distance(back.cast<Cx>(), h.cast<Cx>()) <= 1e-9) continue;
      Line ls = join(q, Point::real(back));
      double d = proj_distance(lp.h, ls.h);
      rep.rows.push_back({rep.evaluated, d, d <= tol});
      rep.max_discrepancy = std::max(rep.max_discrepancy, d);
      ++rep.evaluated;
    } catch (const Error&) {
      continue;
    }
  }
  if (rep.evaluated == 0)
    fail(ErrorCode::LiftDomainEmpty, "no boundary sample lifts to the model surface");
  rep.pass = rep.evaluated == n && rep.max_discrepancy <= tol;
  return rep;
}

RMat3 degenerate_pencil_limit(const RMat3& u, const RMat3& a, double lambda0,
                              const std::vector<double>& h) {
  if (h.size() < 2) fail(ErrorCode::NoConvergence, "need at least two extrapolation steps");
  RMat3 m0 = u - lambda0 * a;
  Eigen::JacobiSVD<RMat3> svd(m0);
  RVec3 sv = svd.singularValues();
  if (sv[0] <= 1e-14 * std::max(u.norm(), a.norm()) || sv[1] > kRankTol * sv[0])
    fail(ErrorCode::RankMismatch, "u - lambda0 a must have rank exactly 1");
  std::vector<RMat3> ns;
  std::vector<double> ratios;
  for (double step : h) {
    RMat3 mm = u - (lambda0 + step) * a;
    Eigen::SelfAdjointEigenSolver<RMat3> es(mm);
    RVec3 ev = es.eigenvalues();
    std::array<int, 3> idx = {0, 1, 2};
    std::sort(idx.begin(), idx.end(),
              [&](int i, int j) { return std::abs(ev[i]) < std::abs(ev[j]); });
    double mu0 = ev[idx[0]], mu1 = ev[idx[1]], mu2 = ev[idx[2]];
    if (std::abs(mu1) > 0.1 * std::abs(mu2))
      fail(ErrorCode::NoConvergence, "vanishing eigenvalue pair is not separated at this step");
    if (std::abs(mu1) == 0.0)
      fail(ErrorCode::NoConvergence, "eigenvalue ratio is undefined at this step");
    ratios.push_back(mu0 / mu1);
    ns.push_back(canonical_rescale(real_adjugate(mm)));
  }
  if (std::abs(ratios.back()) < 1e-6)
    fail(ErrorCode::NoConvergence, "vanishing eigenvalue ratio tends to zero");
  for (size_t k = 2; k < ns.size(); ++k) {
    double d_prev = (ns[k - 1] - ns[k - 2]).norm();
    double d_last = (ns[k] - ns[k - 1]).norm();
    if (d_last > 0.5 * d_prev + 1e-12)
      fail(ErrorCode::NoConvergence, "rescaled adjugates do not contract along the steps");
    double r_prev = std::abs(ratios[k - 1] - ratios[k - 2]);
    double r_last = std::abs(ratios[k] - ratios[k - 1]);
    if (r_last > 0.5 * r_prev + 1e-9)
      fail(ErrorCode::NoConvergence, "eigenvalue ratio does not settle along the steps");
  }
  // Lagrange extrapolation of the rescaled family to step 0
  RMat3 lim = RMat3::Zero();
  for (size_t i = 0; i < h.size(); ++i) {
    double w = 1.0;
    for (size_t j = 0; j < h.size(); ++j)
      if (j != i) w *= -h[j] / (h[i] - h[j]);
    lim += w * ns[i];
  }
  // the limit has rank two; drop the extrapolation residue in the kernel
  Eigen::SelfAdjointEigenSolver<RMat3> les((lim + lim.transpose()) / 2.0);
  RVec3 lev = les.eigenvalues();
  double lscale = lev.cwiseAbs().maxCoeff();
  for (int i = 0; i < 3; ++i)
    if (std::abs(lev[i]) <= 1e-6 * lscale) lev[i] = 0.0;
  lim = les.eigenvectors() * lev.asDiagonal() * les.eigenvectors().transpose();
  return canonical_rescale(lim);
}

}  // namespace caustica
