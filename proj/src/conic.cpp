#include "caustica/conic.hpp"

#include <algorithm>
#include <cmath>

namespace caustica {

namespace {

// lexicographic order on canonicalized coordinates, real part then imaginary
bool lex_less(const Vec3& a, const Vec3& b) {
  for (int i = 0; i < 3; ++i) {
    if (a[i].real() != b[i].real()) return a[i].real() < b[i].real();
    if (a[i].imag() != b[i].imag()) return a[i].imag() < b[i].imag();
  }
  return false;
}

// root of z^2 = w picking the branch with nonnegative real part
Cx principal_sqrt(const Cx& w) {
  Cx r = std::sqrt(w);
  if (r.real() < 0.0 || (r.real() == 0.0 && r.imag() < 0.0)) r = -r;
  return r;
}

// stable roots of a s^2 + 2 b s + c = 0 in CP^1, as pairs (s, t) ~ s/t
struct QuadRoots { Cx s1, t1, s2, t2; };

QuadRoots quad_roots(const Cx& a, const Cx& b, const Cx& c) {
  double scale = std::abs(a) + std::abs(b) + std::abs(c);
  if (scale == 0.0) fail(ErrorCode::LineInConic, "identically zero restriction");
  if (std::abs(a) <= 1e-14 * scale) {
    if (std::abs(b) <= 1e-14 * scale) fail(ErrorCode::LineInConic, "degenerate quadratic");
    return {-c / (Cx(2) * b), Cx(1), Cx(1), Cx(0)};  // finite root and the root at infinity
  }
  Cx disc = b * b - a * c;
  Cx rt = principal_sqrt(disc);
  Cx q = (std::abs(-b + rt) >= std::abs(-b - rt)) ? (-b + rt) : (-b - rt);
  if (std::abs(q) == 0.0) return {Cx(0), Cx(1), Cx(0), Cx(1)};
  Cx s1 = q / a;
  Cx s2 = c / q;
  return {s1, Cx(1), s2, Cx(1)};
}

}  // namespace

Conic::Conic(const Mat3& a) {
  m = (a + a.transpose()) / Cx(2);
  if (!m.allFinite()) fail(ErrorCode::ZeroVector, "non-finite conic matrix");
  if (m.cwiseAbs().maxCoeff() <= 0.0) fail(ErrorCode::ZeroVector, "zero conic matrix");
}

Conic Conic::from_coeffs(const std::array<double, 6>& c) {
  Mat3 m;
  m << Cx(c[0]), Cx(c[1]), Cx(c[2]),
       Cx(c[1]), Cx(c[3]), Cx(c[4]),
       Cx(c[2]), Cx(c[4]), Cx(c[5]);
  return Conic(m);
}

ConicClass Conic::classify(double tol) const {
  Eigen::JacobiSVD<Mat3> svd(m);
  const auto& sv = svd.singularValues();
  double top = sv[0];
  int rank = 0;
  for (int i = 0; i < 3; ++i)
    if (sv[i] > tol * top) ++rank;
  if (rank == 3) return ConicClass::Regular;
  if (rank == 2) return ConicClass::LinePair;
  return ConicClass::DoubleLine;
}

bool Conic::is_real(double eps) const {
  Mat3 c = m / m.cwiseAbs().maxCoeff();
  // try to rotate the overall complex scale away using the largest entry
  Cx pivot(0, 0);
  double best = -1;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (std::abs(c(i, j)) > best) { best = std::abs(c(i, j)); pivot = c(i, j); }
  c /= (pivot / std::abs(pivot));
  return c.imag().cwiseAbs().maxCoeff() <= eps;
}

RMat3 Conic::real_matrix() const {
  if (!is_real()) fail(ErrorCode::DegenerateConic, "conic has no real representative");
  Mat3 c = m;
  Cx pivot(0, 0);
  double best = -1;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (std::abs(c(i, j)) > best) { best = std::abs(c(i, j)); pivot = c(i, j); }
  c /= (pivot / std::abs(pivot));
  return c.real();
}

Mat3 adjugate(const Mat3& m) {
  Mat3 a;
  a(0, 0) = m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1);
  a(0, 1) = m(0, 2) * m(2, 1) - m(0, 1) * m(2, 2);
  a(0, 2) = m(0, 1) * m(1, 2) - m(0, 2) * m(1, 1);
  a(1, 0) = m(1, 2) * m(2, 0) - m(1, 0) * m(2, 2);
  a(1, 1) = m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0);
  a(1, 2) = m(0, 2) * m(1, 0) - m(0, 0) * m(1, 2);
  a(2, 0) = m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0);
  a(2, 1) = m(0, 1) * m(2, 0) - m(0, 0) * m(2, 1);
  a(2, 2) = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  return a;
}

Cx conic_eval(const Conic& c, const Point& p) {
  return p.h.cwiseProduct(c.m * p.h).sum();
}

Line polar_line(const Point& p, const Conic& c) {
  Vec3 l = c.m * p.h;
  if (l.cwiseAbs().maxCoeff() <= kTol * c.m.cwiseAbs().maxCoeff())
    fail(ErrorCode::SingularPoint, "polar of a singular point of the conic");
  return Line(l);
}

Point pole_of_line(const Line& l, const Conic& c) {
  if (c.classify() != ConicClass::Regular)
    fail(ErrorCode::DegenerateConic, "pole needs a regular conic");
  return Point(adjugate(c.m) * l.h);
}

double tangency_residual(const Line& l, const Conic& c) {
  Mat3 ad = adjugate(c.m);
  double scale = std::sqrt(ad.squaredNorm()) * l.h.squaredNorm();
  Cx val = l.h.cwiseProduct(ad * l.h).sum();
  return std::abs(val) / scale;
}

std::array<Line, 2> tangent_lines_from_point(const Point& p, const Conic& c, double tol) {
  if (c.classify() != ConicClass::Regular)
    fail(ErrorCode::DegenerateConic, "tangent pencil needs a regular conic");
  // basis of the pencil of lines through p
  Vec3 cand[3] = {bilinear_cross(p.h, Vec3(1, 0, 0)), bilinear_cross(p.h, Vec3(0, 1, 0)),
                  bilinear_cross(p.h, Vec3(0, 0, 1))};
  std::sort(cand, cand + 3, [](const Vec3& x, const Vec3& y) { return x.norm() > y.norm(); });
  Vec3 e1 = cand[0];
  Vec3 e2 = cand[1] - e1 * (e1.conjugate().cwiseProduct(cand[1]).sum() / e1.squaredNorm());
  if (e2.norm() < tol * e1.norm()) e2 = cand[2] - e1 * (e1.conjugate().cwiseProduct(cand[2]).sum() / e1.squaredNorm());
  Mat3 ad = adjugate(c.m);
  Cx qa = e2.cwiseProduct(ad * e2).sum();
  Cx qb = e1.cwiseProduct(ad * e2).sum();
  Cx qc = e1.cwiseProduct(ad * e1).sum();
  QuadRoots r = quad_roots(qa, qb, qc);
  Line l1(r.t1 * e1 + r.s1 * e2);
  Line l2(r.t2 * e1 + r.s2 * e2);
  if (lex_less(l2.h, l1.h)) std::swap(l1, l2);
  return {l1, l2};
}

Conic dualize_conic(const Conic& c, double tol) {
  if (c.classify(tol) != ConicClass::Regular)
    fail(ErrorCode::DegenerateConic, "dual of a degenerate conic");
  return Conic(adjugate(c.m));
}

std::array<Point, 2> line_conic_points(const Line& l, const Conic& c, double tol) {
  Vec3 cand[3] = {bilinear_cross(l.h, Vec3(1, 0, 0)), bilinear_cross(l.h, Vec3(0, 1, 0)),
                  bilinear_cross(l.h, Vec3(0, 0, 1))};
  std::sort(cand, cand + 3, [](const Vec3& x, const Vec3& y) { return x.norm() > y.norm(); });
  // points of the line: b1, b2 span {x : l.x = 0}
  Vec3 b1 = cand[0];
  Vec3 b2 = cand[1] - b1 * (b1.conjugate().cwiseProduct(cand[1]).sum() / b1.squaredNorm());
  if (b2.norm() < tol * b1.norm()) b2 = cand[2] - b1 * (b1.conjugate().cwiseProduct(cand[2]).sum() / b1.squaredNorm());
  Cx qa = b2.cwiseProduct(c.m * b2).sum();
  Cx qb = b1.cwiseProduct(c.m * b2).sum();
  Cx qc = b1.cwiseProduct(c.m * b1).sum();
  QuadRoots r = quad_roots(qa, qb, qc);
  Point p1(r.t1 * b1 + r.s1 * b2);
  Point p2(r.t2 * b1 + r.s2 * b2);
  if (proj_distance(p1.h, p2.h) < 1e-7)
    fail(ErrorCode::TangentLine, "line is tangent: intersection pair collapses");
  if (lex_less(p2.h, p1.h)) std::swap(p1, p2);
  return {p1, p2};
}

std::array<Line, 2> split_line_pair(const Conic& c, double tol) {
  ConicClass cls = c.classify(tol);
  if (cls == ConicClass::Regular) fail(ErrorCode::DegenerateConic, "regular conic cannot be split");
  Mat3 d = c.m / c.m.cwiseAbs().maxCoeff();
  if (cls == ConicClass::DoubleLine) {
    int j = 0;
    double best = -1;
    for (int i = 0; i < 3; ++i)
      if (std::abs(d(i, i)) > best) { best = std::abs(d(i, i)); j = i; }
    Line l(d.col(j));
    return {l, l};
  }
  // rank 2: d = (l g^T + g l^T)/2 and adj(d) = -(1/4) p p^T with p = l x g
  Mat3 b = adjugate(d);
  int j = 0;
  double best = -1;
  for (int i = 0; i < 3; ++i)
    if (std::abs(b(i, i)) > best) { best = std::abs(b(i, i)); j = i; }
  Cx beta = principal_sqrt(-b(j, j));
  if (std::abs(beta) == 0.0) fail(ErrorCode::DegenerateConic, "cannot normalize singular point");
  Vec3 q = b.col(j) / beta;
  Mat3 s;
  s << Cx(0), q[2], -q[1],
       -q[2], Cx(0), q[0],
       q[1], -q[0], Cx(0);
  Mat3 plus = d + s, minus = d - s;
  auto rank1_res = [](const Mat3& g) {
    Eigen::JacobiSVD<Mat3> svd(g);
    return svd.singularValues()[1] / svd.singularValues()[0];
  };
  const Mat3& g = (rank1_res(plus) <= rank1_res(minus)) ? plus : minus;
  int rbest = 0, cbest = 0;
  double rn = -1, cn = -1;
  for (int i = 0; i < 3; ++i) {
    if (g.row(i).norm() > rn) { rn = g.row(i).norm(); rbest = i; }
    if (g.col(i).norm() > cn) { cn = g.col(i).norm(); cbest = i; }
  }
  Line l1(Vec3(g.row(rbest).transpose()));
  Line l2(g.col(cbest));
  if (lex_less(l2.h, l1.h)) std::swap(l1, l2);
  return {l1, l2};
}

std::vector<Point> conic_conic_intersection(const Conic& a, const Conic& b, double tol) {
  // find a degenerate member of the pencil a - lambda b (or b if a ~ b fails)
  auto det_at = [&](const Cx& lam) { return (a.m - lam * b.m).determinant(); };
  // cubic coefficients by interpolation at 4 nodes
  Eigen::Matrix4cd vand;
  Eigen::Vector4cd rhs;
  Cx nodes[4] = {Cx(0), Cx(1), Cx(-1), Cx(2)};
  for (int i = 0; i < 4; ++i) {
    Cx x = nodes[i];
    vand.row(i) << Cx(1), x, x * x, x * x * x;
    rhs[i] = det_at(x);
  }
  Eigen::Vector4cd coef = vand.colPivHouseholderQr().solve(rhs);
  // pick a root of c0 + c1 x + c2 x^2 + c3 x^3
  double scale = coef.cwiseAbs().maxCoeff();
  std::vector<Cx> lambdas;
  if (scale <= 0.0) {
    lambdas.push_back(Cx(0));  // every member degenerate; split b directly
  } else if (std::abs(coef[3]) > 1e-12 * scale) {
    Eigen::Matrix3cd comp = Eigen::Matrix3cd::Zero();
    comp(0, 2) = -coef[0] / coef[3];
    comp(1, 2) = -coef[1] / coef[3];
    comp(2, 2) = -coef[2] / coef[3];
    comp(1, 0) = Cx(1);
    comp(2, 1) = Cx(1);
    Eigen::ComplexEigenSolver<Mat3> es(comp);
    for (int i = 0; i < 3; ++i) lambdas.push_back(es.eigenvalues()[i]);
  } else if (std::abs(coef[2]) > 1e-12 * scale) {
    QuadRoots r = quad_roots(coef[2], coef[1] / Cx(2), coef[0]);
    if (std::abs(r.t1) > 0.5) lambdas.push_back(r.s1 / r.t1);
    if (std::abs(r.t2) > 0.5) lambdas.push_back(r.s2 / r.t2);
  } else if (std::abs(coef[1]) > 1e-12 * scale) {
    lambdas.push_back(-coef[0] / coef[1]);
  }
  std::vector<Point> pts;
  auto push_unique = [&](const Point& p) {
    for (const Point& q : pts)
      if (proj_equal(p, q, 1e-6)) return;
    pts.push_back(p);
  };
  auto try_split = [&](const Conic& dgn, const Conic& other) {
    std::array<Line, 2> ls = split_line_pair(dgn, kRankTol * 1e3);
    for (const Line& l : ls) {
      try {
        std::array<Point, 2> ps = line_conic_points(l, other, tol);
        push_unique(ps[0]);
        push_unique(ps[1]);
      } catch (const Error&) {
        // tangent line: double contact point via the polar
        try {
          Point p = pole_of_line(l, other);
          push_unique(p);
        } catch (const Error&) {}
      }
    }
  };
  for (const Cx& lam : lambdas) {
    Conic dgn(a.m - lam * b.m);
    if (dgn.classify(kRankTol * 1e3) == ConicClass::Regular) continue;
    try_split(dgn, b);
    if (!pts.empty()) break;
  }
  if (pts.empty()) fail(ErrorCode::DegeneratePencil, "no degenerate member found in the pencil");
  return pts;
}

ProjectiveMap::ProjectiveMap(const Mat3& a) : m(a) {
  double n = std::sqrt(m.squaredNorm());
  if (!(std::abs(m.determinant()) > 1e-12 * n * n * n))
    fail(ErrorCode::SingularMap, "projective map must be invertible");
}

ProjectiveMap ProjectiveMap::inverse() const { return ProjectiveMap(adjugate(m)); }

Point apply_map(const ProjectiveMap& f, const Point& p) { return Point(f.m * p.h); }

Line apply_map(const ProjectiveMap& f, const Line& l) {
  return Line(adjugate(f.m).transpose() * l.h);
}

Conic apply_map(const ProjectiveMap& f, const Conic& c) {
  Mat3 inv = adjugate(f.m);
  return Conic(inv.transpose() * c.m * inv);
}

Point ConicChart::at(double t) const {
  RVec3 u(std::cos(t), std::sin(t), 1.0);
  return Point((T * u).cast<Cx>());
}

Vec3 ConicChart::velocity(double t) const {
  RVec3 u(-std::sin(t), std::cos(t), 0.0);
  return (T * u).cast<Cx>();
}

ConicChart conic_trig_chart(const Conic& c) {
  RMat3 a = c.real_matrix();
  Eigen::SelfAdjointEigenSolver<RMat3> es(a);
  RVec3 ev = es.eigenvalues();       // ascending
  RMat3 v = es.eigenvectors();
  int npos = 0, nneg = 0;
  double top = ev.cwiseAbs().maxCoeff();
  for (int i = 0; i < 3; ++i) {
    if (ev[i] > kRankTol * top) ++npos;
    else if (ev[i] < -kRankTol * top) ++nneg;
  }
  if (npos + nneg != 3 || npos == 0 || nneg == 0)
    fail(ErrorCode::DegenerateConic, "trig chart needs a regular conic with real points");
  if (npos == 1) { ev = -ev; }        // normalize signature to (2,1)
  // order columns: two positive first, the negative last
  int order[3];
  int k = 0;
  for (int i = 2; i >= 0; --i) if (ev[i] > 0) order[k++] = i;
  for (int i = 0; i < 3; ++i) if (ev[i] < 0) order[k++] = i;
  RMat3 T;
  for (int i = 0; i < 3; ++i) T.col(i) = v.col(order[i]) / std::sqrt(std::abs(ev[order[i]]));
  ConicChart chart{T};
  return chart;
}

}  // namespace caustica
