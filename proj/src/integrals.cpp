#include "caustica/integrals.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <sstream>

namespace caustica {

HomPoly HomPoly::zero(int d) {
  HomPoly p;
  p.deg = d;
  p.c.assign(size(d), 0.0);
  return p;
}

HomPoly HomPoly::constant(double v) {
  HomPoly p = zero(0);
  p.c[0] = v;
  return p;
}

HomPoly HomPoly::variable(int which) {
  HomPoly p = zero(1);
  p.c[which] = 1.0;
  return p;
}

namespace {

using Ld = long double;
using CLd = std::complex<long double>;

template <typename T>
T eval_poly(const HomPoly& p, const T m[3]) {
  std::vector<T> p1(p.deg + 1, T(1)), p2(p.deg + 1, T(1)), p3(p.deg + 1, T(1));
  for (int i = 1; i <= p.deg; ++i) {
    p1[i] = p1[i - 1] * m[0];
    p2[i] = p2[i - 1] * m[1];
    p3[i] = p3[i - 1] * m[2];
  }
  T acc(0);
  for (int i = p.deg; i >= 0; --i)
    for (int j = p.deg - i; j >= 0; --j)
      acc += T(p.c[HomPoly::index(p.deg, i, j)]) * p1[i] * p2[j] * p3[p.deg - i - j];
  return acc;
}

template <typename T>
T eval_factored(const HomPoly& expanded, const PolyFactors& fs, const T m[3]) {
  if (fs.empty()) return eval_poly(expanded, m);
  T acc(1);
  for (const auto& [f, k] : fs) {
    T val = eval_poly(f, m);
    for (int i = 0; i < k; ++i) acc *= val;
  }
  return acc;
}

}  // namespace

Cx HomPoly::eval(const Vec3& m) const {
  CLd mm[3] = {CLd(m[0]), CLd(m[1]), CLd(m[2])};
  CLd v = eval_poly(*this, mm);
  return Cx(static_cast<double>(v.real()), static_cast<double>(v.imag()));
}

double HomPoly::eval(const RVec3& m) const {
  Ld mm[3] = {m[0], m[1], m[2]};
  return static_cast<double>(eval_poly(*this, mm));
}

double HomPoly::coeff_scale() const {
  double s = 0;
  for (double x : c) s += std::abs(x);
  return s;
}

HomPoly HomPoly::operator+(const HomPoly& o) const {
  if (deg != o.deg) fail(ErrorCode::NotHomogeneous, "degree mismatch in sum");
  HomPoly p = *this;
  for (size_t i = 0; i < c.size(); ++i) p.c[i] += o.c[i];
  return p;
}

HomPoly HomPoly::operator-(const HomPoly& o) const { return *this + o * -1.0; }

HomPoly HomPoly::operator*(const HomPoly& o) const {
  HomPoly p = zero(deg + o.deg);
  for (int i = deg; i >= 0; --i)
    for (int j = deg - i; j >= 0; --j) {
      double a = c[index(deg, i, j)];
      if (a == 0.0) continue;
      for (int i2 = o.deg; i2 >= 0; --i2)
        for (int j2 = o.deg - i2; j2 >= 0; --j2) {
          double b = o.c[index(o.deg, i2, j2)];
          if (b == 0.0) continue;
          p.c[index(p.deg, i + i2, j + j2)] += a * b;
        }
    }
  return p;
}

HomPoly HomPoly::operator*(double s) const {
  HomPoly p = *this;
  for (double& x : p.c) x *= s;
  return p;
}

HomPoly HomPoly::pow(int k) const {
  HomPoly p = constant(1.0);
  for (int i = 0; i < k; ++i) p = p * *this;
  return p;
}

std::string HomPoly::to_string() const {
  std::ostringstream os;
  bool first = true;
  const char* names[3] = {"M1", "M2", "M3"};
  for (int i = deg; i >= 0; --i)
    for (int j = deg - i; j >= 0; --j) {
      double v = c[index(deg, i, j)];
      if (v == 0.0) continue;
      if (!first) os << (v < 0 ? " - " : " + ");
      else if (v < 0) os << "-";
      first = false;
      double av = std::abs(v);
      int e[3] = {i, j, deg - i - j};
      bool printed = false;
      if (av != 1.0 || (e[0] == 0 && e[1] == 0 && e[2] == 0)) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.12g", av);
        os << buf;
        printed = true;
      }
      for (int k = 0; k < 3; ++k) {
        if (e[k] == 0) continue;
        if (printed) os << "*";
        os << names[k];
        if (e[k] > 1) os << "^" << e[k];
        printed = true;
      }
    }
  if (first) os << "0";
  return os.str();
}

RationalIntegral::RationalIntegral(HomPoly n, HomPoly d) : num(std::move(n)), den(std::move(d)) {
  if (num.deg != den.deg)
    fail(ErrorCode::NotHomogeneous, "numerator and denominator degrees differ");
  if (den.coeff_scale() == 0.0) fail(ErrorCode::ZeroVector, "zero denominator");
}

namespace {

HomPoly expand_factors(const PolyFactors& fs) {
  HomPoly p = HomPoly::constant(1.0);
  for (const auto& [f, k] : fs) p = p * f.pow(k);
  return p;
}

}  // namespace

RationalIntegral::RationalIntegral(PolyFactors nf, PolyFactors df)
    : RationalIntegral(expand_factors(nf), expand_factors(df)) {
  num_factors = std::move(nf);
  den_factors = std::move(df);
}

double eval_rational_integral(const RationalIntegral& r, const RVec3& m) {
  RVec3 mm = m;
  double top = mm.cwiseAbs().maxCoeff();
  if (top == 0.0) fail(ErrorCode::ZeroVector, "zero moment vector");
  mm /= top;
  Ld md[3] = {mm[0], mm[1], mm[2]};
  Ld den = eval_factored(r.den, r.den_factors, md);
  if (std::abs(static_cast<double>(den)) <= 1e-13 * r.den.coeff_scale())
    fail(ErrorCode::OnPolarLocus, "denominator vanishes at this point");
  return static_cast<double>(eval_factored(r.num, r.num_factors, md) / den);
}

Cx eval_rational_integral(const RationalIntegral& r, const Vec3& m) {
  Vec3 mm = canonical(m);
  CLd md[3] = {CLd(mm[0]), CLd(mm[1]), CLd(mm[2])};
  CLd den = eval_factored(r.den, r.den_factors, md);
  if (std::abs(den) <= static_cast<Ld>(1e-13) * r.den.coeff_scale())
    fail(ErrorCode::OnPolarLocus, "denominator vanishes at this point");
  CLd v = eval_factored(r.num, r.num_factors, md) / den;
  return Cx(static_cast<double>(v.real()), static_cast<double>(v.imag()));
}

RVec3 moment_vector(const Vec2& x, const Vec2& v) {
  if (v.norm() == 0.0) fail(ErrorCode::ZeroVelocity, "zero direction has no moment");
  return RVec3(-v[1], v[0], x[0] * v[1] - x[1] * v[0]);
}

namespace {

std::string fmt_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

struct VPolys {
  HomPoly v1 = HomPoly::variable(1);              // v1 = M2
  HomPoly v2 = HomPoly::variable(0) * -1.0;       // v2 = -M1
  HomPoly dd = HomPoly::variable(2);              // Delta = M3
  HomPoly base() const { return v1 * dd * 4.0 - v2 * v2; }
  HomPoly shifted(double cj) const { return v1 * dd * 4.0 - v2 * v2 * cj; }
};

}  // namespace

CanonicalIntegral canonical_integral(ExoticCase c, int n) {
  VPolys v;
  std::ostringstream os;
  switch (c) {
    case ExoticCase::C2a1: {
      if (n < 1) fail(ErrorCode::InvalidCase, "2a1 needs N >= 1");
      PolyFactors nf = {{v.base(), 2 * n + 1}};
      PolyFactors df = {{v.v1, 2}};
      os << "(4*v1*Delta - v2^2)^" << (2 * n + 1) << " / (v1^2";
      for (int j = 1; j <= n; ++j) {
        double cj = -4.0 * j * (2 * n + 1 - j) / ((2 * n + 1 - 2 * j) * (2 * n + 1 - 2 * j));
        df.push_back({v.shifted(cj), 2});
        os << " * (4*v1*Delta + " << fmt_num(-cj) << "*v2^2)^2";
      }
      os << ")";
      return {RationalIntegral(nf, df), os.str()};
    }
    case ExoticCase::C2a2: {
      if (n < 1) fail(ErrorCode::InvalidCase, "2a2 needs N >= 1");
      PolyFactors nf = {{v.base(), n + 1}};
      PolyFactors df = {{v.v1, 1}, {v.v2, 1}};
      os << "(4*v1*Delta - v2^2)^" << (n + 1) << " / (v1*v2";
      for (int j = 1; j <= n; ++j) {
        double cj = -1.0 * j * (2 * n + 2 - j) / ((n + 1 - j) * (n + 1 - j));
        df.push_back({v.shifted(cj), 1});
        os << " * (4*v1*Delta + " << fmt_num(-cj) << "*v2^2)";
      }
      os << ")";
      return {RationalIntegral(nf, df), os.str()};
    }
    case ExoticCase::C2b1: {
      PolyFactors nf = {{v.base(), 2}};
      PolyFactors df = {{v.v1 * v.dd * 4.0 + v.v2 * v.v2 * 3.0, 1},
                        {v.v1 * 2.0 + v.v2, 1},
                        {v.dd * 2.0 + v.v2, 1}};
      os << "(4*v1*Delta - v2^2)^2 / ((4*v1*Delta + 3*v2^2) * (2*v1 + v2) * (2*Delta + v2))";
      return {RationalIntegral(nf, df), os.str()};
    }
    case ExoticCase::C2b2: {
      PolyFactors nf = {{v.base(), 2}};
      HomPoly f1 = v.v2 * v.v2 + v.dd * v.dd * 4.0 + v.v1 * v.dd * 4.0 + v.v1 * v.v1 * 4.0;
      HomPoly f2 = v.v2 * v.v2 + v.v1 * v.v1 * 4.0;
      PolyFactors df = {{f1, 1}, {f2, 1}};
      os << "(4*v1*Delta - v2^2)^2 / ((v2^2 + 4*Delta^2 + 4*v1*Delta + 4*v1^2) * (v2^2 + 4*v1^2))";
      return {RationalIntegral(nf, df), os.str()};
    }
    case ExoticCase::C2c1: {
      PolyFactors nf = {{v.base(), 3}};
      PolyFactors df = {{v.v1.pow(3) + v.dd.pow(3) + v.v1 * v.v2 * v.dd, 2}};
      os << "(4*v1*Delta - v2^2)^3 / ((v1^3 + Delta^3 + v1*v2*Delta)^2)";
      return {RationalIntegral(nf, df), os.str()};
    }
    case ExoticCase::C2c2: {
      PolyFactors nf = {{v.base(), 3}};
      HomPoly g = v.v2.pow(3) + v.v2 * v.v2 * v.v1 * 2.0 +
                  (v.v1 * v.v1 + v.v2 * v.v2 * 2.0 + v.v1 * v.v2 * 5.0) * v.dd +
                  v.v1 * v.dd * v.dd;
      PolyFactors df = {{g, 2}};
      os << "(4*v1*Delta - v2^2)^3 / ((v2^3 + 2*v1*v2^2 + (v1^2 + 2*v2^2 + 5*v1*v2)*Delta + v1*Delta^2)^2)";
      return {RationalIntegral(nf, df), os.str()};
    }
    case ExoticCase::C2d: {
      PolyFactors nf = {{v.base(), 3}};
      HomPoly f1 = v.v1 * v.dd + v.v2 * v.v2 * 2.0;
      HomPoly f2 = v.v1 * 2.0 + v.v2;
      HomPoly f3 = v.v1 * v.v2 * v.v2 * 8.0 + v.v2.pow(3) * 2.0 +
                   (v.v1 * v.v1 * 4.0 + v.v2 * v.v2 * 5.0 + v.v1 * v.v2 * 28.0) * v.dd +
                   v.v1 * v.dd * v.dd * 16.0;
      PolyFactors df = {{f1, 1}, {f2, 1}, {f3, 1}};
      os << "(4*v1*Delta - v2^2)^3 / ((v1*Delta + 2*v2^2) * (2*v1 + v2) * "
            "(8*v1*v2^2 + 2*v2^3 + (4*v1^2 + 5*v2^2 + 28*v1*v2)*Delta + 16*v1*Delta^2))";
      return {RationalIntegral(nf, df), os.str()};
    }
  }
  fail(ErrorCode::InvalidCase, "unknown exotic case");
}

HomPoly quadratic_form_poly(const RMat3& a) {
  RMat3 s = (a + a.transpose()) / 2.0;
  HomPoly p = HomPoly::zero(2);
  p.at(2, 0) = s(0, 0);
  p.at(1, 1) = 2 * s(0, 1);
  p.at(1, 0) = 2 * s(0, 2);
  p.at(0, 2) = s(1, 1);
  p.at(0, 1) = 2 * s(1, 2);
  p.at(0, 0) = s(2, 2);
  return p;
}

RationalIntegral pencil_ratio_integral(const RMat3& u, const RMat3& a) {
  double nu = u.norm(), na = a.norm();
  if (nu == 0.0 || na == 0.0) fail(ErrorCode::ZeroVector, "zero form in ratio");
  double plus = (u / nu + a / na).norm(), minus = (u / nu - a / na).norm();
  if (std::min(plus, minus) <= 1e-10)
    fail(ErrorCode::ProportionalConics, "forms are proportional, ratio is constant");
  return RationalIntegral(quadratic_form_poly(u), quadratic_form_poly(a));
}

RationalIntegral invariant_curve_integral(const HomPoly& h, int d) {
  if (h.deg != d) fail(ErrorCode::NotHomogeneous, "curve polynomial degree must equal d");
  HomPoly iso = HomPoly::variable(0) * HomPoly::variable(0) +
                HomPoly::variable(1) * HomPoly::variable(1);
  return RationalIntegral(PolyFactors{{h, 2}}, PolyFactors{{iso, d}});
}

std::vector<double> real_locus_params(ExoticCase c, int n) {
  std::vector<double> out;
  for (const Point& p : exotic_tangency_locus(c, n)) {
    if (p.is_infinite()) continue;
    if (std::abs(p.h[0].imag()) < kImagChop) out.push_back(p.h[0].real() / p.h[2].real());
  }
  return out;
}

namespace {

double rel_jump(double a, double b) {
  double scale = std::max(std::max(std::abs(a), std::abs(b)), 1e-6);
  return std::abs(a - b) / scale;
}

}  // namespace

InvarianceReport check_reflection_invariance(const RationalIntegral& r, const ConicBoundary& b,
                                             const TransversalField& f, int n, std::uint64_t seed,
                                             double tol) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> tpick(b.t_lo, b.t_hi);
  std::uniform_real_distribution<double> apick(0.0, std::numbers::pi);
  std::vector<double> excluded;
  if (f.kind == TransversalField::Kind::Exotic) excluded = real_locus_params(f.ecase, f.n);
  InvarianceReport rep;
  int attempts = 0;
  double sum = 0;
  while (rep.evaluated < n && attempts < 200 * n) {
    ++attempts;
    double t = tpick(rng);
    bool skip = false;
    for (double e : excluded)
      if (std::abs(t - e) < 1e-3) skip = true;
    if (skip) continue;
    Point q = b.point_at(t);
    Vec2 xy = q.affine_xy();
    Vec2 tau = b.tangent_dir(t).normalized();
    double ang = apick(rng);
    Vec2 v(std::cos(ang), std::sin(ang));
    if (std::abs(v[0] * tau[1] - v[1] * tau[0]) < 0.05) continue;  // nearly tangent chord
    try {
      Line tangent = polar_line(q, b.conic);
      Line trans = transversal_field_eval(b, f, q);
      PlaneInvolution inv = build_projective_involution(tangent, trans, q);
      Cx2 img = inv.apply(Cx2(Cx(v[0]), Cx(v[1])));
      Vec2 w(chop_im(img[0]).real(), chop_im(img[1]).real());
      if (w.norm() == 0.0) continue;
      double rin = eval_rational_integral(r, RVec3(moment_vector(xy, v)));
      double rout = eval_rational_integral(r, RVec3(moment_vector(xy, w)));
      double jump = rel_jump(rin, rout);
      bool pass = jump <= tol;
      rep.rows.push_back({rep.evaluated, jump, pass});
      rep.max_jump = std::max(rep.max_jump, jump);
      sum += jump;
      if (!pass) ++rep.failures;
      ++rep.evaluated;
    } catch (const Error&) {
      continue;  // excluded or ill-posed sample; draw another
    }
  }
  rep.mean_jump = rep.evaluated ? sum / rep.evaluated : 0.0;
  rep.pass = rep.evaluated == n && rep.failures == 0;
  return rep;
}

InvarianceReport check_dual_invariance(const RationalIntegral& r, const DualBilliard& d, int n,
                                       std::uint64_t seed, double tol) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> tpick(d.primal.t_lo, d.primal.t_hi);
  std::uniform_real_distribution<double> spick(-3.0, 3.0);
  std::vector<double> excluded;
  if (d.field.kind == TransversalField::Kind::Exotic)
    excluded = real_locus_params(d.field.ecase, d.field.n);
  InvarianceReport rep;
  int attempts = 0;
  double sum = 0;
  while (rep.evaluated < n && attempts < 200 * n) {
    ++attempts;
    double t = tpick(rng);
    bool skip = false;
    for (double e : excluded)
      if (std::abs(t - e) < 1e-3) skip = true;
    if (skip) continue;
    try {
      Line lp = dual_tangent_at(d, t);
      Vec3 b1, b2;
      line_point_basis(lp, b1, b2);
      double s = spick(rng);
      Point a(b1 + Cx(s) * b2);
      Point img = dual_reflect(d, t, a);
      if (!nearly_real(a.h) || !nearly_real(img.h)) continue;
      double ra = eval_rational_integral(r, RVec3(a.h.real()));
      double rb = eval_rational_integral(r, RVec3(img.h.real()));
      double jump = rel_jump(ra, rb);
      bool pass = jump <= tol;
      rep.rows.push_back({rep.evaluated, jump, pass});
      rep.max_jump = std::max(rep.max_jump, jump);
      sum += jump;
      if (!pass) ++rep.failures;
      ++rep.evaluated;
    } catch (const Error&) {
      continue;
    }
  }
  rep.mean_jump = rep.evaluated ? sum / rep.evaluated : 0.0;
  rep.pass = rep.evaluated == n && rep.failures == 0;
  InvarianceReport primal = check_reflection_invariance(r, d.primal, d.field, n, seed, tol);
  rep.primal_agrees = (primal.pass == rep.pass);
  return rep;
}

}  // namespace caustica
