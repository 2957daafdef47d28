#include "caustica/scenario.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace caustica {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

double parse_number(const std::string& sec, const std::string& key, const std::string& text) {
  const char* begin = text.c_str();
  char* end = nullptr;
  double v = std::strtod(begin, &end);
  if (end == begin || trim(end) != "")
    fail(ErrorCode::ConfigError, "value of " + sec + "." + key + " is not a number: '" + text + "'");
  return v;
}

std::string fmt_res(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v == 0.0 ? 0.0 : v);
  return buf;
}

RMat3 sym_from_coeffs(const std::vector<double>& c, const std::string& what) {
  if (c.size() != 6)
    fail(ErrorCode::ConfigError, what + " needs six coefficients a11 a12 a13 a22 a23 a33");
  RMat3 m;
  m << c[0], c[1], c[2], c[1], c[3], c[4], c[2], c[4], c[5];
  return m;
}

RMat3 euclid_degenerate() {
  RMat3 a = RMat3::Zero();
  a(0, 0) = a(1, 1) = 1;
  return a;
}

// relative distance between projective classes of two nonzero matrices
double proportional_residual(const RMat3& p, const RMat3& q) {
  RMat3 u = p / p.norm(), v = q / q.norm();
  return std::min((u - v).norm(), (u + v).norm());
}

double complex_proportional_residual(const Mat3& p, const Mat3& q) {
  Cx s = (q.conjugate().cwiseProduct(p)).sum();
  double nq = q.norm();
  Mat3 diff = p - (s / (nq * nq)) * q;
  return diff.norm() / p.norm();
}

void append_report(Report& rep, const std::string& check_id, const std::vector<SampleRow>& rows) {
  for (const SampleRow& r : rows) {
    rep.rows.push_back({check_id, r.id, r.residual, r.pass});
    rep.max_residual = std::max(rep.max_residual, r.residual);
    rep.pass = rep.pass && r.pass;
  }
}

void append_row(Report& rep, const std::string& check_id, int id, double residual, bool ok) {
  rep.rows.push_back({check_id, id, residual, ok});
  rep.max_residual = std::max(rep.max_residual, residual);
  rep.pass = rep.pass && ok;
}

std::string surface_name(SurfaceKind k) {
  switch (k) {
    case SurfaceKind::Plane: return "plane";
    case SurfaceKind::Sphere: return "sphere";
    case SurfaceKind::Hyperbolic: return "hyperbolic";
  }
  return "?";
}

}  // namespace

bool ConfigMap::has(const std::string& sec, const std::string& key) const {
  auto s = kv.find(sec);
  return s != kv.end() && s->second.count(key) > 0;
}

std::string ConfigMap::get(const std::string& sec, const std::string& key) const {
  auto s = kv.find(sec);
  if (s != kv.end()) {
    auto v = s->second.find(key);
    if (v != s->second.end()) return v->second;
  }
  fail(ErrorCode::ConfigError, "missing required key " + sec + "." + key);
}

std::string ConfigMap::get_or(const std::string& sec, const std::string& key,
                              const std::string& fallback) const {
  return has(sec, key) ? get(sec, key) : fallback;
}

double ConfigMap::num(const std::string& sec, const std::string& key) const {
  return parse_number(sec, key, get(sec, key));
}

double ConfigMap::num_or(const std::string& sec, const std::string& key, double fallback) const {
  return has(sec, key) ? num(sec, key) : fallback;
}

std::vector<double> ConfigMap::num_list(const std::string& sec, const std::string& key) const {
  std::istringstream is(get(sec, key));
  std::vector<double> out;
  std::string tok;
  while (is >> tok) out.push_back(parse_number(sec, key, tok));
  return out;
}

ConfigMap parse_config(const std::string& text) {
  ConfigMap cfg;
  std::istringstream is(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']' || t.size() < 3)
        fail(ErrorCode::ConfigError, "malformed section header at line " + std::to_string(lineno));
      section = trim(t.substr(1, t.size() - 2));
      cfg.kv[section];
      continue;
    }
    size_t eq = t.find('=');
    if (eq == std::string::npos)
      fail(ErrorCode::ConfigError, "expected key = value at line " + std::to_string(lineno));
    if (section.empty())
      fail(ErrorCode::ConfigError, "key outside any [section] at line " + std::to_string(lineno));
    std::string key = trim(t.substr(0, eq)), value = trim(t.substr(eq + 1));
    if (key.empty())
      fail(ErrorCode::ConfigError, "empty key at line " + std::to_string(lineno));
    cfg.kv[section][key] = value;
  }
  return cfg;
}

ConfigMap load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::IoError, "cannot open config file " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return parse_config(os.str());
}

std::string report_to_csv(const Report& r) {
  std::ostringstream os;
  os << "scenario,check_id,sample_id,residual,verdict\n";
  for (const ReportRow& row : r.rows)
    os << r.scenario << "," << row.check_id << "," << row.sample_id << ","
       << fmt_res(row.residual) << "," << (row.pass ? "pass" : "fail") << "\n";
  return os.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::IoError, "cannot open output file " + path);
  out << content;
  if (!out) fail(ErrorCode::IoError, "failed writing " + path);
}

ConicBoundary table_from_config(const ConfigMap& cfg) {
  std::string shape = cfg.get_or("table", "shape", "ellipse");
  if (shape == "ellipse") return ConicBoundary::ellipse(cfg.num("table", "a"), cfg.num("table", "b"));
  if (shape == "circle") return ConicBoundary::circle(cfg.num("table", "r"));
  if (shape == "parabola") return ConicBoundary::parabola(cfg.num_or("table", "span", 3.0));
  if (shape == "conic") {
    RMat3 m = sym_from_coeffs(cfg.num_list("table", "conic"), "table.conic");
    std::vector<double> w = cfg.num_list("table", "witness");
    if (w.size() != 2) fail(ErrorCode::ConfigError, "table.witness needs two coordinates");
    return ConicBoundary::general(Conic::real(m), RVec3(w[0], w[1], 1.0));
  }
  fail(ErrorCode::ConfigError, "unknown table.shape '" + shape + "'");
}

TransversalField field_from_config(const ConfigMap& cfg) {
  std::string field = cfg.get_or("table", "field", "normal");
  if (field == "normal") return TransversalField::normal();
  if (field == "dual-pencil") {
    RMat3 s = sym_from_coeffs(cfg.num_list("table", "field-conic"), "table.field-conic");
    return TransversalField::dual_pencil(Conic::real(s));
  }
  if (field == "exotic") {
    std::string name = cfg.get("table", "case");
    std::optional<ExoticCase> c = exotic_from_name(name);
    if (!c) fail(ErrorCode::ConfigError, "unknown exotic case '" + name + "'");
    return TransversalField::exotic(*c, (int)cfg.num_or("table", "N", 1));
  }
  fail(ErrorCode::ConfigError, "unknown table.field '" + field + "'");
}

namespace {

RationalIntegral integral_from_config(const ConfigMap& cfg, const ConicBoundary& table,
                                      const TransversalField& field) {
  std::string kind = cfg.get("integral", "kind");
  if (kind == "canonical") {
    if (field.kind != TransversalField::Kind::Exotic)
      fail(ErrorCode::ConfigError, "integral.kind canonical needs table.field = exotic");
    return canonical_integral(field.ecase, field.n).rat;
  }
  if (kind == "pencil-ratio") {
    RMat3 u = cfg.has("integral", "u")
                  ? sym_from_coeffs(cfg.num_list("integral", "u"), "integral.u")
                  : ConfocalPencil::euclidean(table.conic).b;
    RMat3 a = cfg.has("integral", "a")
                  ? sym_from_coeffs(cfg.num_list("integral", "a"), "integral.a")
                  : euclid_degenerate();
    return pencil_ratio_integral(u, a);
  }
  if (kind == "circle") {
    HomPoly m1 = HomPoly::variable(0), m2 = HomPoly::variable(1), m3 = HomPoly::variable(2);
    return RationalIntegral(m1 * m1 + m2 * m2 - m3 * m3, m1 * m1 + m2 * m2);
  }
  if (kind == "coordinate-ratio") {
    return RationalIntegral(HomPoly::variable(0), HomPoly::variable(1));
  }
  if (kind == "invariant-curve") {
    RMat3 u = ConfocalPencil::euclidean(table.conic).b;
    RMat3 member = u - cfg.num("integral", "lambda") * euclid_degenerate();
    return invariant_curve_integral(quadratic_form_poly(member), 2);
  }
  fail(ErrorCode::ConfigError, "unknown integral.kind '" + kind + "'");
}

Conic caustic_from_config(const ConfigMap& cfg, const ConicBoundary& table,
                          const std::string& sec) {
  if (cfg.has(sec, "lambda"))
    return ConfocalPencil::euclidean(table.conic).member(cfg.num(sec, "lambda"));
  if (cfg.has(sec, "conic"))
    return Conic::real(sym_from_coeffs(cfg.num_list(sec, "conic"), sec + ".conic"));
  fail(ErrorCode::ConfigError, "section [" + sec + "] needs lambda or conic");
}

void run_simulate(const ConfigMap& cfg, const ConicBoundary& table, const TransversalField& field,
                  int steps, double tol, Report& rep) {
  Vec2 pos(cfg.num("simulate", "x"), cfg.num("simulate", "y"));
  Vec2 dir(cfg.num("simulate", "dx"), cfg.num("simulate", "dy"));
  if (dir.norm() == 0.0) fail(ErrorCode::ConfigError, "simulate direction must be nonzero");
  PhaseState s0{pos, dir.normalized()};
  std::vector<PhaseState> orbit = billiard_orbit(table, field, s0, steps);
  double scale = table.cm.cwiseAbs().maxCoeff();
  for (size_t i = 1; i < orbit.size(); ++i) {
    RVec3 h(orbit[i].pos[0], orbit[i].pos[1], 1.0);
    double res = std::abs(h.dot(table.cm * h)) / (scale * h.squaredNorm());
    append_row(rep, "on-boundary", (int)i, res, res <= tol);
  }
  // chord envelope: the confocal member picked out by the first chord
  bool want_caustic = cfg.get_or("simulate", "caustic", "auto") != "none";
  std::optional<Conic> member;
  if (want_caustic && orbit.size() > 1 && field.kind == TransversalField::Kind::Normal) {
    try {
      ConfocalPencil pencil = ConfocalPencil::euclidean(table.conic);
      RationalIntegral ratio = pencil_ratio_integral(pencil.b, pencil.a);
      double lam = eval_rational_integral(ratio, moment_vector(orbit[0].pos, orbit[0].dir));
      member = pencil.member(lam);
      for (size_t i = 0; i + 1 < orbit.size(); ++i) {
        double res = tangency_residual(orbit[i].line(), *member);
        append_row(rep, "tangency", (int)i, res, res <= tol);
      }
    } catch (const Error&) {
      member.reset();  // no regular confocal member for this chord
    }
  }
  if (cfg.get_or("simulate", "svg", "true") == "true")
    rep.svg = render_orbit_svg(orbit, table, member ? &*member : nullptr);
  rep.notes.push_back("orbit length " + std::to_string(orbit.size()));
}

void run_classify_pencil(const ConfigMap& cfg, Report& rep) {
  RMat3 subject;
  if (cfg.has("pencil", "u")) {
    RMat3 u = sym_from_coeffs(cfg.num_list("pencil", "u"), "pencil.u");
    RMat3 a = sym_from_coeffs(cfg.num_list("pencil", "a"), "pencil.a");
    double lambda0 = cfg.num("pencil", "lambda0");
    std::vector<double> steps = cfg.has("pencil", "steps") ? cfg.num_list("pencil", "steps")
                                                           : std::vector<double>{1e-2, 1e-3, 1e-4};
    subject = degenerate_pencil_limit(u, a, lambda0, steps);
    if (cfg.has("pencil", "expected")) {
      RMat3 expected = sym_from_coeffs(cfg.num_list("pencil", "expected"), "pencil.expected");
      double res = proportional_residual(subject, expected);
      append_row(rep, "limit", 0, res, res <= 1e-7);
    }
  } else {
    subject = sym_from_coeffs(cfg.num_list("form", "coeffs"), "form.coeffs");
  }
  NormalizationResult nr = normalize_form(subject);
  RMat3 x = nr.map.transpose() * nr.normalized * nr.map;
  double res = proportional_residual(x, subject);
  append_row(rep, "congruence", 0, res, res <= 1e-9);
  rep.notes.push_back("model " + surface_name(nr.model));
}

void run_dualize(const ConfigMap&, const ConicBoundary& table, const TransversalField& field,
                 int samples, double tol, Report& rep) {
  DualBilliard d = dualize_billiard(table, field);
  double scale = d.gamma.m.cwiseAbs().maxCoeff();
  for (int i = 0; i < samples; ++i) {
    double t = table.t_lo + (table.t_hi - table.t_lo) * golden_sequence(0.0, i + 1);
    Point p = dual_point_at(d, t);
    double res = std::abs(conic_eval(d.gamma, p)) / (scale * p.h.squaredNorm());
    append_row(rep, "on-gamma", i, res, res <= tol);
  }
  Conic back = dualize_conic(d.gamma);
  double res = complex_proportional_residual(back.m, table.conic.m);
  append_row(rep, "roundtrip", 0, res, res <= tol);
}

}  // namespace

Report run_scenario_config(const ConfigMap& cfg, const RunOptions& opt) {
  Report rep;
  rep.scenario = cfg.get("scenario", "name");
  std::string kind = cfg.get("scenario", "kind");
  if (kind != "simulate" && kind != "verify-caustic" && kind != "verify-integral" &&
      kind != "verify-invariant-curve" && kind != "classify-pencil" && kind != "dualize" &&
      kind != "equivalence")
    fail(ErrorCode::ConfigError, "unknown scenario.kind '" + kind + "'");
  std::uint64_t seed =
      opt.seed ? *opt.seed : (std::uint64_t)cfg.num_or("scenario", "seed", 1);
  int samples = opt.samples ? *opt.samples : (int)cfg.num_or("scenario", "samples", 200);
  double default_tol = (kind == "verify-integral") ? 1e-8 : 1e-9;
  double tol = opt.tol ? *opt.tol : cfg.num_or("scenario", "tol", default_tol);

  if (kind == "classify-pencil") {
    run_classify_pencil(cfg, rep);
    return rep;
  }

  ConicBoundary table = table_from_config(cfg);
  TransversalField field = field_from_config(cfg);

  if (kind == "simulate") {
    run_simulate(cfg, table, field, (int)cfg.num_or("simulate", "steps", 20), tol, rep);
  } else if (kind == "verify-caustic") {
    Conic alpha = caustic_from_config(cfg, table, "caustic");
    CausticReport cr = check_complex_caustic(table, field, alpha, samples, seed, tol);
    append_report(rep, "tangency", cr.rows);
    rep.pass = rep.pass && cr.pass;
    rep.notes.push_back("permuted " + std::to_string(cr.permuted) + ", fixed " +
                        std::to_string(cr.fixed_count) + ", evaluated " +
                        std::to_string(cr.evaluated));
  } else if (kind == "verify-integral") {
    RationalIntegral r = integral_from_config(cfg, table, field);
    InvarianceReport ir = check_reflection_invariance(r, table, field, samples, seed, tol);
    append_report(rep, "primal", ir.rows);
    rep.pass = rep.pass && ir.pass;
    if (cfg.get_or("integral", "dual", "false") == "true") {
      DualBilliard d = dualize_billiard(table, field);
      InvarianceReport dr = check_dual_invariance(r, d, samples, seed, tol);
      append_report(rep, "dual", dr.rows);
      rep.pass = rep.pass && dr.pass;
      rep.notes.push_back(dr.primal_agrees ? "primal and dual verdicts agree"
                                           : "primal and dual verdicts disagree");
    }
  } else if (kind == "verify-invariant-curve") {
    DualBilliard d = dualize_billiard(table, field);
    Conic s_star;
    if (cfg.has("curve", "lambda")) {
      RMat3 u = ConfocalPencil::euclidean(table.conic).b;
      s_star = Conic::real(u - cfg.num("curve", "lambda") * euclid_degenerate());
    } else {
      s_star = Conic::real(sym_from_coeffs(cfg.num_list("curve", "conic"), "curve.conic"));
    }
    CausticReport cr = check_invariant_curve(d, s_star, samples, seed, tol);
    append_report(rep, "setwise", cr.rows);
    rep.pass = rep.pass && cr.pass;
    RationalIntegral r = invariant_curve_integral(quadratic_form_poly(s_star.real_matrix()), 2);
    InvarianceReport ir = check_dual_invariance(r, d, samples, seed, tol);
    append_report(rep, "integral", ir.rows);
    rep.pass = rep.pass && ir.pass;
  } else if (kind == "equivalence") {
    RMat3 a;
    if (cfg.has("equivalence", "lambda")) {
      RMat3 u = ConfocalPencil::euclidean(table.conic).b;
      a = u - cfg.num("equivalence", "lambda") * euclid_degenerate();
    } else {
      a = sym_from_coeffs(cfg.num_list("equivalence", "a"), "equivalence.a");
    }
    EquivalenceReport er = equivalence_check(table, a, samples, seed, tol);
    append_report(rep, "reflection", er.rows);
    rep.pass = rep.pass && er.pass;
    rep.notes.push_back("model " + surface_name(normalize_form(a).model));
  } else if (kind == "dualize") {
    run_dualize(cfg, table, field, samples, tol, rep);
  } else {
    fail(ErrorCode::ConfigError, "unknown scenario.kind '" + kind + "'");
  }
  return rep;
}

Report run_scenario(const std::string& path, const RunOptions& opt) {
  ConfigMap cfg = load_config(path);
  Report rep = run_scenario_config(cfg, opt);
  if (opt.write_files) {
    write_text_file(opt.out_dir + "/" + rep.scenario + ".csv", report_to_csv(rep));
    if (!rep.svg.empty()) write_text_file(opt.out_dir + "/" + rep.scenario + ".svg", rep.svg);
  }
  return rep;
}

}  // namespace caustica
