#pragma once

#include <optional>
#include <string>
#include <vector>

#include "caustica/reflect.hpp"

namespace caustica {

enum class ExoticCase { C2a1, C2a2, C2b1, C2b2, C2c1, C2c2, C2d };

const char* exotic_name(ExoticCase c);
std::optional<ExoticCase> exotic_from_name(const std::string& s);
bool exotic_needs_degree(ExoticCase c);  // 2a1/2a2 carry the family index N
const std::vector<ExoticCase>& all_exotic_cases();

// affine vector field of an exotic family member at (x1, x2)
Vec2 exotic_field_dir(ExoticCase c, int n, double x1, double x2);
double exotic_rho(ExoticCase c, int n);

// points of the parabola x2 = x1^2 where the field is tangent to the curve,
// finite points ordered by (re, im) of x1, the infinite point (if any) last
std::vector<Point> exotic_tangency_locus(ExoticCase c, int n);

struct ConicBoundary {
  enum class Shape { Ellipse, Circle, Parabola, General };
  Shape shape = Shape::Circle;
  Conic conic;        // real regular conic
  RMat3 cm;           // real matrix scaled so the interior is { x^T cm x < 0 }
  double ea = 1, eb = 1;
  ConicChart chart{};  // used for Shape::General
  bool closed = true;
  double t_lo = 0, t_hi = 0;  // sampling parameter range

  static ConicBoundary ellipse(double a, double b);
  static ConicBoundary circle(double r);
  static ConicBoundary parabola(double span = 3.0);
  static ConicBoundary general(const Conic& c, const RVec3& interior_witness);

  Point point_at(double t) const;
  Vec2 tangent_dir(double t) const;
  Line tangent_line_at(double t) const;
  bool contains(const Point& p, double tol = kTol) const;
};

struct TransversalField {
  enum class Kind { Normal, DualPencil, Exotic };
  Kind kind = Kind::Normal;
  Conic s;  // DualPencil generator
  ExoticCase ecase = ExoticCase::C2a1;
  int n = 1;
  static TransversalField normal();
  static TransversalField dual_pencil(const Conic& s);
  static TransversalField exotic(ExoticCase c, int n = 1);
};

// the transversal line of the field at a boundary point
Line transversal_field_eval(const ConicBoundary& b, const TransversalField& f,
                            const Point& x, double tol = kTol);

struct PhaseState {
  Vec2 pos;  // affine base point
  Vec2 dir;  // unit direction
  Line line() const;
  Point point() const { return Point::affine(pos[0], pos[1]); }
};

// one reflection: advance to the last forward boundary intersection and
// reflect the direction there; empty result means the orbit escapes
std::optional<PhaseState> billiard_step(const ConicBoundary& b, const TransversalField& f,
                                        const PhaseState& s, double tol = kTol);

std::vector<PhaseState> billiard_orbit(const ConicBoundary& b, const TransversalField& f,
                                       const PhaseState& s0, int steps, double tol = kTol);

// dual billiard: the dual curve gamma in the M plane together with the family
// of tangent-line involutions conjugated from the primal reflections
struct DualBilliard {
  Conic gamma;
  ConicBoundary primal;
  TransversalField field;
};

DualBilliard dualize_billiard(const ConicBoundary& b, const TransversalField& f);
Point dual_point_at(const DualBilliard& d, double t);   // P on gamma
Line dual_tangent_at(const DualBilliard& d, double t);  // L_P
// sigma_P applied to a point of L_P (P selected by the primal parameter t)
Point dual_reflect(const DualBilliard& d, double t, const Point& a, double tol = kTol);

}  // namespace caustica
