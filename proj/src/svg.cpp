#include "caustica/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

namespace caustica {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v == 0.0 ? 0.0 : v);  // normalize -0
  return buf;
}

std::vector<Vec2> boundary_polyline(const ConicBoundary& b) {
  const int segments = 256;
  double lo = b.t_lo, hi = b.t_hi;
  std::vector<Vec2> pts;
  pts.reserve(segments + 1);
  for (int i = 0; i <= segments; ++i) {
    double t = lo + (hi - lo) * i / segments;
    pts.push_back(b.point_at(t).affine_xy());
  }
  return pts;
}

std::vector<Vec2> conic_polyline(const Conic& c) {
  ConicChart chart = conic_trig_chart(c);
  const int segments = 256;
  std::vector<Vec2> pts;
  pts.reserve(segments + 1);
  for (int i = 0; i <= segments; ++i) {
    double t = 2.0 * std::numbers::pi * i / segments;
    Point p = chart.at(t);
    if (p.is_infinite(1e-6)) continue;  // hyperbola branch crossing; gap is fine
    pts.push_back(p.affine_xy());
  }
  return pts;
}

void emit_polyline(std::ostringstream& os, const std::vector<Vec2>& pts, const char* style) {
  if (pts.empty()) return;
  os << "<polyline fill=\"none\" " << style << " points=\"";
  for (size_t i = 0; i < pts.size(); ++i) {
    if (i) os << " ";
    os << fmt(pts[i][0]) << "," << fmt(pts[i][1]);
  }
  os << "\"/>\n";
}

}  // namespace

std::string render_orbit_svg(const std::vector<PhaseState>& orbit, const ConicBoundary& b,
                             const Conic* caustic) {
  std::vector<Vec2> outline = boundary_polyline(b);
  std::vector<Vec2> chords;
  chords.reserve(orbit.size());
  for (const PhaseState& s : orbit) chords.push_back(s.pos);
  std::vector<Vec2> envelope;
  if (caustic) {
    try {
      envelope = conic_polyline(*caustic);
    } catch (const Error&) {
      envelope.clear();  // no real trigonometric branch to draw
    }
  }
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const Vec2& p : outline) {
    xmin = std::min(xmin, p[0]);
    xmax = std::max(xmax, p[0]);
    ymin = std::min(ymin, p[1]);
    ymax = std::max(ymax, p[1]);
  }
  for (const Vec2& p : chords) {
    xmin = std::min(xmin, p[0]);
    xmax = std::max(xmax, p[0]);
    ymin = std::min(ymin, p[1]);
    ymax = std::max(ymax, p[1]);
  }
  double margin = 0.1 * std::max(xmax - xmin, ymax - ymin);
  if (!(margin > 0)) margin = 1.0;
  double w = (xmax - xmin) + 2 * margin, h = (ymax - ymin) + 2 * margin;
  double stroke = 0.004 * std::max(w, h);
  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << fmt(xmin - margin) << " "
     << fmt(-ymax - margin) << " " << fmt(w) << " " << fmt(h) << "\">\n";
  os << "<g transform=\"scale(1 -1)\">\n";
  std::string base = "stroke-width=\"" + fmt(stroke) + "\"";
  emit_polyline(os, outline, ("stroke=\"#202020\" " + base).c_str());
  if (!envelope.empty())
    emit_polyline(os, envelope,
                  ("stroke=\"#c0392b\" stroke-dasharray=\"" + fmt(4 * stroke) + "\" " + base).c_str());
  emit_polyline(os, chords, ("stroke=\"#2a6f97\" " + base).c_str());
  os << "</g>\n</svg>\n";
  return os.str();
}

}  // namespace caustica
