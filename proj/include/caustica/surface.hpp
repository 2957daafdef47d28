#pragma once

#include <optional>

#include "caustica/reflect.hpp"

namespace caustica {

enum class SurfaceKind { Plane, Sphere, Hyperbolic };

RMat3 surface_form(SurfaceKind k);

// representative of p on the model surface; Sphere uses a fixed hemisphere
// convention, Hyperbolic picks the sheet x3 > 0
RVec3 lift_to_surface(SurfaceKind k, const Point& p);
Point project_to_plane(const RVec3& x);

struct SurfaceState {
  RVec3 x;  // point on the surface
  RVec3 v;  // tangent velocity
};

struct SurfaceBoundary {
  RMat3 cone;  // interior of the table is { x^T cone x < 0 } on the surface
  static SurfaceBoundary make(const RMat3& cone, const RVec3& interior_witness);
};

// geodesic flow to the next boundary crossing, then reflect; empty result
// means the geodesic never returns to the boundary
std::optional<SurfaceState> surface_billiard_step(SurfaceKind k, const SurfaceBoundary& b,
                                                  const SurfaceState& s, double tol = kTol);

// normalize a state: project x onto the surface, make v tangent and unit
SurfaceState normalize_state(SurfaceKind k, const RVec3& x, const RVec3& v);

// tangent direction of the boundary curve at a boundary point
RVec3 surface_boundary_tangent(SurfaceKind k, const SurfaceBoundary& b, const RVec3& x);

}  // namespace caustica
