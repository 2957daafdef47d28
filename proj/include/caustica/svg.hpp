#pragma once

#include <string>
#include <vector>

#include "caustica/billiard.hpp"

namespace caustica {

// deterministic SVG figure: boundary outline, orbit chords, optional caustic
// envelope; byte-identical output for identical inputs
std::string render_orbit_svg(const std::vector<PhaseState>& orbit, const ConicBoundary& b,
                             const Conic* caustic = nullptr);

}  // namespace caustica
