#pragma once

#include <string>

#include "bdf/diagram.hpp"

namespace bdf {

struct RenderOptions {
  int size = 480;
  bool region_labels = false;
};

// Deterministic SVG of the base diagram: concentric radial layout, fold arcs
// as polylines, co-orientation arrows, cusp kinks, Lefschetz crosses,
// definite folds in a distinct stroke class.
std::string render_svg(const SlicedDiagram& d, const RenderOptions& opt = {});

}  // namespace bdf
