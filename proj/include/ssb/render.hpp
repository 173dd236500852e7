#pragma once

#include <string>

#include "ssb/attractor.hpp"
#include "ssb/boundary.hpp"

namespace ssb {

/// SVG 1.1 drawing of a planar approximation: one dot per cell, sized by its error radius,
/// and a highlight layer for the boundary witnesses when there are any.
/// Throws Unsupported("render unavailable") for anything but 2D euclidean input.
std::string render_svg(const AttractorApprox& a, const BoundaryApprox* b = nullptr);

}  // namespace ssb
