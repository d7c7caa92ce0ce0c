#pragma once
#include <cstdint>

#include "patkit/geometry.hpp"

namespace patkit {

// Two perpendicular families of periodic bars (a grid pattern), rotated by
// `orientation` and centered on the image grid center. A node belongs to a
// bar when its signed distance to the nearest bar centerline of either
// family is at most bar_width/2.
struct GridPhantomSpec {
  double pitch = 0.0;      // bar-to-bar period, mm
  double bar_width = 0.0;  // mm
  double extent = 0.0;     // side of the bounding square, mm
  double amplitude = 1.0;
  double orientation = 0.0;  // radians
};

void validate(const GridPhantomSpec& spec);

CoefficientImage rasterize_grid_phantom(const GridPhantomSpec& spec, const ImageGrid& grid);

// True when the (rotated) point lies inside a bar of the pattern; shared with
// the tests so area estimates use the same membership rule.
bool grid_phantom_contains(const GridPhantomSpec& spec, Vec2 p, Vec2 center);

// Random coefficients restricted to nodes within the support radius, then
// alternately band-truncated and re-masked with a cosine taper so both the
// spatial support and the spectral band come out clean. Deterministic in seed.
CoefficientImage random_bandlimited_phantom(const ImageGrid& grid, double omega, uint64_t seed);

}  // namespace patkit
