#include "patkit/phantom.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "patkit/spectral.hpp"

namespace patkit {

void validate(const GridPhantomSpec& spec) {
  if (!(spec.bar_width > 0.0)) throw std::invalid_argument("phantom: bar_width must be > 0");
  if (spec.bar_width > spec.pitch) throw std::invalid_argument("phantom: bar_width must be <= pitch");
  if (spec.pitch > spec.extent) throw std::invalid_argument("phantom: pitch must be <= extent");
  if (spec.amplitude < 0.0) throw std::invalid_argument("phantom: amplitude must be >= 0");
}

bool grid_phantom_contains(const GridPhantomSpec& spec, Vec2 p, Vec2 center) {
  double c = std::cos(spec.orientation), s = std::sin(spec.orientation);
  Vec2 d = p - center;
  // coordinates in the frame of the (rotated) pattern
  double u = c * d.x + s * d.y;
  double v = -s * d.x + c * d.y;
  double half = 0.5 * spec.extent;
  if (std::abs(u) > half || std::abs(v) > half) return false;
  // distance to the nearest bar centerline of each family; centerlines sit at
  // integer multiples of the pitch through the pattern center
  double du = std::abs(std::remainder(u, spec.pitch));
  double dv = std::abs(std::remainder(v, spec.pitch));
  return du <= 0.5 * spec.bar_width || dv <= 0.5 * spec.bar_width;
}

CoefficientImage rasterize_grid_phantom(const GridPhantomSpec& spec, const ImageGrid& grid) {
  validate(spec);
  validate(grid);
  double c = std::abs(std::cos(spec.orientation)), s = std::abs(std::sin(spec.orientation));
  double bbox_half = 0.5 * spec.extent * (c + s);
  if (bbox_half > grid.half_extent() + 1e-9)
    throw std::invalid_argument("phantom: extent does not fit inside the image grid");
  double corner_radius = 0.5 * spec.extent * std::sqrt(2.0);
  if (corner_radius > grid.support_radius + grid.spacing + 1e-9)
    throw std::invalid_argument("phantom: extent does not fit inside the grid support radius");

  CoefficientImage out(grid);
  for (int iy = 0; iy < grid.n; ++iy)
    for (int ix = 0; ix < grid.n; ++ix)
      if (grid_phantom_contains(spec, grid.node(ix, iy), grid.center))
        out.values[grid.index(ix, iy)] = spec.amplitude;
  return out;
}

namespace {
// cosine taper: 1 inside R0-w, smooth falloff to 0 at R0, 0 outside
double taper_weight(double r, double r0, double w) {
  if (r >= r0) return 0.0;
  if (r <= r0 - w) return 1.0;
  return 0.5 * (1.0 + std::cos(M_PI * (r - (r0 - w)) / w));
}
}  // namespace

CoefficientImage random_bandlimited_phantom(const ImageGrid& grid, double omega, uint64_t seed) {
  validate(grid);
  if (!(omega > 0.0)) throw std::invalid_argument("random phantom: omega must be > 0");

  std::mt19937_64 rng(seed);
  auto uniform = [&rng]() { return ((rng() >> 11) + 1.0) * 0x1.0p-53; };  // (0, 1]
  // Box-Muller, hand-rolled so the draw sequence is pinned down by the seed
  // alone and not by library implementation details.
  auto gaussian = [&]() {
    double u1 = uniform(), u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  };

  CoefficientImage x(grid);
  double r0 = grid.support_radius;
  for (int iy = 0; iy < grid.n; ++iy)
    for (int ix = 0; ix < grid.n; ++ix)
      if (norm(grid.node(ix, iy) - grid.center) <= r0)
        x.values[grid.index(ix, iy)] = gaussian();

  double w = std::min(4.0 * grid.spacing, 0.25 * r0);
  if (!(w > 0.0)) return x;  // support too small to shape anything
  // Truncate a margin below the requested band so the taper's spectral
  // spread stays inside it; the margin tracks the taper bandwidth.
  double omega_inner = std::max(0.5 * omega, omega - 1.5 * M_PI / w);
  for (int it = 0; it < 3; ++it) {
    band_truncate(x, omega_inner);
    for (int iy = 0; iy < grid.n; ++iy)
      for (int ix = 0; ix < grid.n; ++ix)
        x.values[grid.index(ix, iy)] *=
            taper_weight(norm(grid.node(ix, iy) - grid.center), r0, w);
  }

  double peak = 0.0;
  for (double v : x.values) peak = std::max(peak, std::abs(v));
  if (peak > 0.0)
    for (double& v : x.values) v /= peak;
  return x;
}

}  // namespace patkit
