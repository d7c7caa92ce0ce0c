#include "patkit/bump.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace patkit {

void validate(const BumpBasis& b) {
  if (!(b.spacing > 0.0)) throw std::invalid_argument("bump: spacing must be > 0");
  if (b.nu < 1) throw std::invalid_argument("bump: nu must be >= 1");
}

double BumpBasis::peak() const { return (nu + 1) / (M_PI * spacing * spacing); }

double BumpBasis::value(double r) const {
  double s = 1.0 - (r * r) / (spacing * spacing);
  if (s <= 0.0) return 0.0;
  double p = s;
  for (int i = 1; i < nu; ++i) p *= s;
  return peak() * p;
}

double BumpBasis::deriv(double r) const {
  double s = 1.0 - (r * r) / (spacing * spacing);
  if (s <= 0.0) return 0.0;
  double p = 1.0;
  for (int i = 1; i < nu; ++i) p *= s;
  return peak() * nu * p * (-2.0 * r / (spacing * spacing));
}

double synthesize_at(const CoefficientImage& x, const BumpBasis& basis, Vec2 p) {
  const ImageGrid& g = x.grid;
  double off = g.node_offset();
  // fractional node coordinates of p
  double fx = (p.x - g.center.x) / g.spacing + off;
  double fy = (p.y - g.center.y) / g.spacing + off;
  int cx = static_cast<int>(std::lround(fx));
  int cy = static_cast<int>(std::lround(fy));
  double acc = 0.0;
  for (int iy = std::max(0, cy - 1); iy <= std::min(g.n - 1, cy + 1); ++iy) {
    for (int ix = std::max(0, cx - 1); ix <= std::min(g.n - 1, cx + 1); ++ix) {
      double c = x.values[g.index(ix, iy)];
      if (c == 0.0) continue;
      acc += c * basis.value(norm(p - g.node(ix, iy)));
    }
  }
  return acc;
}

std::vector<double> synthesize(const CoefficientImage& x, const BumpBasis& basis,
                               const std::vector<Vec2>& eval_points) {
  validate(basis);
  if (std::abs(basis.spacing - x.grid.spacing) > 1e-12 * x.grid.spacing)
    throw std::invalid_argument("synthesize: basis spacing differs from grid spacing");
  std::vector<double> out(eval_points.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < static_cast<long>(eval_points.size()); ++i)
    out[i] = synthesize_at(x, basis, eval_points[i]);
  return out;
}

}  // namespace patkit
