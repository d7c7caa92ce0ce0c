#include "patkit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace patkit {

namespace {
double sample_bilinear(const CoefficientImage& img, Vec2 p) {
  const ImageGrid& g = img.grid;
  double fx = (p.x - g.center.x) / g.spacing + g.node_offset();
  double fy = (p.y - g.center.y) / g.spacing + g.node_offset();
  fx = std::clamp(fx, 0.0, static_cast<double>(g.n - 1));
  fy = std::clamp(fy, 0.0, static_cast<double>(g.n - 1));
  int ix = std::min(static_cast<int>(fx), g.n - 2);
  int iy = std::min(static_cast<int>(fy), g.n - 2);
  if (g.n == 1) return img.values[0];
  double ax = fx - ix, ay = fy - iy;
  double v00 = img.values[g.index(ix, iy)], v10 = img.values[g.index(ix + 1, iy)];
  double v01 = img.values[g.index(ix, iy + 1)], v11 = img.values[g.index(ix + 1, iy + 1)];
  return (1 - ax) * (1 - ay) * v00 + ax * (1 - ay) * v10 + (1 - ax) * ay * v01 + ax * ay * v11;
}

// contrast of one period window [uc - p/2, uc + p/2] along direction eu at
// offset v along ev
double period_contrast(const CoefficientImage& img, Vec2 center, Vec2 eu, Vec2 ev, double uc,
                       double v, double pitch, double step) {
  double vmax = -std::numeric_limits<double>::infinity();
  double vmin = std::numeric_limits<double>::infinity();
  int ns = std::max(8, static_cast<int>(std::ceil(pitch / step)));
  for (int i = 0; i <= ns; ++i) {
    double u = uc - 0.5 * pitch + pitch * i / ns;
    Vec2 p = center + u * eu + v * ev;
    double val = sample_bilinear(img, p);
    vmax = std::max(vmax, val);
    vmin = std::min(vmin, val);
  }
  if (!(vmax + vmin > 0.0)) return 0.0;
  return std::clamp((vmax - vmin) / (vmax + vmin), 0.0, 1.0);
}
}  // namespace

MetricsReport compute_metrics(const CoefficientImage& x, const CoefficientImage& reference,
                              const GridPhantomSpec& spec, double contrast_threshold) {
  if (x.grid.n != reference.grid.n ||
      std::abs(x.grid.spacing - reference.grid.spacing) > 1e-12 * x.grid.spacing)
    throw std::invalid_argument("metrics: image grids differ");
  validate(spec);

  double refn = l2_norm(reference.values);
  if (refn == 0.0) throw std::invalid_argument("metrics: zero reference image");

  MetricsReport rep;
  rep.contrast_threshold = contrast_threshold;

  double err2 = 0.0, peak = 0.0;
  for (size_t i = 0; i < x.values.size(); ++i) {
    double d = x.values[i] - reference.values[i];
    err2 += d * d;
    peak = std::max(peak, std::abs(reference.values[i]));
  }
  rep.relative_l2 = std::sqrt(err2) / refn;
  double mse = err2 / x.values.size();
  rep.psnr = mse == 0.0 ? std::numeric_limits<double>::infinity()
                        : 10.0 * std::log10(peak * peak / mse);

  // bar modulation, measured across each family along lines through the gap
  // centers of the other family
  double c = std::cos(spec.orientation), s = std::sin(spec.orientation);
  Vec2 eu{c, s}, ev{-s, c};
  double half = 0.5 * spec.extent;
  double step = std::min(x.grid.spacing, spec.bar_width) / 4.0;
  std::vector<double> scores;
  int kmax = static_cast<int>(std::floor(half / spec.pitch - 0.5));
  int jmax = static_cast<int>(std::floor((half - 1.5 * spec.pitch) / spec.pitch));
  for (int family = 0; family < 2; ++family) {
    Vec2 du = family == 0 ? eu : ev;
    Vec2 dv = family == 0 ? ev : eu;
    for (int k = -kmax - 1; k <= kmax; ++k) {
      double v = (k + 0.5) * spec.pitch;
      if (std::abs(v) > half) continue;
      for (int j = -jmax; j <= jmax; ++j)
        scores.push_back(period_contrast(x, x.grid.center, du, dv, j * spec.pitch, v,
                                         spec.pitch, step));
    }
  }
  if (!scores.empty()) {
    size_t mid = scores.size() / 2;
    std::nth_element(scores.begin(), scores.begin() + mid, scores.end());
    rep.grid_contrast = scores[mid];
  }
  rep.resolved = rep.grid_contrast >= contrast_threshold;
  return rep;
}

}  // namespace patkit
