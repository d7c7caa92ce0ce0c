#include "patkit/forward.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace patkit {

namespace {
constexpr int kDistStepDivisor = 8;  // table distance step = h_x / 8
constexpr int kWindowNodes = 33;     // smooth-factor samples across the window

void distance_bounds(const std::vector<Vec2>& sensors, const ImageGrid& g, double* dmin,
                     double* dmax) {
  double he = g.half_extent();
  double lo = 1e300, hi = 0.0;
  for (const Vec2& s : sensors) {
    Vec2 rel = s - g.center;
    // nearest point of the bounding square and farthest corner
    double cx = std::clamp(rel.x, -he, he), cy = std::clamp(rel.y, -he, he);
    lo = std::min(lo, std::hypot(rel.x - cx, rel.y - cy));
    double fx = std::max(std::abs(rel.x - he), std::abs(rel.x + he));
    double fy = std::max(std::abs(rel.y - he), std::abs(rel.y + he));
    hi = std::max(hi, std::hypot(fx, fy));
  }
  *dmin = lo;
  *dmax = hi;
}
}  // namespace

ForwardOperator build_forward(const SensorGeometry& geom, const TimeGrid& tgrid,
                              const ImageGrid& igrid, const BumpBasis& basis) {
  validate(geom);
  validate(tgrid);
  validate(igrid);
  validate(basis);
  if (std::abs(basis.spacing - igrid.spacing) > 1e-12 * igrid.spacing)
    throw std::invalid_argument("build_forward: basis spacing differs from grid spacing");

  ForwardOperator op;
  op.geometry = geom;
  op.time_grid = tgrid;
  op.image_grid = igrid;
  op.basis = basis;
  op.sensors = sensor_positions(geom);

  double dmin = 0.0, dmax = 0.0;
  distance_bounds(op.sensors, igrid, &dmin, &dmax);

  // signals from the coefficient support must fit inside the time window
  double rho = std::min(igrid.support_radius + basis.spacing,
                        igrid.half_extent() * std::sqrt(2.0)) + basis.spacing;
  double need_lo = 1e300, need_hi = 0.0;
  for (const Vec2& s : op.sensors) {
    double rc = norm(s - igrid.center);
    need_lo = std::min(need_lo, rc - rho);
    need_hi = std::max(need_hi, rc + rho);
  }
  if (tgrid.start > std::max(need_lo, 0.0) + 1e-9 || tgrid.end() < need_hi - 1e-9)
    throw std::invalid_argument(
        "build_forward: time window too short for the source support (would truncate traces)");

  op.table = build_kernel_table(basis, std::max(dmin - tgrid.step, 2.21 * basis.spacing),
                                dmax + tgrid.step, igrid.spacing / kDistStepDivisor,
                                kWindowNodes);
  return op;
}

namespace {
void check_image(const ForwardOperator& op, const CoefficientImage& x) {
  const ImageGrid& a = op.image_grid;
  const ImageGrid& b = x.grid;
  if (a.n != b.n || std::abs(a.spacing - b.spacing) > 1e-12 * a.spacing ||
      norm(a.center - b.center) > 1e-9)
    throw std::invalid_argument("forward: coefficient image grid does not match the operator");
}

void check_data(const ForwardOperator& op, const Sinogram& g) {
  if (g.geometry.num_sensors != op.geometry.num_sensors ||
      g.time_grid.num_samples != op.time_grid.num_samples ||
      std::abs(g.time_grid.step - op.time_grid.step) > 1e-12 * op.time_grid.step ||
      std::abs(g.time_grid.start - op.time_grid.start) > 1e-9)
    throw std::invalid_argument("forward: sinogram layout does not match the operator");
}
}  // namespace

Sinogram apply(const ForwardOperator& op, const CoefficientImage& x, bool parallel) {
  check_image(op, x);
  Sinogram g(op.geometry, op.time_grid);
  const TimeGrid& tg = op.time_grid;
  const ImageGrid& ig = op.image_grid;
  const double h = op.basis.spacing;
  const int nt = tg.num_samples;
  const int m_total = op.geometry.num_sensors;

#pragma omp parallel for schedule(static) if (parallel)
  for (int m = 0; m < m_total; ++m) {
    double* row = &g.values[static_cast<size_t>(m) * nt];
    const Vec2 s = op.sensors[m];
    for (int iy = 0; iy < ig.n; ++iy) {
      for (int ix = 0; ix < ig.n; ++ix) {
        double c = x.values[ig.index(ix, iy)];
        if (c == 0.0) continue;
        double d = norm(s - ig.node(ix, iy));
        int jlo = std::max(0, static_cast<int>(std::floor((d - h - tg.start) / tg.step)) + 1);
        int jhi = std::min(nt - 1, static_cast<int>(std::floor((d + h - tg.start) / tg.step)));
        for (int j = jlo; j <= jhi; ++j) row[j] += c * op.table.eval(d, tg.time(j));
      }
    }
  }
  return g;
}

CoefficientImage apply_adjoint(const ForwardOperator& op, const Sinogram& g, bool parallel) {
  check_data(op, g);
  CoefficientImage y(op.image_grid);
  const TimeGrid& tg = op.time_grid;
  const ImageGrid& ig = op.image_grid;
  const double h = op.basis.spacing;
  const int nt = tg.num_samples;
  const int m_total = op.geometry.num_sensors;

#pragma omp parallel for schedule(static) if (parallel)
  for (int iy = 0; iy < ig.n; ++iy) {
    for (int ix = 0; ix < ig.n; ++ix) {
      const Vec2 p = ig.node(ix, iy);
      double acc = 0.0;
      for (int m = 0; m < m_total; ++m) {
        const double* row = &g.values[static_cast<size_t>(m) * nt];
        double d = norm(op.sensors[m] - p);
        int jlo = std::max(0, static_cast<int>(std::floor((d - h - tg.start) / tg.step)) + 1);
        int jhi = std::min(nt - 1, static_cast<int>(std::floor((d + h - tg.start) / tg.step)));
        for (int j = jlo; j <= jhi; ++j) acc += row[j] * op.table.eval(d, tg.time(j));
      }
      y.values[ig.index(ix, iy)] = acc;
    }
  }
  return y;
}

}  // namespace patkit
