#pragma once
#include <vector>

#include "patkit/bump.hpp"
#include "patkit/geometry.hpp"
#include "patkit/wave_kernel.hpp"

namespace patkit {

// Matrix-free map from coefficient images to sensor-time traces:
//   g[m, j] = sum_k x_k q(|s_m - node_k|, t_j)
// with q precomputed in the kernel table. Immutable after build; apply and
// the adjoint share it freely across threads.
struct ForwardOperator {
  SensorGeometry geometry;
  TimeGrid time_grid;
  ImageGrid image_grid;
  BumpBasis basis;
  KernelTable table;
  std::vector<Vec2> sensors;

  int data_size() const { return geometry.num_sensors * time_grid.num_samples; }
  int image_size() const { return image_grid.num_nodes(); }
};

ForwardOperator build_forward(const SensorGeometry& geom, const TimeGrid& tgrid,
                              const ImageGrid& igrid, const BumpBasis& basis);

// parallel=false runs the plain reference loops; both orders accumulate each
// output element in a fixed sequence, so the two paths agree bitwise and the
// parallel path is deterministic for any thread count.
Sinogram apply(const ForwardOperator& op, const CoefficientImage& x, bool parallel = true);
CoefficientImage apply_adjoint(const ForwardOperator& op, const Sinogram& g, bool parallel = true);

}  // namespace patkit
