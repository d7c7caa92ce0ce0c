#pragma once
#include <vector>

#include "patkit/bump.hpp"
#include "patkit/geometry.hpp"

namespace patkit {

// Initial pressure sampled on a fine lattice; node (i, j) sits at
// origin + (i*dx, j*dx), row-major with j slow.
struct FineField {
  int nx = 0, ny = 0;
  double dx = 0.0;
  Vec2 origin{0.0, 0.0};
  std::vector<double> v;
};

// Evaluate the synthesized coefficient image on a fine lattice covering the
// whole bump support plus a margin.
FineField sample_synthesis(const CoefficientImage& x, const BumpBasis& basis, double dx,
                           double margin);

struct FdtdConfig {
  double dx = 0.0;            // solver spacing; must match the sampled field
  double cfl_fraction = 0.7;  // dt = cfl_fraction * dx / sqrt(2)
  double pad = 1.0;           // clear margin around sources and sensors, mm
  int sponge_cells = 20;      // absorbing layer thickness
};

// Second-order leapfrog solution of p_tt = lap p, p(0) = f, p_t(0) = 0,
// sampled at the sensors (bilinear in space, linear in time). The domain is
// grown until no boundary reflection can geometrically reach a sensor inside
// the recording window, with the absorbing layer as a second line of defense,
// so this path is independent of the kernel-based forward operator.
Sinogram fdtd_reference(const FineField& f, const FdtdConfig& cfg,
                        const std::vector<Vec2>& sensors, const TimeGrid& tgrid);

// Discrete leapfrog energy per step on a closed (sponge-free) domain sized so
// the wave cannot reach the boundary within the requested steps.
std::vector<double> fdtd_energy_history(const FineField& f, double cfl_fraction, int steps);

}  // namespace patkit
