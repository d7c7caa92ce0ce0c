#pragma once
#include <vector>

#include "patkit/bump.hpp"

namespace patkit {

// Gauss-Legendre rule on [-1, 1], nodes found by Newton iteration on the
// Legendre recurrence.
struct GaussLegendre {
  std::vector<double> x, w;
  explicit GaussLegendre(int n);
};

// Average of the bump over the circle of radius r centered at distance d from
// the bump center, and its derivative in r. Zero when |d - r| >= h.
double bump_circular_mean(const BumpBasis& b, double d, double r);
double bump_circular_mean_dr(const BumpBasis& b, double d, double r);

// Pressure trace of a single unit-coefficient bump observed at distance d:
// the time derivative of the Abel-weighted circular mean integral. The slowly
// decaying wake outside t in (d-h, d+h] is dropped by construction; its
// relative size is about (integral of u)/(2 pi t^2) per unit peak, a fraction
// of a percent at the distances used here (the forward operator is defined
// with this windowed kernel, and the trailing tests budget for the cut).
double bump_response_direct(const BumpBasis& b, double d, double t);

// In the window t in (d-h, d+h] the response factorizes as
//   q(d, t) = t * u^nu * W(d, uhat),   u = t^2 - (d-h)^2,  uhat = u / (4 d h),
// with W smooth on the whole (d, uhat) rectangle: the u^nu prefactor absorbs
// the vanishing at the opening edge exactly. The table stores W on a uniform
// (d, uhat) lattice and evaluates with cubic interpolation in both axes.
// The lattice is fine because the interpolation error in W is amplified by
// t*u^nu wherever u is large, and the 1e-6 accuracy target is set relative
// to the peak response.
struct KernelTable {
  double h = 0.0;   // bump support radius
  int nu = 2;       // bump exponent
  double dmin = 0.0, dstep = 0.0;
  int nd = 0, nwin = 0;
  std::vector<double> wtab;  // nd rows of nwin smooth-factor samples on the uhat lattice
  double max_abs_q = 0.0;    // largest |q| seen on the build lattice

  double dmax() const { return dmin + (nd - 1) * dstep; }
  // q(d, t); exact zero outside the window, throws if d is off the lattice
  double eval(double d, double t) const;
};

KernelTable build_kernel_table(const BumpBasis& basis, double dist_min, double dist_max,
                               double dist_step, int window_nodes);

}  // namespace patkit
