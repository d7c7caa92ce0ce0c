#pragma once
#include <vector>

#include "patkit/geometry.hpp"

namespace patkit {

// Radial polynomial bump u(r) = ((nu+1)/(pi h^2)) (1 - |r|^2/h^2)^nu for
// |r| <= h, zero outside. The normalization makes the plane integral exactly 1
// for every nu >= 1, so a coefficient image integrates to h^2-weighted
// coefficient sums independent of nu.
struct BumpBasis {
  double spacing = 0.0;  // h, equals the image grid spacing
  int nu = 2;

  double peak() const;            // u(0)
  double value(double r) const;   // u at radius r
  double deriv(double r) const;   // du/dr
};

void validate(const BumpBasis& b);

// Pointwise evaluation of the synthesized function sum_k x_k u(p - k h).
// Only the 3x3 block of nodes around each point can contribute because the
// bump support radius equals the node spacing.
std::vector<double> synthesize(const CoefficientImage& x, const BumpBasis& basis,
                               const std::vector<Vec2>& eval_points);

double synthesize_at(const CoefficientImage& x, const BumpBasis& basis, Vec2 p);

}  // namespace patkit
