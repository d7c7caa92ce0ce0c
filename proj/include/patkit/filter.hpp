#pragma once
#include <utility>
#include <vector>

#include "patkit/forward.hpp"
#include "patkit/geometry.hpp"

namespace patkit {

enum class FilterKind { gaussian, ideal };

// Even real transfer function with peak 1 at zero frequency. The gaussian
// variant reaches `attenuation` at omega = bandwidth; the ideal variant is the
// indicator of |omega| <= bandwidth.
struct FilterSpec {
  double bandwidth = 0.0;  // rad/mm (time and length units coincide after rescaling)
  FilterKind kind = FilterKind::gaussian;
  double attenuation = 0.01;

  double sigma() const;  // gaussian width parameter
  double transfer(double omega) const;
};

void validate(const FilterSpec& spec);

// Temporal low-pass of every sensor trace, computed in the cosine spectrum of
// the row (i.e. with symmetric extension at the window ends). Exactly
// self-adjoint and with unit DC gain. Throws when the band is not
// representable on the time grid.
Sinogram filter_sinogram(const Sinogram& g, const FilterSpec& spec);

// The matching 2D blur: multiplication of the image cosine spectrum by the
// same transfer evaluated at the radial frequency.
CoefficientImage apply_psf(const CoefficientImage& x, const FilterSpec& spec);

// || filter(apply(x)) - apply(psf(x)) || / || filter(apply(x)) ||
double verify_convolution_identity(const ForwardOperator& op, const FilterSpec& spec,
                                   const CoefficientImage& x);

// Smallest Rayleigh quotient ||blur(f)||^2 / ||f||^2 over the span of the
// basis, via the generalized eigenproblem of the two Gram matrices in the
// coefficient l2 inner product. Always lies in [0, 1] for these filters.
double estimate_resolution_constant(const std::vector<CoefficientImage>& basis,
                                    const FilterSpec& spec);

// Image-side constant from estimate_resolution_constant vs the data-side
// analogue min ||filter(g)||^2/||g||^2 over g in the image of the span under
// the wave map, where the data side is discretized densely in angle and time
// (the sensor layout of `op` only provides radius and center; its angular
// sampling is replaced by a full dense circle because the comparison concerns
// the continuous data norm).
std::pair<double, double> verify_resolution_theorem(const ForwardOperator& op,
                                                    const std::vector<CoefficientImage>& basis,
                                                    const FilterSpec& spec);

}  // namespace patkit
