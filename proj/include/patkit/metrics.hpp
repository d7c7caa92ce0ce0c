#pragma once
#include "patkit/geometry.hpp"
#include "patkit/phantom.hpp"

namespace patkit {

struct MetricsReport {
  double relative_l2 = 0.0;
  double psnr = 0.0;  // peak taken from the reference image
  double grid_contrast = 0.0;
  double contrast_threshold = 0.2;
  bool resolved = false;
};

// Error metrics against the reference plus a bar-pattern contrast score: the
// coefficient image is sampled along scanlines that run across one bar family
// through the gap centers of the other, the modulation (max-min)/(max+min) is
// taken per period, and the median over all periods and scanlines is
// reported. Interior periods only; boundary periods are skipped.
MetricsReport compute_metrics(const CoefficientImage& x, const CoefficientImage& reference,
                              const GridPhantomSpec& spec, double contrast_threshold = 0.2);

}  // namespace patkit
