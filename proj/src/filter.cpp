#include "patkit/filter.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

#include "patkit/spectral.hpp"

namespace patkit {

void validate(const FilterSpec& spec) {
  if (!(spec.bandwidth > 0.0)) throw std::invalid_argument("filter: bandwidth must be > 0");
  if (!(spec.attenuation > 0.0 && spec.attenuation < 1.0))
    throw std::invalid_argument("filter: attenuation must lie in (0, 1)");
}

double FilterSpec::sigma() const {
  return bandwidth / std::sqrt(-2.0 * std::log(attenuation));
}

double FilterSpec::transfer(double omega) const {
  if (kind == FilterKind::ideal) return std::abs(omega) <= bandwidth ? 1.0 : 0.0;
  double s = sigma();
  return std::exp(-omega * omega / (2.0 * s * s));
}

namespace {
void check_band(const FilterSpec& spec, double step, const char* what) {
  // the representable band ends at pi/step; a wider filter band cannot be
  // acted on faithfully and is rejected rather than silently clipped
  if (spec.bandwidth > M_PI / step * (1.0 + 1e-9))
    throw std::invalid_argument(std::string("filter: band exceeds the representable band of the ") +
                                what);
}
}  // namespace

Sinogram filter_sinogram(const Sinogram& g, const FilterSpec& spec) {
  validate(spec);
  check_band(spec, g.time_grid.step, "time grid");
  Sinogram out = g;
  apply_row_multiplier(g.geometry.num_sensors, g.time_grid.num_samples, g.time_grid.step,
                       out.values.data(), [&spec](double w) { return spec.transfer(w); });
  return out;
}

CoefficientImage apply_psf(const CoefficientImage& x, const FilterSpec& spec) {
  validate(spec);
  check_band(spec, x.grid.spacing, "image grid");
  CoefficientImage out = x;
  apply_radial_multiplier(x.grid.n, x.grid.spacing, out.values.data(),
                          [&spec](double w) { return spec.transfer(w); });
  return out;
}

double verify_convolution_identity(const ForwardOperator& op, const FilterSpec& spec,
                                   const CoefficientImage& x) {
  if (l2_norm(x.values) == 0.0)
    throw std::invalid_argument("convolution identity: zero input has no relative error");
  Sinogram lhs = filter_sinogram(apply(op, x), spec);
  Sinogram rhs = apply(op, apply_psf(x, spec));
  double den = l2_norm(lhs.values);
  if (den == 0.0) throw std::invalid_argument("convolution identity: filtered data vanish");
  double num = 0.0;
  for (size_t i = 0; i < lhs.values.size(); ++i) {
    double d = lhs.values[i] - rhs.values[i];
    num += d * d;
  }
  return std::sqrt(num) / den;
}

namespace {
double smallest_generalized_eig(const Eigen::MatrixXd& num, const Eigen::MatrixXd& den) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> chk(den);
  double lo = chk.eigenvalues().minCoeff(), hi = chk.eigenvalues().maxCoeff();
  if (!(hi > 0.0) || lo < 1e-12 * hi)
    throw std::invalid_argument("resolution constant: basis is rank deficient");
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(num, den);
  return es.eigenvalues().minCoeff();
}
}  // namespace

double estimate_resolution_constant(const std::vector<CoefficientImage>& basis,
                                    const FilterSpec& spec) {
  if (basis.empty()) throw std::invalid_argument("resolution constant: empty basis");
  const int k = static_cast<int>(basis.size());
  std::vector<CoefficientImage> blurred;
  blurred.reserve(k);
  for (const CoefficientImage& b : basis) blurred.push_back(apply_psf(b, spec));
  Eigen::MatrixXd g(k, k), gf(k, k);
  for (int i = 0; i < k; ++i) {
    for (int j = i; j < k; ++j) {
      g(i, j) = g(j, i) = dot(basis[i].values, basis[j].values);
      gf(i, j) = gf(j, i) = dot(blurred[i].values, blurred[j].values);
    }
  }
  return smallest_generalized_eig(gf, g);
}

std::pair<double, double> verify_resolution_theorem(const ForwardOperator& op,
                                                    const std::vector<CoefficientImage>& basis,
                                                    const FilterSpec& spec) {
  double a_image = estimate_resolution_constant(basis, spec);

  // dense-in-angle, dense-in-time stand-in for the continuous data norm;
  // constant quadrature weights cancel in the Rayleigh quotient
  SensorGeometry dense = op.geometry;
  dense.coverage = 2.0 * M_PI;
  dense.start_angle = 0.0;
  dense.num_sensors = std::max(8 * op.geometry.num_sensors, 256);
  dense.endpoint_inclusive = false;
  TimeGrid tfine;
  tfine.step = std::min(op.time_grid.step, M_PI / spec.bandwidth / 8.0);
  tfine.start = op.time_grid.start;
  tfine.num_samples = static_cast<int>(std::ceil((op.time_grid.end() - tfine.start) / tfine.step)) + 1;

  ForwardOperator dop = build_forward(dense, tfine, op.image_grid, op.basis);

  const int k = static_cast<int>(basis.size());
  std::vector<Sinogram> traces, filtered;
  traces.reserve(k);
  filtered.reserve(k);
  for (const CoefficientImage& b : basis) {
    traces.push_back(apply(dop, b));
    filtered.push_back(filter_sinogram(traces.back(), spec));
  }
  Eigen::MatrixXd g(k, k), gf(k, k);
  for (int i = 0; i < k; ++i) {
    for (int j = i; j < k; ++j) {
      g(i, j) = g(j, i) = dot(traces[i].values, traces[j].values);
      gf(i, j) = gf(j, i) = dot(filtered[i].values, filtered[j].values);
    }
  }
  double a_data = smallest_generalized_eig(gf, g);
  return {a_image, a_data};
}

}  // namespace patkit
