#pragma once
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "patkit/forward.hpp"

namespace patkit {

// Critical sampling steps for a radial band limit omega, next to the steps a
// given setup actually uses. Angular sampling at step h_theta resolves the
// full band only within resolved_disc_radius of the grid center; when the
// spatial step sits exactly at its own critical value pi/omega that radius
// equals h_x / h_theta.
struct SamplingReport {
  double omega = 0.0;
  double support_radius = 0.0;  // R0 of the image grid
  double nyquist_h_t = 0.0;     // pi/omega
  double nyquist_h_x = 0.0;     // pi/omega
  double nyquist_h_theta = 0.0; // pi/(R0*omega)
  double actual_h_t = 0.0;
  double actual_h_x = 0.0;
  double actual_h_theta = 0.0;
  double resolved_disc_radius = 0.0;
  double undersampling_factor_angular = 0.0;  // actual_h_theta / nyquist_h_theta
};

SamplingReport compute_report(const SensorGeometry& geom, const ImageGrid& igrid,
                              const TimeGrid& tgrid, double omega);

// Extreme singular values of the filtered wave map restricted to coefficient
// images that are band-limited to omega and supported in the disc of radius
// r0. The restriction subspace is found by subspace iteration on the
// (approximate, symmetric) projection mask/band-truncate/mask started from
// num_probes seeded gaussian vectors; with num_probes comfortably above the
// subspace dimension the extremes are exact on that family up to roundoff,
// with fewer probes sigma_min is optimistic. Deterministic in seed.
struct StabilityProbe {
  double sigma_min = 0.0;
  double sigma_max = 0.0;
  int subspace_dim = 0;
  int data_dim = 0;
  bool underdetermined = false;  // subspace_dim > data_dim, sigma_min forced to 0
};

StabilityProbe probe_stability(const ForwardOperator& op, double r0, double omega,
                               int num_probes, uint64_t seed);

// Same quantities computed without randomness: the projection is assembled
// column by column, eigendecomposed, and the retained eigenvectors pushed
// through the operator densely. Only viable for small grids (refuses more
// than 4096 unknowns); serves as the ground truth the probe is checked
// against.
struct RestrictedSvd {
  double sigma_min = 0.0;
  double sigma_max = 0.0;
  int subspace_dim = 0;
};

RestrictedSvd dense_restricted_svd(const ForwardOperator& op, double r0, double omega);

// One row per angular subsampling factor: the sensor count is rebuilt so the
// angular step lands at factor times the critical step, the stability probe
// is run, and a fixed random band-limited phantom is reconstructed with
// quadratic regularization to expose the error growth.
struct SweepRow {
  double factor = 0.0;
  double h_theta = 0.0;
  double sigma_min = 0.0;
  double sigma_max = 0.0;
  double cond = 0.0;
  double recon_rel_err = 0.0;
};

std::vector<SweepRow> nyquist_sweep(
    const std::function<ForwardOperator(const SensorGeometry&)>& build_op,
    const SensorGeometry& base, const ImageGrid& grid, double omega,
    const std::vector<double>& factors, int num_probes, double lambda, uint64_t seed);

std::string sweep_csv(const std::vector<SweepRow>& rows);

// Angular undersampling by decimation: keep every factor-th sensor trace
// (the first is always kept), so the sparse-view data are exact restrictions
// of the dense data. Factor 1 returns the input unchanged. The returned
// geometry reproduces the kept sensor positions up to roundoff in the step.
Sinogram decimate_sensors(const Sinogram& g, int factor);

}  // namespace patkit
