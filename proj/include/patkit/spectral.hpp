#pragma once
#include <functional>
#include <utility>
#include <vector>

#include "patkit/geometry.hpp"

namespace patkit {

// Thin wrappers over FFTW's real even transforms (REDFT10 / REDFT01),
// unnormalized: dct3 applied after dct2 scales by 2n per transformed axis.
// Plans are created with FFTW_ESTIMATE only, for run-to-run determinism.
void dct2_rows(int rows, int n, const double* in, double* out);
void dct3_rows(int rows, int n, const double* in, double* out);
void dct2_2d(int n, const double* in, double* out);
void dct3_2d(int n, const double* in, double* out);

// Multiply each row's cosine spectrum by gain(omega_k), omega_k = pi*k/(n*step).
// The round trip is normalized, so gain identically 1 reproduces the input up
// to roundoff. Diagonal in the cosine basis, hence exactly self-adjoint.
void apply_row_multiplier(int rows, int n, double step, double* data,
                          const std::function<double(double)>& gain);

// Same on a square image with a radial gain at |xi| = pi*sqrt(k^2+l^2)/(n*step).
void apply_radial_multiplier(int n, double step, double* data,
                             const std::function<double(double)>& gain);

// Hard truncation of the image spectrum at radial frequency omega.
void band_truncate(CoefficientImage& x, double omega);

// (total, above-omega) spectral energy of the coefficient array in the
// orthonormal cosine basis, so total equals the squared l2 norm of the values.
std::pair<double, double> spectral_energy_split(const CoefficientImage& x, double omega);

}  // namespace patkit
