#include "patkit/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <stdexcept>

namespace patkit {

namespace {
// FFTW plan creation is not thread safe; execution of a ready plan is.
std::mutex plan_mutex;

void run_rows(int rows, int n, const double* in, double* out, fftw_r2r_kind kind) {
  if (rows < 1 || n < 1) throw std::invalid_argument("dct: empty array");
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(plan_mutex);
    plan = fftw_plan_many_r2r(1, &n, rows, const_cast<double*>(in), nullptr, 1, n, out,
                              nullptr, 1, n, &kind, FFTW_ESTIMATE | FFTW_PRESERVE_INPUT);
  }
  if (!plan) throw std::runtime_error("dct: fftw plan creation failed");
  fftw_execute(plan);
  std::lock_guard<std::mutex> lock(plan_mutex);
  fftw_destroy_plan(plan);
}

void run_2d(int n, const double* in, double* out, fftw_r2r_kind kind) {
  if (n < 1) throw std::invalid_argument("dct: empty array");
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(plan_mutex);
    plan = fftw_plan_r2r_2d(n, n, const_cast<double*>(in), out, kind, kind,
                            FFTW_ESTIMATE | FFTW_PRESERVE_INPUT);
  }
  if (!plan) throw std::runtime_error("dct: fftw plan creation failed");
  fftw_execute(plan);
  std::lock_guard<std::mutex> lock(plan_mutex);
  fftw_destroy_plan(plan);
}
}  // namespace

void dct2_rows(int rows, int n, const double* in, double* out) { run_rows(rows, n, in, out, FFTW_REDFT10); }
void dct3_rows(int rows, int n, const double* in, double* out) { run_rows(rows, n, in, out, FFTW_REDFT01); }
void dct2_2d(int n, const double* in, double* out) { run_2d(n, in, out, FFTW_REDFT10); }
void dct3_2d(int n, const double* in, double* out) { run_2d(n, in, out, FFTW_REDFT01); }

void apply_row_multiplier(int rows, int n, double step, double* data,
                          const std::function<double(double)>& gain) {
  if (!(step > 0.0)) throw std::invalid_argument("row multiplier: step must be > 0");
  std::vector<double> spec(static_cast<size_t>(rows) * n);
  dct2_rows(rows, n, data, spec.data());
  const double scale = 1.0 / (2.0 * n);
  for (int k = 0; k < n; ++k) {
    double g = gain(M_PI * k / (n * step)) * scale;
    for (int r = 0; r < rows; ++r) spec[static_cast<size_t>(r) * n + k] *= g;
  }
  dct3_rows(rows, n, spec.data(), data);
}

void apply_radial_multiplier(int n, double step, double* data,
                             const std::function<double(double)>& gain) {
  if (!(step > 0.0)) throw std::invalid_argument("radial multiplier: step must be > 0");
  std::vector<double> spec(static_cast<size_t>(n) * n);
  dct2_2d(n, data, spec.data());
  const double scale = 1.0 / (4.0 * static_cast<double>(n) * n);
  const double base = M_PI / (n * step);
  for (int l = 0; l < n; ++l) {
    for (int k = 0; k < n; ++k) {
      double xi = base * std::sqrt(static_cast<double>(k) * k + static_cast<double>(l) * l);
      spec[static_cast<size_t>(l) * n + k] *= gain(xi) * scale;
    }
  }
  dct3_2d(n, spec.data(), data);
}

void band_truncate(CoefficientImage& x, double omega) {
  apply_radial_multiplier(x.grid.n, x.grid.spacing, x.values.data(),
                          [omega](double xi) { return xi <= omega ? 1.0 : 0.0; });
}

std::pair<double, double> spectral_energy_split(const CoefficientImage& x, double omega) {
  int n = x.grid.n;
  std::vector<double> spec(static_cast<size_t>(n) * n);
  dct2_2d(n, x.values.data(), spec.data());
  // orthonormal scaling: weight 1/sqrt(4n) for index 0, 1/sqrt(2n) otherwise
  const double base = M_PI / (n * x.grid.spacing);
  double total = 0.0, above = 0.0;
  for (int l = 0; l < n; ++l) {
    double wl = (l == 0) ? 1.0 / (4.0 * n) : 1.0 / (2.0 * n);
    for (int k = 0; k < n; ++k) {
      double wk = (k == 0) ? 1.0 / (4.0 * n) : 1.0 / (2.0 * n);
      double c2 = spec[static_cast<size_t>(l) * n + k];
      double e = c2 * c2 * wl * wk;
      total += e;
      double xi = base * std::sqrt(static_cast<double>(k) * k + static_cast<double>(l) * l);
      if (xi > omega) above += e;
    }
  }
  return {total, above};
}

}  // namespace patkit
