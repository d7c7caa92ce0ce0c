// scratch: error structure of the kernel table vs direct evaluation
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "patkit/wave_kernel.hpp"

using namespace patkit;

int main(int argc, char** argv) {
  double div = argc > 1 ? std::atof(argv[1]) : 8.0;
  BumpBasis b;
  b.spacing = 1.0;
  b.nu = 2;
  KernelTable tab = build_kernel_table(b, 3.0, 9.0, 1.0 / div, 129);
  std::printf("max_abs_q = %.6g\n", tab.max_abs_q);

  // error by uhat band, maximized over d
  const int nb = 20;
  double band_err[nb] = {0};
  for (int id = 0; id <= 120; ++id) {
    double d = 3.0 + 6.0 * id / 120.0 + 0.0371 / div;  // generic offsets between lattice rows
    double a = d - 1.0, den = 4.0 * d;
    for (int iu = 1; iu < 400; ++iu) {
      double uh = iu / 400.0;
      double t = std::sqrt(a * a + uh * den);
      double err = std::abs(tab.eval(d, t) - bump_response_direct(b, d, t));
      int band = std::min(nb - 1, (int)(uh * nb));
      if (err > band_err[band]) band_err[band] = err;
    }
  }
  for (int i = 0; i < nb; ++i)
    std::printf("uhat [%4.2f,%4.2f)  max err / max_q = %.3g\n", (double)i / nb,
                (double)(i + 1) / nb, band_err[i] / tab.max_abs_q);

  // isolate the d direction: evaluate exactly on uhat nodes, between d rows
  double derr = 0.0;
  for (int id = 0; id <= 60; ++id) {
    double d = 3.0 + 6.0 * id / 60.0 + 0.5 / 8.0 * 0.5;  // halfway between d rows
    double a = d - 1.0, den = 4.0 * d;
    for (int j = 4; j < 29; ++j) {
      double uh = (double)j / 32.0;
      double t = std::sqrt(a * a + uh * den);
      double err = std::abs(tab.eval(d, t) - bump_response_direct(b, d, t));
      if (err > derr) derr = err;
    }
  }
  std::printf("d-direction (on uhat nodes, between d rows): %.3g\n", derr / tab.max_abs_q);

  // isolate the uhat direction: on d rows, between uhat nodes
  double uerr = 0.0, uerr_int = 0.0;
  for (int id = 0; id <= 48; ++id) {
    double d = (3.0 - 2.0 / 8.0) + (double)id * 1.0 / 8.0;
    if (d < 3.0 || d > 9.0) continue;
    double a = d - 1.0, den = 4.0 * d;
    for (int j = 0; j < 32; ++j) {
      double uh = (j + 0.5) / 32.0;
      double t = std::sqrt(a * a + uh * den);
      double err = std::abs(tab.eval(d, t) - bump_response_direct(b, d, t));
      if (err > uerr) uerr = err;
      if (j > 2 && j < 29 && err > uerr_int) uerr_int = err;
    }
  }
  std::printf("uhat-direction on d rows: all %.3g interior %.3g\n", uerr / tab.max_abs_q,
              uerr_int / tab.max_abs_q);
  return 0;
}
