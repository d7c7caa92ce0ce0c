// scratch: shape of the tabulated smooth factor along one distance row
#include <cmath>
#include <cstdio>

#include "patkit/wave_kernel.hpp"

using namespace patkit;

int main() {
  BumpBasis b;
  b.spacing = 1.0;
  b.nu = 2;
  double d = 5.0, a = d - 1.0, den = 4.0 * d;

  // W in plain uhat coordinates, uniform lattice of 33
  std::printf("   j     uhat        W=q/(t u^2)      u^2*W (=q/t)\n");
  const int n = 33;
  double W[n];
  for (int j = 1; j < n; ++j) {
    double uh = (double)j / (n - 1);
    double u = uh * den;
    double t = std::sqrt(a * a + u);
    double q = bump_response_direct(b, d, t);
    W[j] = q / (t * u * u);
    std::printf("  %2d  %8.5f  %14.6e  %14.6e\n", j, uh, W[j], u * u * W[j]);
  }
  // fourth differences gauge what cubic interpolation must swallow
  double md4 = 0.0;
  for (int j = 3; j < n - 2; ++j) {
    double d4 = W[j - 2] - 4 * W[j - 1] + 6 * W[j] - 4 * W[j + 1] + W[j + 2];
    if (std::abs(d4) > md4) md4 = std::abs(d4);
  }
  std::printf("max |4th diff of W on uhat lattice| = %.3e\n", md4);
  return 0;
}
