// scratch: log-log slope of q against u at the window edges
#include <cmath>
#include <cstdio>

#include "patkit/wave_kernel.hpp"

using namespace patkit;

int main() {
  BumpBasis b;
  b.spacing = 1.0;
  b.nu = 2;
  double d = 5.0, a = d - 1.0, den = 4.0 * d;

  std::printf("inner edge: uhat, q, local slope dlogq/dlogu\n");
  double prev_q = 0.0, prev_u = 0.0;
  for (double uh : {1e-4, 2e-4, 4e-4, 1e-3, 2e-3, 4e-3, 1e-2, 2e-2, 4e-2, 1e-1}) {
    double u = uh * den;
    double t = std::sqrt(a * a + u);
    double q = bump_response_direct(b, d, t);
    double slope = prev_q > 0.0 ? std::log(q / prev_q) / std::log(u / prev_u) : 0.0;
    std::printf("  %8.1e  %12.6e  %6.3f\n", uh, q, slope);
    prev_q = q;
    prev_u = u;
  }

  std::printf("outer edge: 1-uhat, q(b)-q, local slope\n");
  double qb = bump_response_direct(b, d, d + 1.0);
  prev_q = prev_u = 0.0;
  for (double w : {1e-4, 2e-4, 4e-4, 1e-3, 2e-3, 4e-3, 1e-2, 2e-2, 4e-2, 1e-1}) {
    double u = (1.0 - w) * den;
    double t = std::sqrt(a * a + u);
    double dq = std::abs(bump_response_direct(b, d, t) - qb);
    double slope = prev_q > 0.0 ? std::log(dq / prev_q) / std::log(w / prev_u) : 0.0;
    std::printf("  %8.1e  %12.6e  %6.3f\n", w, dq, slope);
    prev_q = dq;
    prev_u = w;
  }
  return 0;
}
