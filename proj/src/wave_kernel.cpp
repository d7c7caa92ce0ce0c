#include "patkit/wave_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace patkit {

GaussLegendre::GaussLegendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss-legendre: order must be >= 1");
  x.resize(n);
  w.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double xi = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = xi;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2 * k - 1) * xi * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (xi * p1 - p0) / (xi * xi - 1.0);
      double step = p1 / dp;
      xi -= step;
      if (std::abs(step) < 1e-15) break;
    }
    // final polish value of derivative at converged node
    double p0 = 1.0, p1 = xi;
    for (int k = 2; k <= n; ++k) {
      double p2 = ((2 * k - 1) * xi * p1 - (k - 1) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (xi * p1 - p0) / (xi * xi - 1.0);
    x[i] = -xi;
    x[n - 1 - i] = xi;
    w[i] = w[n - 1 - i] = 2.0 / ((1.0 - xi * xi) * dp * dp);
  }
}

namespace {
const GaussLegendre& gl_theta() {
  static const GaussLegendre g(24);
  return g;
}
const GaussLegendre& gl_psi() {
  static const GaussLegendre g(48);
  return g;
}

// opening half-angle of the arc where the circle of radius r around a point at
// distance d intersects the bump support
double arc_limit(double h, double d, double r) {
  double num = h * h - (d - r) * (d - r);
  if (num <= 0.0) return 0.0;
  double den = 4.0 * d * r;
  double s2 = num / den;
  if (s2 >= 1.0) return M_PI;
  return 2.0 * std::asin(std::sqrt(s2));
}
}  // namespace

double bump_circular_mean(const BumpBasis& b, double d, double r) {
  double h = b.spacing;
  if (r < 1e-14 * h) return b.value(d);
  if (std::abs(d - r) >= h) return 0.0;
  double tstar = arc_limit(h, d, r);
  if (tstar <= 0.0) return 0.0;
  const GaussLegendre& gl = gl_theta();
  double half = 0.5 * tstar;
  double acc = 0.0;
  for (size_t i = 0; i < gl.x.size(); ++i) {
    double theta = half * (gl.x[i] + 1.0);
    double sh = std::sin(0.5 * theta);
    double rho2 = (d - r) * (d - r) + 4.0 * d * r * sh * sh;
    acc += gl.w[i] * b.value(std::sqrt(rho2));
  }
  return acc * half / M_PI;
}

double bump_circular_mean_dr(const BumpBasis& b, double d, double r) {
  double h = b.spacing;
  if (std::abs(d - r) >= h || r < 1e-14 * h) return 0.0;
  double tstar = arc_limit(h, d, r);
  if (tstar <= 0.0) return 0.0;
  const GaussLegendre& gl = gl_theta();
  double half = 0.5 * tstar;
  double c0 = b.peak() * b.nu * 2.0 / (h * h);
  double acc = 0.0;
  for (size_t i = 0; i < gl.x.size(); ++i) {
    double theta = half * (gl.x[i] + 1.0);
    double sh = std::sin(0.5 * theta);
    double rho2 = (d - r) * (d - r) + 4.0 * d * r * sh * sh;
    double s = 1.0 - rho2 / (h * h);
    if (s <= 0.0) continue;
    double p = 1.0;
    for (int k = 1; k < b.nu; ++k) p *= s;
    acc += gl.w[i] * p * (r - d * std::cos(theta));
  }
  // boundary term vanishes because the integrand is zero at the arc limit
  return -c0 * acc * half / M_PI;
}

double bump_response_direct(const BumpBasis& b, double d, double t) {
  double h = b.spacing;
  if (!(d > 2.0 * h))
    throw std::invalid_argument("bump response: observation point too close to the bump");
  double a = d - h, bb = d + h;
  if (t <= a || t > bb) return 0.0;
  double u = (t - a) * (t + a);
  double s = std::sqrt(u);
  // substitute r^2 = a^2 + u sin(psi)^2; both integrands are analytic in psi
  const GaussLegendre& gl = gl_psi();
  double g0 = 0.0, g1 = 0.0;
  for (size_t i = 0; i < gl.x.size(); ++i) {
    double psi = 0.25 * M_PI * (gl.x[i] + 1.0);
    double sp = std::sin(psi);
    double r = std::sqrt(a * a + u * sp * sp);
    g0 += gl.w[i] * bump_circular_mean(b, d, r) * sp;
    g1 += gl.w[i] * bump_circular_mean_dr(b, d, r) * sp * sp * sp / r;
  }
  g0 *= 0.25 * M_PI;
  g1 *= 0.25 * M_PI;
  return (t / s) * g0 + s * t * g1;
}

namespace {
// 4-point Lagrange weights on the unit-spaced stencil {0,1,2,3} at offset xi
inline void cubic_weights(double xi, double w[4]) {
  w[0] = -(xi - 1.0) * (xi - 2.0) * (xi - 3.0) / 6.0;
  w[1] = xi * (xi - 2.0) * (xi - 3.0) / 2.0;
  w[2] = -xi * (xi - 1.0) * (xi - 3.0) / 2.0;
  w[3] = xi * (xi - 1.0) * (xi - 2.0) / 6.0;
}

inline double smooth_factor(const BumpBasis& basis, double d, double uhat) {
  double a = d - basis.spacing;
  double u = uhat * 4.0 * d * basis.spacing;
  double t = std::sqrt(a * a + u);
  double q = bump_response_direct(basis, d, t);
  return q / (t * std::pow(u, basis.nu));
}
}  // namespace

KernelTable build_kernel_table(const BumpBasis& basis, double dist_min, double dist_max,
                               double dist_step, int window_nodes) {
  validate(basis);
  if (!(dist_step > 0.0)) throw std::invalid_argument("kernel table: dist_step must be > 0");
  if (window_nodes < 8) throw std::invalid_argument("kernel table: need at least 8 window nodes");
  double h = basis.spacing;
  if (!(dist_min > 2.2 * h))
    throw std::invalid_argument("kernel table: sensors too close to the source support");
  if (!(dist_max >= dist_min)) throw std::invalid_argument("kernel table: empty distance range");

  KernelTable tab;
  tab.h = h;
  tab.nu = basis.nu;
  // pad the lattice so interior 4-point stencils cover the requested range
  tab.dstep = dist_step;
  tab.dmin = dist_min - 2.0 * dist_step;
  tab.nd = static_cast<int>(std::ceil((dist_max - tab.dmin) / dist_step)) + 3;
  tab.nwin = window_nodes;
  tab.wtab.assign(static_cast<size_t>(tab.nd) * tab.nwin, 0.0);

  double maxq = 0.0;
#pragma omp parallel for schedule(static) reduction(max : maxq)
  for (int i = 0; i < tab.nd; ++i) {
    double d = tab.dmin + i * tab.dstep;
    double* row = &tab.wtab[static_cast<size_t>(i) * tab.nwin];
    for (int j = 1; j < tab.nwin; ++j) {
      double uhat = static_cast<double>(j) / (tab.nwin - 1);
      row[j] = smooth_factor(basis, d, uhat);
      double u = uhat * 4.0 * d * h;
      double a = d - h;
      double q = std::sqrt(a * a + u) * std::pow(u, basis.nu) * std::abs(row[j]);
      maxq = std::max(maxq, q);
    }
    // quadratic extrapolation to the opening edge uhat = 0, where the direct
    // formula degenerates to 0/0
    double delta = std::min(1e-3, 0.1 / (tab.nwin - 1));
    double w1 = smooth_factor(basis, d, delta);
    double w2 = smooth_factor(basis, d, 2.0 * delta);
    double w3 = smooth_factor(basis, d, 3.0 * delta);
    row[0] = 3.0 * w1 - 3.0 * w2 + w3;
  }
  tab.max_abs_q = maxq;
  return tab;
}

double KernelTable::eval(double d, double t) const {
  double a = d - h;
  if (t <= a) return 0.0;
  double u = (t - a) * (t + a);
  double den = 4.0 * d * h;
  // the closing endpoint t = d + h belongs to the window; computing u from t
  // can overshoot den by a couple of ulps there, so give it that much slack
  if (u > den * (1.0 + 1e-12)) return 0.0;
  if (u > den) u = den;
  double sd = (d - dmin) / dstep;
  if (sd < 1.0 || sd > nd - 2.0)
    throw std::out_of_range("kernel table: distance outside tabulated range");
  int i0 = std::clamp(static_cast<int>(sd) - 1, 0, nd - 4);
  double wd[4];
  cubic_weights(sd - i0, wd);

  double sv = (u / den) * (nwin - 1);
  int j0 = std::clamp(static_cast<int>(sv) - 1, 0, nwin - 4);
  double wu[4];
  cubic_weights(sv - j0, wu);

  double acc = 0.0;
  for (int p = 0; p < 4; ++p) {
    const double* row = &wtab[static_cast<size_t>(i0 + p) * nwin + j0];
    acc += wd[p] * (wu[0] * row[0] + wu[1] * row[1] + wu[2] * row[2] + wu[3] * row[3]);
  }
  double upow = u;
  for (int k = 1; k < nu; ++k) upow *= u;
  return t * upow * acc;
}

}  // namespace patkit
