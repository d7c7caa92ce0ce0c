#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "patkit/wave_kernel.hpp"

using namespace patkit;

namespace {

// composite Simpson over [a, b]
template <typename F>
double simpson(F f, double a, double b, int panels) {
  double h = (b - a) / panels, sum = 0.0;
  for (int i = 0; i < panels; ++i) {
    double x0 = a + i * h, x2 = x0 + h, x1 = 0.5 * (x0 + x2);
    sum += (h / 6.0) * (f(x0) + 4.0 * f(x1) + f(x2));
  }
  return sum;
}

double bump_value(const BumpBasis& b, double r) {
  double s = 1.0 - (r * r) / (b.spacing * b.spacing);
  if (s <= 0.0) return 0.0;
  return (b.nu + 1) / (M_PI * b.spacing * b.spacing) * std::pow(s, b.nu);
}

// circular mean of the bump over the circle of radius r at center distance d,
// integrating only across the arc that meets the support, where the integrand
// is smooth
double mean_oracle(const BumpBasis& b, double d, double r) {
  double h = b.spacing;
  if (std::abs(d - r) >= h) return 0.0;
  double carg = (d * d + r * r - h * h) / (2.0 * d * r);
  double theta_star = std::acos(std::clamp(carg, -1.0, 1.0));
  auto f = [&](double theta) {
    double rho2 = d * d + r * r - 2.0 * d * r * std::cos(theta);
    return bump_value(b, std::sqrt(rho2));
  };
  return simpson(f, 0.0, theta_star, 1024) / M_PI;
}

// Abel-weighted mean integral I(t) with the substitution r = t sin(phi)
double abel_oracle(const BumpBasis& b, double d, double t) {
  double lo = std::asin(std::min(1.0, (d - b.spacing) / t));
  auto f = [&](double phi) {
    double r = t * std::sin(phi);
    return t * std::sin(phi) * mean_oracle(b, d, r);
  };
  return simpson(f, lo, 0.5 * M_PI, 1024);
}

// five-point derivative of the Abel integral: the pressure trace itself
double response_oracle(const BumpBasis& b, double d, double t, double delta) {
  double m2 = abel_oracle(b, d, t - 2.0 * delta), m1 = abel_oracle(b, d, t - delta);
  double p1 = abel_oracle(b, d, t + delta), p2 = abel_oracle(b, d, t + 2.0 * delta);
  return (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * delta);
}

}  // namespace

TEST_CASE("gauss-legendre nodes and exactness") {
  GaussLegendre g2(2);
  REQUIRE(g2.x.size() == 2);
  CHECK(g2.x[0] == doctest::Approx(-1.0 / std::sqrt(3.0)).epsilon(1e-14));
  CHECK(g2.x[1] == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-14));
  CHECK(g2.w[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(g2.w[1] == doctest::Approx(1.0).epsilon(1e-14));

  // order-5 rule integrates monomials through degree 9 exactly
  GaussLegendre g5(5);
  for (int k = 0; k <= 9; ++k) {
    double got = 0.0;
    for (size_t i = 0; i < g5.x.size(); ++i) got += g5.w[i] * std::pow(g5.x[i], k);
    double want = (k % 2 == 1) ? 0.0 : 2.0 / (k + 1);
    CHECK(std::abs(got - want) <= 1e-13);
  }
  CHECK_THROWS_AS(GaussLegendre(0), std::invalid_argument);
}

TEST_CASE("circular mean matches the arc quadrature oracle") {
  BumpBasis b;
  b.spacing = 1.0;
  b.nu = 2;

  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> dd(3.0, 9.0), roff(-0.95, 0.95);
  for (int i = 0; i < 25; ++i) {
    double d = dd(rng);
    double r = d + roff(rng);
    double got = bump_circular_mean(b, d, r);
    double want = mean_oracle(b, d, r);
    CHECK(std::abs(got - want) <= 1e-9);
  }

  // support: circles that stay clear of the bump see a zero mean
  CHECK(bump_circular_mean(b, 5.0, 4.0) == 0.0);
  CHECK(bump_circular_mean(b, 5.0, 6.0) == 0.0);
  CHECK(bump_circular_mean(b, 5.0, 5.0) > 0.0);
}

TEST_CASE("circular mean derivative matches central differences") {
  BumpBasis b;
  b.spacing = 1.0;
  b.nu = 2;
  double d = 6.3;
  for (double r : {5.5, 5.9, 6.3, 6.8, 7.1}) {
    double delta = 1e-5;
    double want = (bump_circular_mean(b, d, r + delta) - bump_circular_mean(b, d, r - delta)) /
                  (2.0 * delta);
    CHECK(std::abs(bump_circular_mean_dr(b, d, r) - want) <= 1e-6);
  }
}

TEST_CASE("circular mean mass identity") {
  BumpBasis b;
  b.spacing = 1.0;
  b.nu = 2;
  // the mean times the circumference integrates to the bump's unit mass
  for (double d : {3.0, 4.7, 8.2}) {
    auto f = [&](double r) { return 2.0 * M_PI * r * bump_circular_mean(b, d, r); };
    double mass = simpson(f, d - 1.0, d + 1.0, 4000);
    CHECK(std::abs(mass - 1.0) <= 1e-8);
  }
}

TEST_CASE("direct response matches the derivative-of-Abel-integral oracle") {
  BumpBasis b;
  b.spacing = 1.0;
  b.nu = 2;

  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> dd(3.0, 9.0), tt(0.15, 0.85);
  for (int i = 0; i < 8; ++i) {
    double d = dd(rng);
    double t = (d - 1.0) + 2.0 * tt(rng);
    double got = bump_response_direct(b, d, t);
    double want = response_oracle(b, d, t, 1e-3);
    CHECK(std::abs(got - want) <= 1e-7);
  }

  CHECK_THROWS_AS(bump_response_direct(b, 1.9, 2.0), std::invalid_argument);
}

TEST_CASE("kernel table reproduces the quadrature oracle") {
  BumpBasis b;
  b.spacing = 1.0;
  b.nu = 2;
  KernelTable tab = build_kernel_table(b, 3.0, 9.0, 1.0 / 8.0, 33);
  REQUIRE(tab.max_abs_q > 0.0);

  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> dd(3.0, 9.0), tt(0.15, 0.85);
  for (int i = 0; i < 12; ++i) {
    double d = dd(rng);
    double t = (d - 1.0) + 2.0 * tt(rng);
    double got = tab.eval(d, t);
    double want = response_oracle(b, d, t, 1e-3);
    CHECK(std::abs(got - want) <= 1e-6 * tab.max_abs_q);
  }
}

TEST_CASE("table interpolation stays close to the direct evaluation") {
  BumpBasis b;
  b.spacing = 0.5;
  b.nu = 2;
  KernelTable tab = build_kernel_table(b, 2.0, 7.0, 0.5 / 8.0, 33);

  std::mt19937_64 rng(24);
  std::uniform_real_distribution<double> dd(2.0, 7.0), tt(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    double d = dd(rng);
    double t = (d - 0.5) + 1.0 * tt(rng);
    if (t <= d - 0.5) continue;
    double got = tab.eval(d, t);
    double want = bump_response_direct(b, d, t);
    CHECK(std::abs(got - want) <= 1e-6 * tab.max_abs_q);
  }

  // the window edge is the hard case for interpolation; the factorized table
  // must hold the same bound right up against it
  for (int i = 0; i < 40; ++i) {
    double d = dd(rng);
    double t = (d - 0.5) + 1.0 * (1e-3 + 0.05 * tt(rng));
    double got = tab.eval(d, t);
    double want = bump_response_direct(b, d, t);
    CHECK(std::abs(got - want) <= 1e-6 * tab.max_abs_q);
  }
}

TEST_CASE("kernel is causal and windowed") {
  BumpBasis b;
  b.spacing = 1.0;
  b.nu = 2;
  KernelTable tab = build_kernel_table(b, 3.0, 9.0, 1.0 / 8.0, 33);

  std::mt19937_64 rng(25);
  std::uniform_real_distribution<double> dd(3.0, 9.0);
  for (int i = 0; i < 20; ++i) {
    double d = dd(rng);
    CHECK(tab.eval(d, d - 1.0) == 0.0);          // window is open on the left
    CHECK(tab.eval(d, 0.5 * (d - 1.0)) == 0.0);  // early times are silent
    CHECK(tab.eval(d, d + 1.0 + 1e-9) == 0.0);   // and closed on the right
    CHECK(tab.eval(d, d + 1.0) != 0.0);
    CHECK(tab.eval(d, d) != 0.0);
  }
}

TEST_CASE("table rejects distances off the lattice") {
  BumpBasis b;
  b.spacing = 1.0;
  b.nu = 2;
  KernelTable tab = build_kernel_table(b, 3.0, 9.0, 1.0 / 8.0, 33);
  CHECK_THROWS_AS(tab.eval(2.5, 2.5), std::out_of_range);
  CHECK_THROWS_AS(tab.eval(20.0, 20.0), std::out_of_range);
  // outside the window the result is zero before the lattice is consulted
  CHECK(tab.eval(20.0, 5.0) == 0.0);
}

TEST_CASE("table construction rejects bad ranges") {
  BumpBasis b;
  b.spacing = 1.0;
  b.nu = 2;
  CHECK_THROWS_AS(build_kernel_table(b, 2.0, 9.0, 0.125, 33), std::invalid_argument);
  CHECK_THROWS_AS(build_kernel_table(b, 9.0, 3.0, 0.125, 33), std::invalid_argument);
  CHECK_THROWS_AS(build_kernel_table(b, 3.0, 9.0, 0.0, 33), std::invalid_argument);
  CHECK_THROWS_AS(build_kernel_table(b, 3.0, 9.0, 0.125, 4), std::invalid_argument);
}
