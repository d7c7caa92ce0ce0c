#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "patkit/bump.hpp"
#include "patkit/phantom.hpp"
#include "patkit/spectral.hpp"
#include "test_util.hpp"

using namespace patkit;

namespace {

// plane integral of the radial bump by composite Simpson in r
double bump_plane_integral(const BumpBasis& b) {
  int n = 4000;
  double h = b.spacing / n, sum = 0.0;
  for (int i = 0; i < n; ++i) {
    double r0 = i * h, r2 = r0 + h, r1 = 0.5 * (r0 + r2);
    double f0 = 2.0 * M_PI * r0 * b.value(r0);
    double f1 = 2.0 * M_PI * r1 * b.value(r1);
    double f2 = 2.0 * M_PI * r2 * b.value(r2);
    sum += (h / 6.0) * (f0 + 4.0 * f1 + f2);
  }
  return sum;
}

// membership written with floor arithmetic, independent of the library's
// remainder-based rule
bool bars_contain(double u, double v, double pitch, double bar) {
  double mu = u - pitch * std::floor(u / pitch);
  double mv = v - pitch * std::floor(v / pitch);
  double du = std::min(mu, pitch - mu);
  double dv = std::min(mv, pitch - mv);
  return du <= 0.5 * bar || dv <= 0.5 * bar;
}

}  // namespace

TEST_CASE("bump normalization and support") {
  for (int nu : {1, 2, 3}) {
    BumpBasis b;
    b.spacing = nu == 2 ? 1.0 : 0.7;
    b.nu = nu;
    CHECK(std::abs(bump_plane_integral(b) - 1.0) <= 1e-8);
    CHECK(b.value(b.spacing) == 0.0);
    CHECK(b.value(1.5 * b.spacing) == 0.0);
    CHECK(b.value(0.0) == doctest::Approx(b.peak()));
  }

  // nu=2, h=1: peak is 3/pi
  BumpBasis b;
  b.spacing = 1.0;
  b.nu = 2;
  CHECK(b.peak() == doctest::Approx(3.0 / M_PI).epsilon(1e-14));

  BumpBasis bad = b;
  bad.spacing = 0.0;
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
  bad = b;
  bad.nu = 0;
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
}

TEST_CASE("synthesis of a single centered coefficient") {
  ImageGrid grid;
  grid.spacing = 1.0;
  grid.n = 5;
  grid.support_radius = 2.0;
  BumpBasis basis;
  basis.spacing = 1.0;
  basis.nu = 2;

  CoefficientImage x(grid);
  x.values[grid.index(2, 2)] = 1.0;

  CHECK(synthesize_at(x, basis, {0.0, 0.0}) == doctest::Approx(3.0 / M_PI).epsilon(1e-14));
  // neighbors sit exactly at the support edge, so they contribute nothing
  CHECK(synthesize_at(x, basis, {1.0, 0.0}) == 0.0);
  CHECK(synthesize_at(x, basis, {0.0, -1.0}) == 0.0);
  CHECK(synthesize_at(x, basis, {0.5, 0.0}) ==
        doctest::Approx((3.0 / M_PI) * std::pow(0.75, 2)).epsilon(1e-13));
}

TEST_CASE("synthesis matches a dense summation oracle") {
  ImageGrid grid;
  grid.spacing = 0.4;
  grid.n = 8;
  grid.support_radius = 2.0;
  grid.center = {0.3, -0.1};
  BumpBasis basis;
  basis.spacing = 0.4;
  basis.nu = 2;

  CoefficientImage x(grid);
  x.values = testutil::random_vector(grid.num_nodes(), 42);

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> span(-2.0, 2.0);
  std::vector<Vec2> pts(40);
  for (Vec2& p : pts) p = {grid.center.x + span(rng), grid.center.y + span(rng)};

  std::vector<double> got = synthesize(x, basis, pts);
  for (size_t i = 0; i < pts.size(); ++i) {
    double want = 0.0;
    for (int iy = 0; iy < grid.n; ++iy)
      for (int ix = 0; ix < grid.n; ++ix)
        want += x.values[grid.index(ix, iy)] * basis.value(norm(pts[i] - grid.node(ix, iy)));
    CHECK(std::abs(got[i] - want) <= 1e-12);
    CHECK(got[i] == synthesize_at(x, basis, pts[i]));
  }
}

TEST_CASE("synthesis is linear in the coefficients") {
  ImageGrid grid;
  grid.spacing = 0.5;
  grid.n = 6;
  grid.support_radius = 2.0;
  BumpBasis basis;
  basis.spacing = 0.5;
  basis.nu = 2;

  CoefficientImage a(grid), b(grid), mix(grid);
  a.values = testutil::random_vector(grid.num_nodes(), 1);
  b.values = testutil::random_vector(grid.num_nodes(), 2);
  double al = 1.7, be = -0.4;
  for (int i = 0; i < grid.num_nodes(); ++i) mix.values[i] = al * a.values[i] + be * b.values[i];

  std::vector<Vec2> pts;
  for (int i = 0; i < 25; ++i) pts.push_back({-1.5 + 0.13 * i, 1.2 - 0.11 * i});
  auto fa = synthesize(a, basis, pts);
  auto fb = synthesize(b, basis, pts);
  auto fm = synthesize(mix, basis, pts);
  for (size_t i = 0; i < pts.size(); ++i)
    CHECK(std::abs(fm[i] - (al * fa[i] + be * fb[i])) <= 1e-12);
}

TEST_CASE("grid phantom validation") {
  GridPhantomSpec spec;
  spec.pitch = 2.0;
  spec.bar_width = 1.0;
  spec.extent = 8.0;
  CHECK_NOTHROW(validate(spec));

  // a solid block (bar as wide as the pitch) is a legal degenerate pattern
  GridPhantomSpec solid = spec;
  solid.bar_width = 2.0;
  CHECK_NOTHROW(validate(solid));

  GridPhantomSpec bad = spec;
  bad.bar_width = 2.5;
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
  bad = spec;
  bad.bar_width = 0.0;
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
  bad = spec;
  bad.pitch = 9.0;
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
  bad = spec;
  bad.amplitude = -1.0;
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
}

TEST_CASE("degenerate pattern fills its bounding square") {
  ImageGrid grid;
  grid.spacing = 0.25;
  grid.n = 41;
  grid.support_radius = 4.5;
  GridPhantomSpec spec;
  spec.pitch = 6.0;
  spec.bar_width = 6.0;
  spec.extent = 6.0;
  spec.amplitude = 2.5;

  CoefficientImage img = rasterize_grid_phantom(spec, grid);
  for (int iy = 0; iy < grid.n; ++iy)
    for (int ix = 0; ix < grid.n; ++ix) {
      Vec2 p = grid.node(ix, iy);
      bool inside = std::abs(p.x) <= 3.0 && std::abs(p.y) <= 3.0;
      CHECK(img.values[grid.index(ix, iy)] == (inside ? 2.5 : 0.0));
    }

  spec.amplitude = 0.0;
  CoefficientImage zero = rasterize_grid_phantom(spec, grid);
  for (double v : zero.values) CHECK(v == 0.0);
}

TEST_CASE("rasterized bar fraction matches area estimates") {
  // fine grid so node counting approximates area well
  ImageGrid grid;
  grid.spacing = 5.0 / 24.0;
  grid.n = 192;
  grid.support_radius = 20.0 * std::sqrt(2.0);
  GridPhantomSpec spec;
  spec.pitch = 10.0 / 9.0;
  spec.bar_width = 5.0 / 9.0;
  spec.extent = 36.0;

  CoefficientImage img = rasterize_grid_phantom(spec, grid);

  double half = 0.5 * spec.extent;
  int in_box = 0, on_bar = 0;
  for (int iy = 0; iy < grid.n; ++iy)
    for (int ix = 0; ix < grid.n; ++ix) {
      Vec2 p = grid.node(ix, iy);
      if (std::abs(p.x) > half || std::abs(p.y) > half) {
        CHECK(img.values[grid.index(ix, iy)] == 0.0);
        continue;
      }
      ++in_box;
      if (img.values[grid.index(ix, iy)] != 0.0) ++on_bar;
    }
  REQUIRE(in_box > 0);
  double node_fraction = double(on_bar) / in_box;

  // Monte Carlo area with an independent membership rule
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unif(-half, half);
  int hits = 0, trials = 200000;
  for (int i = 0; i < trials; ++i)
    if (bars_contain(unif(rng), unif(rng), spec.pitch, spec.bar_width)) ++hits;
  double mc_fraction = double(hits) / trials;

  // union of two perpendicular families each of duty cycle q covers 2q - q^2
  double q = spec.bar_width / spec.pitch;
  double analytic = 2.0 * q - q * q;
  CHECK(analytic == doctest::Approx(0.75));
  CHECK(std::abs(node_fraction - mc_fraction) <= 0.03);
  CHECK(std::abs(node_fraction - analytic) <= 0.03);
  CHECK(std::abs(mc_fraction - analytic) <= 0.01);
}

TEST_CASE("pattern is invariant under a quarter turn") {
  ImageGrid grid;
  grid.spacing = 0.2;
  grid.n = 64;
  grid.support_radius = 9.0;
  GridPhantomSpec spec;
  spec.pitch = 1.2;
  spec.bar_width = 0.5;
  spec.extent = 8.4;  // seven whole periods
  spec.orientation = 0.37;

  GridPhantomSpec turned = spec;
  turned.orientation = spec.orientation + 0.5 * M_PI;

  CoefficientImage a = rasterize_grid_phantom(spec, grid);
  CoefficientImage b = rasterize_grid_phantom(turned, grid);
  int mismatches = 0;
  for (int i = 0; i < grid.num_nodes(); ++i)
    if (a.values[i] != b.values[i]) ++mismatches;
  CHECK(mismatches == 0);
}

TEST_CASE("pattern does not fit errors") {
  ImageGrid grid;
  grid.spacing = 0.25;
  grid.n = 33;  // half extent 4
  grid.support_radius = 4.0;
  GridPhantomSpec spec;
  spec.pitch = 2.0;
  spec.bar_width = 1.0;
  spec.extent = 9.0;  // wider than the grid
  CHECK_THROWS_AS(rasterize_grid_phantom(spec, grid), std::invalid_argument);

  spec.extent = 8.0;  // fits the square, but corners leave the support disc
  CHECK_THROWS_AS(rasterize_grid_phantom(spec, grid), std::invalid_argument);

  ImageGrid roomy = grid;
  roomy.support_radius = 6.0;
  CHECK_NOTHROW(rasterize_grid_phantom(spec, roomy));
}

TEST_CASE("random phantom is deterministic in the seed") {
  ImageGrid grid;
  grid.spacing = 0.5;
  grid.n = 32;
  grid.support_radius = 6.0;
  double omega = M_PI / grid.spacing;

  CoefficientImage a = random_bandlimited_phantom(grid, omega, 5);
  CoefficientImage b = random_bandlimited_phantom(grid, omega, 5);
  CoefficientImage c = random_bandlimited_phantom(grid, omega, 6);
  CHECK(a.values == b.values);
  CHECK(a.values != c.values);
}

TEST_CASE("random phantom respects band and support") {
  ImageGrid grid;
  grid.spacing = 0.5;
  grid.n = 48;
  grid.support_radius = 8.0;
  double omega = M_PI / grid.spacing;

  CoefficientImage x = random_bandlimited_phantom(grid, omega, 19);

  auto [total, above] = spectral_energy_split(x, omega);
  REQUIRE(total > 0.0);
  CHECK(above / total < 1e-4);

  // outside the support radius the taper zeroes everything
  for (int iy = 0; iy < grid.n; ++iy)
    for (int ix = 0; ix < grid.n; ++ix)
      if (norm(grid.node(ix, iy)) > grid.support_radius)
        CHECK(x.values[grid.index(ix, iy)] == 0.0);

  double peak = 0.0;
  for (double v : x.values) peak = std::max(peak, std::abs(v));
  CHECK(peak == doctest::Approx(1.0).epsilon(1e-12));

  // a tighter band works too; the support taper spills a little past a cut
  // this far below the grid band, so the bound is looser than the full-band one
  double tight = 0.5 * omega;
  CoefficientImage y = random_bandlimited_phantom(grid, tight, 19);
  auto [ty, ay] = spectral_energy_split(y, tight);
  REQUIRE(ty > 0.0);
  CHECK(ay / ty < 1e-3);
}
