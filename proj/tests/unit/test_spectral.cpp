#include <doctest.h>

#include <cmath>
#include <vector>

#include "patkit/spectral.hpp"
#include "test_util.hpp"

using namespace patkit;

TEST_CASE("dct round trip scales by 2n per axis") {
  int rows = 3, n = 17;
  std::vector<double> x = testutil::random_vector(rows * n, 3);
  std::vector<double> spec(x.size()), back(x.size());
  dct2_rows(rows, n, x.data(), spec.data());
  dct3_rows(rows, n, spec.data(), back.data());
  for (size_t i = 0; i < x.size(); ++i)
    CHECK(back[i] == doctest::Approx(2.0 * n * x[i]).epsilon(1e-12).scale(1.0));

  int m = 12;
  std::vector<double> img = testutil::random_vector(m * m, 4);
  std::vector<double> spec2(img.size()), back2(img.size());
  dct2_2d(m, img.data(), spec2.data());
  dct3_2d(m, spec2.data(), back2.data());
  double scale = 4.0 * m * m;
  for (size_t i = 0; i < img.size(); ++i)
    CHECK(back2[i] == doctest::Approx(scale * img[i]).epsilon(1e-12).scale(scale));
}

TEST_CASE("unit gain multiplier reproduces the input") {
  int rows = 4, n = 25;
  std::vector<double> x = testutil::random_vector(rows * n, 5);
  std::vector<double> y = x;
  apply_row_multiplier(rows, n, 0.3, y.data(), [](double) { return 1.0; });
  CHECK(testutil::max_abs_diff(x, y) <= 1e-12);

  int m = 15;
  std::vector<double> img = testutil::random_vector(m * m, 6);
  std::vector<double> out = img;
  apply_radial_multiplier(m, 0.5, out.data(), [](double) { return 1.0; });
  CHECK(testutil::max_abs_diff(img, out) <= 1e-12);
}

TEST_CASE("multipliers are self adjoint") {
  auto gain = [](double w) { return std::exp(-0.3 * w * w) + 0.1 * std::cos(w); };

  int rows = 2, n = 31;
  std::vector<double> a = testutil::random_vector(rows * n, 7);
  std::vector<double> b = testutil::random_vector(rows * n, 8);
  std::vector<double> fa = a, fb = b;
  apply_row_multiplier(rows, n, 0.25, fa.data(), gain);
  apply_row_multiplier(rows, n, 0.25, fb.data(), gain);
  double lhs = 0.0, rhs = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    lhs += fa[i] * b[i];
    rhs += a[i] * fb[i];
  }
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));

  int m = 14;
  std::vector<double> u = testutil::random_vector(m * m, 9);
  std::vector<double> v = testutil::random_vector(m * m, 10);
  std::vector<double> fu = u, fv = v;
  apply_radial_multiplier(m, 0.4, fu.data(), gain);
  apply_radial_multiplier(m, 0.4, fv.data(), gain);
  lhs = rhs = 0.0;
  for (size_t i = 0; i < u.size(); ++i) {
    lhs += fu[i] * v[i];
    rhs += u[i] * fv[i];
  }
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
}

TEST_CASE("spectral energy split is a Parseval identity") {
  ImageGrid grid;
  grid.spacing = 0.5;
  grid.n = 20;
  grid.support_radius = 5.0;
  CoefficientImage x(grid);
  x.values = testutil::random_vector(grid.num_nodes(), 11);

  auto [total, above] = spectral_energy_split(x, 1.0);
  double n2 = 0.0;
  for (double v : x.values) n2 += v * v;
  CHECK(total == doctest::Approx(n2).epsilon(1e-12));
  CHECK(above >= 0.0);
  CHECK(above <= total * (1.0 + 1e-12));

  // a huge band leaves nothing above, a zero-adjacent band nearly everything
  auto [t2, a2] = spectral_energy_split(x, 1e9);
  CHECK(a2 == 0.0);
  CHECK(t2 == doctest::Approx(total));
  auto [t3, a3] = spectral_energy_split(x, 1e-9);
  CHECK(a3 <= t3);
  CHECK(a3 > 0.9 * t3);  // random data is not concentrated at DC
}

TEST_CASE("band truncation is an orthogonal projection") {
  ImageGrid grid;
  grid.spacing = 0.4;
  grid.n = 24;
  grid.support_radius = 4.0;
  double omega = 0.5 * M_PI / grid.spacing;

  CoefficientImage x(grid);
  x.values = testutil::random_vector(grid.num_nodes(), 12);
  CoefficientImage tx = x;
  band_truncate(tx, omega);

  // idempotent
  CoefficientImage ttx = tx;
  band_truncate(ttx, omega);
  CHECK(testutil::rel_diff(tx.values, ttx.values) <= 1e-12);

  // the residual is orthogonal to the projection, and norms split
  double cross = 0.0, nx = 0.0, nt = 0.0, nr = 0.0;
  for (int i = 0; i < grid.num_nodes(); ++i) {
    double r = x.values[i] - tx.values[i];
    cross += r * tx.values[i];
    nx += x.values[i] * x.values[i];
    nt += tx.values[i] * tx.values[i];
    nr += r * r;
  }
  CHECK(std::abs(cross) <= 1e-10 * nx);
  CHECK(nt + nr == doctest::Approx(nx).epsilon(1e-12));
  CHECK(nt <= nx * (1.0 + 1e-12));

  // after truncation no energy sits above the cut
  auto [tt, aa] = spectral_energy_split(tx, omega);
  CHECK(aa <= 1e-12 * tt);

  // truncating at the full representable band changes nothing
  CoefficientImage wide = x;
  band_truncate(wide, 2.0 * M_PI * std::sqrt(2.0) / grid.spacing);
  CHECK(testutil::rel_diff(x.values, wide.values) <= 1e-12);
}
