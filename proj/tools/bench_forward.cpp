#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>

#include "patkit/forward.hpp"
#include "patkit/phantom.hpp"

using namespace patkit;

namespace {

double time_ms(const std::function<void()>& fn, int reps) {
  auto t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < reps; ++i) fn();
  auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

bool bitwise_equal(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) return false;
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  int n = argc > 1 ? std::atoi(argv[1]) : 96;
  int reps = argc > 2 ? std::atoi(argv[2]) : 5;
  if (n < 8 || reps < 1) {
    std::fprintf(stderr, "usage: bench_forward [grid_n >= 8] [reps >= 1]\n");
    return 2;
  }

  ImageGrid grid;
  grid.n = n;
  grid.spacing = 40.0 / n;
  grid.support_radius = 14.0;

  SensorGeometry geom;
  geom.radius = 40.0;
  geom.num_sensors = 64;
  geom.coverage = 2.0 * M_PI;

  double h = grid.spacing;
  double reach = grid.half_extent() * std::sqrt(2.0);
  TimeGrid tgrid;
  tgrid.step = h;
  tgrid.start = std::max(0.0, geom.radius - reach - 2.0 * h);
  tgrid.num_samples =
      static_cast<int>(std::ceil((geom.radius + reach + 2.0 * h - tgrid.start) / h)) + 1;

  BumpBasis basis{grid.spacing};
  auto tb0 = std::chrono::steady_clock::now();
  ForwardOperator op = build_forward(geom, tgrid, grid, basis);
  auto tb1 = std::chrono::steady_clock::now();

  CoefficientImage x = random_bandlimited_phantom(grid, 0.5 * M_PI / grid.spacing, 7);
  Sinogram g_serial = apply(op, x, false);
  Sinogram g_par = apply(op, x, true);
  CoefficientImage a_serial = apply_adjoint(op, g_serial, false);
  CoefficientImage a_par = apply_adjoint(op, g_serial, true);
  if (!bitwise_equal(g_serial.values, g_par.values) ||
      !bitwise_equal(a_serial.values, a_par.values)) {
    std::fprintf(stderr, "serial and parallel paths disagree, not benchmarking a broken build\n");
    return 1;
  }

  double t_apply_s = time_ms([&] { apply(op, x, false); }, reps);
  double t_apply_p = time_ms([&] { apply(op, x, true); }, reps);
  double t_adj_s = time_ms([&] { apply_adjoint(op, g_serial, false); }, reps);
  double t_adj_p = time_ms([&] { apply_adjoint(op, g_serial, true); }, reps);

  std::printf("grid %dx%d, %d sensors, %d time samples, %d reps\n", n, n, geom.num_sensors,
              tgrid.num_samples, reps);
  std::printf("table build: %.1f ms\n",
              std::chrono::duration<double, std::milli>(tb1 - tb0).count());
  std::printf("%-10s %12s %12s %8s\n", "kernel", "serial ms", "parallel ms", "speedup");
  std::printf("%-10s %12.2f %12.2f %8.2f\n", "apply", t_apply_s, t_apply_p,
              t_apply_s / t_apply_p);
  std::printf("%-10s %12.2f %12.2f %8.2f\n", "adjoint", t_adj_s, t_adj_p, t_adj_s / t_adj_p);
  return 0;
}
