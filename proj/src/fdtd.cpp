#include "patkit/fdtd.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace patkit {

FineField sample_synthesis(const CoefficientImage& x, const BumpBasis& basis, double dx,
                           double margin) {
  if (!(dx > 0.0)) throw std::invalid_argument("sample_synthesis: dx must be > 0");
  double ext = x.grid.half_extent() + basis.spacing + margin;
  FineField f;
  f.dx = dx;
  f.nx = f.ny = 2 * static_cast<int>(std::ceil(ext / dx)) + 1;
  f.origin = {x.grid.center.x - 0.5 * (f.nx - 1) * dx, x.grid.center.y - 0.5 * (f.ny - 1) * dx};
  f.v.assign(static_cast<size_t>(f.nx) * f.ny, 0.0);
#pragma omp parallel for schedule(static)
  for (int j = 0; j < f.ny; ++j)
    for (int i = 0; i < f.nx; ++i)
      f.v[static_cast<size_t>(j) * f.nx + i] =
          synthesize_at(x, basis, {f.origin.x + i * dx, f.origin.y + j * dx});
  return f;
}

namespace {
struct Domain {
  int nx = 0, ny = 0;
  Vec2 origin;
  double dx = 0.0;
};

// leapfrog update with an optional damping profile sigma
void step(const Domain& dom, const std::vector<double>& sigma, double dt,
          const std::vector<double>& pold, const std::vector<double>& p,
          std::vector<double>& pnew) {
  const double c2 = dt * dt / (dom.dx * dom.dx);
  const int nx = dom.nx;
#pragma omp parallel for schedule(static)
  for (int j = 1; j < dom.ny - 1; ++j) {
    const double* pm = &p[static_cast<size_t>(j) * nx];
    const double* pu = pm + nx;
    const double* pd = pm - nx;
    const double* po = &pold[static_cast<size_t>(j) * nx];
    const double* sg = &sigma[static_cast<size_t>(j) * nx];
    double* pn = &pnew[static_cast<size_t>(j) * nx];
    for (int i = 1; i < nx - 1; ++i) {
      double lap = c2 * (pm[i - 1] + pm[i + 1] + pu[i] + pd[i] - 4.0 * pm[i]);
      double sd = 0.5 * sg[i] * dt;
      pn[i] = (2.0 * pm[i] - (1.0 - sd) * po[i] + lap) / (1.0 + sd);
    }
  }
}
}  // namespace

Sinogram fdtd_reference(const FineField& f, const FdtdConfig& cfg,
                        const std::vector<Vec2>& sensors, const TimeGrid& tgrid) {
  if (!(cfg.cfl_fraction > 0.0) || cfg.cfl_fraction > 1.0)
    throw std::invalid_argument("fdtd: cfl_fraction must lie in (0, 1]");
  if (std::abs(cfg.dx - f.dx) > 1e-12 * f.dx)
    throw std::invalid_argument("fdtd: config spacing must match the sampled field");
  validate(tgrid);
  if (sensors.empty()) throw std::invalid_argument("fdtd: no sensors");

  const double dx = f.dx;
  const double dt = cfg.cfl_fraction * dx / std::sqrt(2.0);
  const double tmax = tgrid.end();

  // center of the scene: middle of the field
  Vec2 c{f.origin.x + 0.5 * (f.nx - 1) * dx, f.origin.y + 0.5 * (f.ny - 1) * dx};
  double src_r = 0.5 * (f.nx - 1) * dx * std::sqrt(2.0);
  double sen_r = 0.0;
  for (const Vec2& s : sensors) sen_r = std::max(sen_r, norm(s - c));
  double hull = std::max(src_r, sen_r);
  // a reflected path runs source -> boundary -> sensor; keep the clear zone
  // wide enough that no such path fits inside the recording window
  double clear_r = std::max(hull + cfg.pad, 0.5 * (tmax + src_r + sen_r) + cfg.pad);

  Domain dom;
  dom.dx = dx;
  int half = static_cast<int>(std::ceil(clear_r / dx)) + std::max(0, cfg.sponge_cells) + 1;
  dom.nx = dom.ny = 2 * half + 1;
  // align the domain lattice with the field lattice so the initial condition
  // copies over without interpolation
  double ox = f.origin.x + std::round((c.x - half * dx - f.origin.x) / dx) * dx - 0.0;
  double oy = f.origin.y + std::round((c.y - half * dx - f.origin.y) / dx) * dx - 0.0;
  dom.origin = {ox, oy};

  size_t ncell = static_cast<size_t>(dom.nx) * dom.ny;
  std::vector<double> pold(ncell, 0.0), p(ncell, 0.0), pnew(ncell, 0.0), sigma(ncell, 0.0);

  int offx = static_cast<int>(std::llround((f.origin.x - dom.origin.x) / dx));
  int offy = static_cast<int>(std::llround((f.origin.y - dom.origin.y) / dx));
  if (offx < 1 || offy < 1 || offx + f.nx > dom.nx - 1 || offy + f.ny > dom.ny - 1)
    throw std::runtime_error("fdtd: internal domain sizing failure");
  for (int j = 0; j < f.ny; ++j)
    for (int i = 0; i < f.nx; ++i)
      p[static_cast<size_t>(j + offy) * dom.nx + (i + offx)] =
          f.v[static_cast<size_t>(j) * f.nx + i];

  // cubic damping ramp over the sponge
  if (cfg.sponge_cells > 0) {
    double w = cfg.sponge_cells * dx;
    double s0 = 16.0 / w;
    for (int j = 0; j < dom.ny; ++j) {
      for (int i = 0; i < dom.nx; ++i) {
        int depth = std::min(std::min(i, j), std::min(dom.nx - 1 - i, dom.ny - 1 - j));
        if (depth < cfg.sponge_cells) {
          double xi = 1.0 - static_cast<double>(depth) / cfg.sponge_cells;
          sigma[static_cast<size_t>(j) * dom.nx + i] = s0 * xi * xi * xi;
        }
      }
    }
  }

  // bilinear sensor stencils
  struct Stencil {
    size_t base;
    double w00, w10, w01, w11;
  };
  std::vector<Stencil> st(sensors.size());
  for (size_t k = 0; k < sensors.size(); ++k) {
    double gx = (sensors[k].x - dom.origin.x) / dx;
    double gy = (sensors[k].y - dom.origin.y) / dx;
    int ix = static_cast<int>(std::floor(gx)), iy = static_cast<int>(std::floor(gy));
    if (ix < 0 || iy < 0 || ix + 1 >= dom.nx || iy + 1 >= dom.ny)
      throw std::invalid_argument("fdtd: sensor outside the solver domain");
    double ax = gx - ix, ay = gy - iy;
    st[k] = {static_cast<size_t>(iy) * dom.nx + ix, (1 - ax) * (1 - ay), ax * (1 - ay),
             (1 - ax) * ay, ax * ay};
  }
  auto record = [&](const std::vector<double>& field, size_t k) {
    const Stencil& s = st[k];
    return s.w00 * field[s.base] + s.w10 * field[s.base + 1] + s.w01 * field[s.base + dom.nx] +
           s.w11 * field[s.base + dom.nx + 1];
  };

  SensorGeometry pseudo;
  pseudo.radius = 1.0;
  pseudo.num_sensors = static_cast<int>(sensors.size());
  pseudo.coverage = 2.0 * M_PI;
  Sinogram out(pseudo, tgrid);

  int nsteps = static_cast<int>(std::ceil(tmax / dt)) + 1;
  // first step from the rest initial condition: p^1 = p^0 + dt^2/2 lap p^0
  {
    const double c2 = 0.5 * dt * dt / (dx * dx);
#pragma omp parallel for schedule(static)
    for (int j = 1; j < dom.ny - 1; ++j) {
      const double* pm = &p[static_cast<size_t>(j) * dom.nx];
      double* pn = &pnew[static_cast<size_t>(j) * dom.nx];
      for (int i = 1; i < dom.nx - 1; ++i)
        pn[i] = pm[i] + c2 * (pm[i - 1] + pm[i + 1] + pm[i + dom.nx] + pm[i - dom.nx] -
                              4.0 * pm[i]);
    }
  }

  // record with linear interpolation between step times
  auto emit = [&](int n, const std::vector<double>& pa, const std::vector<double>& pb) {
    double t0 = n * dt, t1 = (n + 1) * dt;
    int jlo = std::max(0, static_cast<int>(std::ceil((t0 - tgrid.start) / tgrid.step - 1e-12)));
    for (int j = jlo; j < tgrid.num_samples; ++j) {
      double tj = tgrid.time(j);
      if (tj >= t1 - 1e-12 && !(n + 1 == nsteps && tj <= t1 + 1e-9)) break;
      double a = (tj - t0) / dt;
      for (size_t k = 0; k < sensors.size(); ++k)
        out.at(static_cast<int>(k), j) = (1.0 - a) * record(pa, k) + a * record(pb, k);
    }
  };

  emit(0, p, pnew);
  pold.swap(p);
  p.swap(pnew);
  // now pold = p^0, p = p^1
  for (int n = 1; n < nsteps; ++n) {
    step(dom, sigma, dt, pold, p, pnew);
    emit(n, p, pnew);
    pold.swap(p);
    p.swap(pnew);
  }
  return out;
}

std::vector<double> fdtd_energy_history(const FineField& f, double cfl_fraction, int steps) {
  if (!(cfl_fraction > 0.0) || cfl_fraction > 1.0)
    throw std::invalid_argument("fdtd: cfl_fraction must lie in (0, 1]");
  const double dx = f.dx;
  const double dt = cfl_fraction * dx / std::sqrt(2.0);

  Domain dom;
  dom.dx = dx;
  int margin = static_cast<int>(std::ceil(steps * dt / dx)) + 3;
  dom.nx = f.nx + 2 * margin;
  dom.ny = f.ny + 2 * margin;
  dom.origin = {f.origin.x - margin * dx, f.origin.y - margin * dx};

  size_t ncell = static_cast<size_t>(dom.nx) * dom.ny;
  std::vector<double> pold(ncell, 0.0), p(ncell, 0.0), pnew(ncell, 0.0), sigma(ncell, 0.0);
  for (int j = 0; j < f.ny; ++j)
    for (int i = 0; i < f.nx; ++i)
      p[static_cast<size_t>(j + margin) * dom.nx + (i + margin)] =
          f.v[static_cast<size_t>(j) * f.nx + i];

  {
    const double c2 = 0.5 * dt * dt / (dx * dx);
    for (int j = 1; j < dom.ny - 1; ++j) {
      const double* pm = &p[static_cast<size_t>(j) * dom.nx];
      double* pn = &pnew[static_cast<size_t>(j) * dom.nx];
      for (int i = 1; i < dom.nx - 1; ++i)
        pn[i] = pm[i] + c2 * (pm[i - 1] + pm[i + 1] + pm[i + dom.nx] + pm[i - dom.nx] -
                              4.0 * pm[i]);
    }
  }

  // conserved quantity of the undamped leapfrog scheme: kinetic part from the
  // time difference plus the symmetrized gradient cross term
  auto energy = [&](const std::vector<double>& pa, const std::vector<double>& pb) {
    double ekin = 0.0, egrad = 0.0;
    for (int j = 0; j < dom.ny - 1; ++j) {
      for (int i = 0; i < dom.nx - 1; ++i) {
        size_t id = static_cast<size_t>(j) * dom.nx + i;
        double v = (pb[id] - pa[id]) / dt;
        ekin += v * v;
        egrad += (pb[id + 1] - pb[id]) * (pa[id + 1] - pa[id]) +
                 (pb[id + dom.nx] - pb[id]) * (pa[id + dom.nx] - pa[id]);
      }
    }
    return 0.5 * (ekin * dx * dx + egrad);
  };

  std::vector<double> hist;
  hist.reserve(steps);
  hist.push_back(energy(p, pnew));
  pold.swap(p);
  p.swap(pnew);
  for (int n = 1; n < steps; ++n) {
    step(dom, sigma, dt, pold, p, pnew);
    hist.push_back(energy(p, pnew));
    pold.swap(p);
    p.swap(pnew);
  }
  return hist;
}

}  // namespace patkit
