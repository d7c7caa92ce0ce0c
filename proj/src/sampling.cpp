#include "patkit/sampling.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <stdexcept>

#include "patkit/filter.hpp"
#include "patkit/phantom.hpp"
#include "patkit/recon.hpp"
#include "patkit/spectral.hpp"

namespace patkit {

SamplingReport compute_report(const SensorGeometry& geom, const ImageGrid& igrid,
                              const TimeGrid& tgrid, double omega) {
  validate(geom);
  validate(igrid);
  validate(tgrid);
  if (!(omega > 0.0)) throw std::invalid_argument("compute_report: omega must be positive");

  SamplingReport rep;
  rep.omega = omega;
  rep.support_radius = igrid.support_radius;
  rep.nyquist_h_t = M_PI / omega;
  rep.nyquist_h_x = M_PI / omega;
  rep.nyquist_h_theta = M_PI / (igrid.support_radius * omega);
  rep.actual_h_t = tgrid.step;
  rep.actual_h_x = igrid.spacing;
  rep.actual_h_theta = geom.angular_step();
  // when the spatial step sits at its critical value the resolved radius is
  // the quotient of the two actual steps; otherwise fall back to the band
  // limit directly
  if (std::abs(igrid.spacing * omega / M_PI - 1.0) <= 1e-9)
    rep.resolved_disc_radius = igrid.spacing / rep.actual_h_theta;
  else
    rep.resolved_disc_radius = M_PI / (omega * rep.actual_h_theta);
  rep.undersampling_factor_angular = rep.actual_h_theta / rep.nyquist_h_theta;
  return rep;
}

namespace {

void mask_disc(const ImageGrid& g, double r0, std::vector<double>& v) {
  for (int iy = 0; iy < g.n; ++iy)
    for (int ix = 0; ix < g.n; ++ix)
      if (norm(g.node(ix, iy) - g.center) > r0) v[g.index(ix, iy)] = 0.0;
}

// approximate orthogonal projection onto coefficients simultaneously
// supported in the disc of radius r0 and band-limited to omega: mask,
// spectral truncation, mask again. Symmetric because both factors are
// orthogonal projections and the composition reads the same in either
// direction.
void band_disc_project(const ImageGrid& g, double r0, double omega, std::vector<double>& v) {
  mask_disc(g, r0, v);
  CoefficientImage tmp;
  tmp.grid = g;
  tmp.values = v;
  band_truncate(tmp, omega);
  v = std::move(tmp.values);
  mask_disc(g, r0, v);
}

// band limit applied to the data traces, clamped to what the time grid can
// represent (a coarser-than-critical grid keeps its full representable band)
FilterSpec probe_filter(double omega, double tstep) {
  FilterSpec f;
  f.bandwidth = std::min(omega, M_PI / tstep);
  f.kind = FilterKind::ideal;
  return f;
}

double unit_uniform(std::mt19937_64& rng) { return ((rng() >> 11) + 1.0) * 0x1.0p-53; }

void fill_gaussian(std::mt19937_64& rng, std::vector<double>& v) {
  size_t i = 0;
  for (; i + 1 < v.size(); i += 2) {
    double u1 = unit_uniform(rng), u2 = unit_uniform(rng);
    double r = std::sqrt(-2.0 * std::log(u1));
    v[i] = r * std::cos(2.0 * M_PI * u2);
    v[i + 1] = r * std::sin(2.0 * M_PI * u2);
  }
  if (i < v.size())
    v[i] = std::sqrt(-2.0 * std::log(unit_uniform(rng))) *
           std::cos(2.0 * M_PI * unit_uniform(rng));
}

// singular values of the filtered wave map on the orthonormal columns of u
void restricted_extremes(const ForwardOperator& op, double omega, const Eigen::MatrixXd& u,
                         StabilityProbe* out) {
  FilterSpec filt = probe_filter(omega, op.time_grid.step);
  int k = static_cast<int>(u.cols());
  Eigen::MatrixXd g(op.data_size(), k);
  CoefficientImage img(op.image_grid);
  for (int j = 0; j < k; ++j) {
    for (int i = 0; i < op.image_size(); ++i) img.values[i] = u(i, j);
    Sinogram traces = filter_sinogram(apply(op, img), filt);
    for (int i = 0; i < op.data_size(); ++i) g(i, j) = traces.values[i];
  }
  Eigen::BDCSVD<Eigen::MatrixXd> svd(g);
  out->sigma_max = svd.singularValues()(0);
  out->underdetermined = k > op.data_size();
  out->sigma_min =
      out->underdetermined ? 0.0 : svd.singularValues()(svd.singularValues().size() - 1);
}

}  // namespace

StabilityProbe probe_stability(const ForwardOperator& op, double r0, double omega,
                               int num_probes, uint64_t seed) {
  if (num_probes < 10)
    throw std::invalid_argument("probe_stability: num_probes must be at least 10");
  if (!(r0 > 0.0) || !(omega > 0.0))
    throw std::invalid_argument("probe_stability: r0 and omega must be positive");

  const ImageGrid& grid = op.image_grid;
  const int n2 = op.image_size();
  StabilityProbe out;
  out.data_dim = op.data_size();

  std::mt19937_64 rng(seed);
  std::vector<double> col(n2);
  Eigen::MatrixXd block(n2, num_probes);
  for (int j = 0; j < num_probes; ++j) {
    fill_gaussian(rng, col);
    for (int i = 0; i < n2; ++i) block(i, j) = col[i];
  }

  // subspace iteration on the projection; its spectrum clusters at 0 and 1,
  // so a few rounds separate the retained family from the annihilated one
  const int rounds = 10;
  for (int it = 0; it < rounds; ++it) {
    for (int j = 0; j < block.cols(); ++j) {
      for (int i = 0; i < n2; ++i) col[i] = block(i, j);
      band_disc_project(grid, r0, omega, col);
      for (int i = 0; i < n2; ++i) block(i, j) = col[i];
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(block);
    qr.setThreshold(1e-9);
    int r = static_cast<int>(qr.rank());
    if (r == 0) return out;  // the projection wiped the whole block
    block = qr.householderQ() * Eigen::MatrixXd::Identity(n2, r);
  }

  // Rayleigh-Ritz values of the projection on the iterated block; 1/2 splits
  // the two clusters
  const int b = static_cast<int>(block.cols());
  Eigen::MatrixXd pb(n2, b);
  for (int j = 0; j < b; ++j) {
    for (int i = 0; i < n2; ++i) col[i] = block(i, j);
    band_disc_project(grid, r0, omega, col);
    for (int i = 0; i < n2; ++i) pb(i, j) = col[i];
  }
  Eigen::MatrixXd t = block.transpose() * pb;
  t = (0.5 * (t + t.transpose())).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
  std::vector<int> keep;
  for (int i = 0; i < b; ++i)
    if (es.eigenvalues()(i) >= 0.5) keep.push_back(i);
  out.subspace_dim = static_cast<int>(keep.size());
  if (keep.empty()) return out;

  Eigen::MatrixXd u(n2, out.subspace_dim);
  for (int j = 0; j < out.subspace_dim; ++j) u.col(j) = block * es.eigenvectors().col(keep[j]);
  restricted_extremes(op, omega, u, &out);
  return out;
}

RestrictedSvd dense_restricted_svd(const ForwardOperator& op, double r0, double omega) {
  const int n2 = op.image_size();
  if (n2 > 4096)
    throw std::invalid_argument("dense_restricted_svd: instance too large to assemble");
  if (!(r0 > 0.0) || !(omega > 0.0))
    throw std::invalid_argument("dense_restricted_svd: r0 and omega must be positive");

  const ImageGrid& grid = op.image_grid;
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n2, n2);
  std::vector<double> col(n2);
  for (int iy = 0; iy < grid.n; ++iy) {
    for (int ix = 0; ix < grid.n; ++ix) {
      int i = grid.index(ix, iy);
      if (norm(grid.node(ix, iy) - grid.center) > r0) continue;  // column is zero
      std::fill(col.begin(), col.end(), 0.0);
      col[i] = 1.0;
      band_disc_project(grid, r0, omega, col);
      for (int r = 0; r < n2; ++r) p(r, i) = col[r];
    }
  }
  p = (0.5 * (p + p.transpose())).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(p);

  RestrictedSvd out;
  int k = 0;
  for (int i = 0; i < n2; ++i)
    if (es.eigenvalues()(i) >= 0.5) ++k;
  out.subspace_dim = k;
  if (k == 0) return out;
  Eigen::MatrixXd u = es.eigenvectors().rightCols(k);  // eigenvalues ascend

  StabilityProbe tmp;
  restricted_extremes(op, omega, u, &tmp);
  out.sigma_min = tmp.sigma_min;
  out.sigma_max = tmp.sigma_max;
  return out;
}

std::vector<SweepRow> nyquist_sweep(
    const std::function<ForwardOperator(const SensorGeometry&)>& build_op,
    const SensorGeometry& base, const ImageGrid& grid, double omega,
    const std::vector<double>& factors, int num_probes, double lambda, uint64_t seed) {
  validate(base);
  validate(grid);
  if (!(omega > 0.0)) throw std::invalid_argument("nyquist_sweep: omega must be positive");
  if (factors.empty()) throw std::invalid_argument("nyquist_sweep: empty factor list");

  double r0 = grid.support_radius;
  double nyq = M_PI / (r0 * omega);
  CoefficientImage phantom = random_bandlimited_phantom(grid, omega, seed);
  double pnorm = l2_norm(phantom.values);

  std::vector<SweepRow> rows;
  for (double f : factors) {
    if (!(f > 0.0)) throw std::invalid_argument("nyquist_sweep: factors must be positive");
    SensorGeometry geom = base;
    geom.num_sensors = std::max(4, static_cast<int>(std::lround(base.coverage / (f * nyq))));
    ForwardOperator op = build_op(geom);

    StabilityProbe probe = probe_stability(op, r0, omega, num_probes, seed + 1);
    FilterSpec filt = probe_filter(omega, op.time_grid.step);
    Sinogram data = filter_sinogram(apply(op, phantom), filt);
    TikhonovConfig tcfg;
    tcfg.lambda = lambda;
    tcfg.max_iters = 400;
    SolveLog log;
    CoefficientImage rec = reconstruct_tikhonov(op, &filt, data, tcfg, &log);

    double err2 = 0.0;
    for (size_t i = 0; i < phantom.values.size(); ++i) {
      double d = rec.values[i] - phantom.values[i];
      err2 += d * d;
    }

    SweepRow row;
    row.factor = f;
    row.h_theta = geom.angular_step();
    row.sigma_min = probe.sigma_min;
    row.sigma_max = probe.sigma_max;
    row.cond = probe.sigma_min > 0.0 ? probe.sigma_max / probe.sigma_min
                                     : std::numeric_limits<double>::infinity();
    row.recon_rel_err = std::sqrt(err2) / pnorm;
    rows.push_back(row);
  }
  return rows;
}

Sinogram decimate_sensors(const Sinogram& g, int factor) {
  if (factor < 1) throw std::invalid_argument("decimate_sensors: factor must be >= 1");
  validate(g.geometry);
  if (factor == 1) return g;

  double step = g.geometry.angular_step() * factor;
  int kept = (g.geometry.num_sensors - 1) / factor + 1;
  SensorGeometry geom = g.geometry;
  geom.num_sensors = kept;
  geom.coverage = step * kept;
  geom.endpoint_inclusive = false;  // step is coverage/num_sensors again

  Sinogram out(geom, g.time_grid);
  int nt = g.time_grid.num_samples;
  for (int i = 0; i < kept; ++i)
    for (int j = 0; j < nt; ++j) out.at(i, j) = g.at(i * factor, j);
  return out;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = "factor,h_theta,sigma_min,sigma_max,cond,recon_rel_err\n";
  char buf[256];
  for (const SweepRow& r : rows) {
    std::snprintf(buf, sizeof buf, "%.10g,%.10g,%.10g,%.10g,%.10g,%.10g\n", r.factor,
                  r.h_theta, r.sigma_min, r.sigma_max, r.cond, r.recon_rel_err);
    out += buf;
  }
  return out;
}

}  // namespace patkit
