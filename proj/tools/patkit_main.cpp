#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "patkit/config.hpp"
#include "patkit/errors.hpp"
#include "patkit/io.hpp"
#include "patkit/metrics.hpp"
#include "patkit/recon.hpp"
#include "patkit/sampling.hpp"

namespace fs = std::filesystem;
using namespace patkit;

namespace {

std::string join(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path + " for writing");
  f.write(text.data(), static_cast<std::streamsize>(text.size()));
  f.close();
  if (!f) throw IoError("write failed: " + path);
}

void write_pgm_auto(const std::string& path, const CoefficientImage& x) {
  double lo = 0.0, hi = 0.0;
  if (!x.values.empty()) {
    lo = *std::min_element(x.values.begin(), x.values.end());
    hi = *std::max_element(x.values.begin(), x.values.end());
  }
  write_pgm(path, x, lo, hi);
}

ForwardOperator build_from_config(const ExperimentConfig& cfg) {
  BumpBasis basis{cfg.image_grid.spacing};
  return build_forward(cfg.geometry, cfg.time_grid, cfg.image_grid, basis);
}

double relative_l2(const std::vector<double>& x, const std::vector<double>& ref) {
  double err2 = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    double d = x[i] - ref[i];
    err2 += d * d;
  }
  double rn = l2_norm(ref);
  return rn > 0.0 ? std::sqrt(err2) / rn : std::sqrt(err2);
}

void run_phantom(const ExperimentConfig& cfg, const std::string& dir) {
  CoefficientImage x = make_phantom(cfg);
  int nonzero = 0;
  for (double v : x.values)
    if (v != 0.0) ++nonzero;
  std::string raster = join(dir, "phantom.raster");
  write_raster(raster, x);
  write_pgm_auto(join(dir, "phantom.pgm"), x);
  std::printf("phantom: %d of %d nodes nonzero, %dx%d grid, spacing %.10g mm\n", nonzero,
              x.grid.num_nodes(), x.grid.n, x.grid.n, x.grid.spacing);
  std::printf("wrote %s\n", raster.c_str());
}

void run_simulate(const ExperimentConfig& cfg, const std::string& dir, int subsample) {
  if (subsample < 1) throw ConfigError("--subsample: must be >= 1");
  CoefficientImage x = make_phantom(cfg);
  ForwardOperator op = build_from_config(cfg);
  Sinogram g = filter_sinogram(apply(op, x), cfg.filter);
  Sinogram gd = decimate_sensors(g, subsample);
  SinogramMeta meta;
  meta.effective_h_theta = gd.geometry.angular_step();
  meta.subsample = subsample;
  std::string path = join(dir, "sinogram.sino");
  write_sinogram(path, gd, meta);
  std::printf("sinogram: %d sensors x %d samples, h_theta %.10g rad\n",
              gd.geometry.num_sensors, gd.time_grid.num_samples, meta.effective_h_theta);
  std::printf("wrote %s\n", path.c_str());
}

std::string convergence_csv(const SolveLog& log, bool with_objective) {
  std::string out = "iter,objective,residual\n";
  char buf[96];
  for (size_t i = 0; i < log.residuals.size(); ++i) {
    std::string obj;
    if (with_objective && i < log.objectives.size()) {
      std::snprintf(buf, sizeof buf, "%.17g", log.objectives[i]);
      obj = buf;
    }
    std::snprintf(buf, sizeof buf, "%.17g", log.residuals[i]);
    out += std::to_string(i) + "," + obj + "," + buf + "\n";
  }
  return out;
}

int run_reconstruct(const ExperimentConfig& cfg, const std::string& dir,
                    const std::string& sino_path, const std::string& method) {
  SinogramMeta meta;
  Sinogram data = read_sinogram(sino_path, &meta);
  BumpBasis basis{cfg.image_grid.spacing};
  ForwardOperator op = build_forward(data.geometry, data.time_grid, cfg.image_grid, basis);

  SolveLog log;
  CoefficientImage x;
  if (method == "tikhonov") {
    if (!cfg.methods.has_tikhonov)
      throw ConfigError("methods.tikhonov: section required for --method tikhonov");
    x = reconstruct_tikhonov(op, &cfg.filter, data, cfg.methods.tikhonov, &log);
  } else if (method == "l1pos") {
    if (!cfg.methods.has_l1pos)
      throw ConfigError("methods.l1pos: section required for --method l1pos");
    x = reconstruct_l1pos(op, &cfg.filter, data, cfg.methods.l1pos, &log);
  } else {
    throw ConfigError("unknown method '" + method + "'; available: tikhonov, l1pos");
  }

  std::string raster = join(dir, "recon_" + method + ".raster");
  write_raster(raster, x);
  write_pgm_auto(join(dir, "recon_" + method + ".pgm"), x);
  write_text(join(dir, "convergence_" + method + ".csv"),
             convergence_csv(log, method == "l1pos"));

  nlohmann::json mj;
  if (cfg.phantom.type == PhantomType::grid) {
    CoefficientImage ref = make_phantom(cfg);
    MetricsReport rep = compute_metrics(x, ref, cfg.phantom.grid);
    mj["relative_l2"] = rep.relative_l2;
    mj["psnr"] = rep.psnr;
    mj["grid_contrast"] = rep.grid_contrast;
    mj["contrast_threshold"] = rep.contrast_threshold;
    mj["resolved"] = rep.resolved;
    std::printf("metrics: rel_l2 %.6g, psnr %.6g, grid_contrast %.6g, resolved %s\n",
                rep.relative_l2, rep.psnr, rep.grid_contrast, rep.resolved ? "yes" : "no");
  } else {
    CoefficientImage ref = make_phantom(cfg);
    double rel = relative_l2(x.values, ref.values);
    mj["relative_l2"] = rel;
    std::printf("metrics: rel_l2 %.6g\n", rel);
  }
  write_text(join(dir, "metrics_" + method + ".json"), mj.dump(2) + "\n");

  std::printf("solver: %d iterations, %s, final residual %.6g\n", log.iterations,
              log.converged ? "converged" : "NOT converged", log.verified_residual);
  std::printf("wrote %s\n", raster.c_str());
  if (!log.converged) {
    std::fprintf(stderr, "error: %s did not converge within max_iters\n", method.c_str());
    return 3;
  }
  return 0;
}

std::vector<double> parse_sweep_arg(const std::string& arg) {
  std::vector<double> out;
  std::string cur;
  for (char ch : arg + ",") {
    if (ch == ',') {
      if (cur.empty()) continue;
      size_t pos = 0;
      double v = 0.0;
      try {
        v = std::stod(cur, &pos);
      } catch (const std::exception&) {
        pos = 0;
      }
      if (pos != cur.size() || !(v > 0.0))
        throw ConfigError("--sweep: entries must be positive numbers, got '" + cur + "'");
      out.push_back(v);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  return out;
}

void run_sampling_report(const ExperimentConfig& cfg, const std::string& dir,
                         const std::string& sweep_arg) {
  double omega = cfg.filter.bandwidth;
  SamplingReport rep = compute_report(cfg.geometry, cfg.image_grid, cfg.time_grid, omega);

  nlohmann::json j;
  j["omega_rad_per_mm"] = rep.omega;
  j["support_radius_mm"] = rep.support_radius;
  j["nyquist_h_t_mm"] = rep.nyquist_h_t;
  j["nyquist_h_x_mm"] = rep.nyquist_h_x;
  j["nyquist_h_theta_rad"] = rep.nyquist_h_theta;
  j["actual_h_t_mm"] = rep.actual_h_t;
  j["actual_h_x_mm"] = rep.actual_h_x;
  j["actual_h_theta_rad"] = rep.actual_h_theta;
  j["resolved_disc_radius_mm"] = rep.resolved_disc_radius;
  j["undersampling_factor_angular"] = rep.undersampling_factor_angular;

  char buf[160];
  std::string text;
  std::snprintf(buf, sizeof buf, "band limit: %.10g rad/mm\n", rep.omega);
  text += buf;
  std::snprintf(buf, sizeof buf, "time step: %.10g mm (critical %.10g)\n", rep.actual_h_t,
                rep.nyquist_h_t);
  text += buf;
  std::snprintf(buf, sizeof buf, "grid step: %.10g mm (critical %.10g)\n", rep.actual_h_x,
                rep.nyquist_h_x);
  text += buf;
  std::snprintf(buf, sizeof buf, "angular step: %.10g rad (critical %.10g)\n",
                rep.actual_h_theta, rep.nyquist_h_theta);
  text += buf;
  std::snprintf(buf, sizeof buf, "resolved disc radius: %.10g mm\n", rep.resolved_disc_radius);
  text += buf;
  std::snprintf(buf, sizeof buf, "angular undersampling factor: %.10g\n",
                rep.undersampling_factor_angular);
  text += buf;

  if (cfg.sampling.probe_num > 0) {
    ForwardOperator op = build_from_config(cfg);
    StabilityProbe probe = probe_stability(op, cfg.image_grid.support_radius, omega,
                                           cfg.sampling.probe_num, cfg.seed);
    j["stability"] = {{"sigma_min", probe.sigma_min},
                      {"sigma_max", probe.sigma_max},
                      {"subspace_dim", probe.subspace_dim},
                      {"data_dim", probe.data_dim},
                      {"underdetermined", probe.underdetermined}};
    std::snprintf(buf, sizeof buf,
                  "stability: sigma_min %.6g, sigma_max %.6g, subspace dim %d%s\n",
                  probe.sigma_min, probe.sigma_max, probe.subspace_dim,
                  probe.underdetermined ? " (exceeds data dim)" : "");
    text += buf;
  }

  std::vector<double> factors =
      sweep_arg.empty() ? cfg.sampling.sweep_factors : parse_sweep_arg(sweep_arg);
  if (!factors.empty()) {
    BumpBasis basis{cfg.image_grid.spacing};
    auto builder = [&](const SensorGeometry& geom) {
      return build_forward(geom, cfg.time_grid, cfg.image_grid, basis);
    };
    int probes = std::max(cfg.sampling.probe_num, 10);
    std::vector<SweepRow> rows =
        nyquist_sweep(builder, cfg.geometry, cfg.image_grid, omega, factors, probes,
                      cfg.sampling.sweep_lambda, cfg.seed);
    std::string csv = sweep_csv(rows);
    std::string path = join(dir, "sweep.csv");
    write_text(path, csv);
    text += "sweep written to " + path + "\n";
  }

  write_text(join(dir, "sampling_report.json"), j.dump(2) + "\n");
  write_text(join(dir, "sampling_report.txt"), text);
  std::fputs(text.c_str(), stdout);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"2D photoacoustic tomography toolkit"};
  app.require_subcommand(1);

  std::string config_path, out_dir, method, sweep_arg, sino_path;
  int subsample = 1;
  long long seed = -1;

  auto add_common = [&](CLI::App* c) {
    c->add_option("--config", config_path, "experiment config (JSON)")->required();
    c->add_option("--out", out_dir, "output directory (overrides config)");
    c->add_option("--seed", seed, "seed override");
  };

  CLI::App* cmd_ph = app.add_subcommand("phantom", "rasterize the configured phantom");
  add_common(cmd_ph);
  CLI::App* cmd_si = app.add_subcommand("simulate", "phantom, wave data, filter, decimate");
  add_common(cmd_si);
  cmd_si->add_option("--subsample", subsample, "keep every n-th sensor");
  CLI::App* cmd_re = app.add_subcommand("reconstruct", "solve for the coefficient image");
  add_common(cmd_re);
  cmd_re->add_option("sinogram", sino_path, "input sinogram file")->required();
  cmd_re->add_option("--method", method, "tikhonov or l1pos")->required();
  CLI::App* cmd_sr = app.add_subcommand("sampling-report", "critical rates and stability");
  add_common(cmd_sr);
  cmd_sr->add_option("--sweep", sweep_arg, "angular factors, e.g. \"1,2,4,8\"");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    ExperimentConfig cfg = load_config(config_path);
    if (seed >= 0) cfg.seed = static_cast<uint64_t>(seed);
    std::string dir = out_dir.empty() ? cfg.output_dir : out_dir;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir + ": " + ec.message());

    if (*cmd_ph) {
      run_phantom(cfg, dir);
    } else if (*cmd_si) {
      run_simulate(cfg, dir, subsample);
    } else if (*cmd_re) {
      return run_reconstruct(cfg, dir, sino_path, method);
    } else if (*cmd_sr) {
      run_sampling_report(cfg, dir, sweep_arg);
    }
    return 0;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const IoError& e) {
    std::fprintf(stderr, "io error: %s\n", e.what());
    return 4;
  } catch (const fs::filesystem_error& e) {
    std::fprintf(stderr, "io error: %s\n", e.what());
    return 4;
  } catch (const NumericalError& e) {
    std::fprintf(stderr, "numerical error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
}
