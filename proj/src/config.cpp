#include "patkit/config.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "patkit/errors.hpp"

namespace patkit {

namespace {

using nlohmann::json;

// tracks which keys of one JSON object were consumed so leftovers can be
// rejected with their full path
struct Section {
  const json& j;
  std::string path;
  std::set<std::string> seen;

  Section(const json& node, std::string p) : j(node), path(std::move(p)) {
    if (!j.is_object()) throw ConfigError(path + ": expected an object");
  }

  std::string at(const std::string& key) const { return path + "." + key; }

  bool has(const std::string& key) {
    if (j.contains(key)) {
      seen.insert(key);
      return true;
    }
    return false;
  }

  const json& get(const std::string& key) {
    if (!has(key)) throw ConfigError(at(key) + ": missing");
    return j.find(key).value();
  }

  double number(const std::string& key) {
    const json& v = get(key);
    if (!v.is_number()) throw ConfigError(at(key) + ": expected a number");
    return v.get<double>();
  }
  double number_or(const std::string& key, double dflt) {
    return j.contains(key) ? number(key) : dflt;
  }
  int integer(const std::string& key) {
    const json& v = get(key);
    if (!v.is_number_integer()) throw ConfigError(at(key) + ": expected an integer");
    return v.get<int>();
  }
  int integer_or(const std::string& key, int dflt) {
    return j.contains(key) ? integer(key) : dflt;
  }
  bool boolean_or(const std::string& key, bool dflt) {
    if (!j.contains(key)) return dflt;
    const json& v = get(key);
    if (!v.is_boolean()) throw ConfigError(at(key) + ": expected a boolean");
    return v.get<bool>();
  }
  std::string text(const std::string& key) {
    const json& v = get(key);
    if (!v.is_string()) throw ConfigError(at(key) + ": expected a string");
    return v.get<std::string>();
  }

  // exactly one of two mutually exclusive keys; returns which was present
  std::string one_of(const std::string& a, const std::string& b) {
    bool ha = j.contains(a), hb = j.contains(b);
    if (ha == hb)
      throw ConfigError(path + ": give exactly one of '" + a + "' and '" + b + "'");
    return ha ? a : b;
  }

  void finish() {
    for (auto it = j.begin(); it != j.end(); ++it)
      if (!seen.count(it.key())) throw ConfigError(at(it.key()) + ": unknown key");
  }
};

constexpr double deg = M_PI / 180.0;

SensorGeometry parse_geometry(const json& node) {
  Section s(node, "geometry");
  SensorGeometry g;
  g.radius = s.number("radius_mm");
  g.num_sensors = s.integer("num_sensors");
  double coverage_deg = s.number("coverage_deg");
  if (coverage_deg > 360.0 + 1e-9)
    throw ConfigError("geometry.coverage_deg: must not exceed 360");
  g.coverage = coverage_deg * deg;
  g.start_angle = s.number_or("start_angle_deg", 0.0) * deg;
  g.sound_speed = s.number_or("sound_speed_m_per_s", 1500.0) / 1000.0;  // to mm/us
  g.endpoint_inclusive = s.boolean_or("endpoint_inclusive", false);
  s.finish();
  validate(g);
  return g;
}

ImageGrid parse_image_grid(const json& node) {
  Section s(node, "image_grid");
  ImageGrid g;
  g.n = s.integer("samples_per_axis");
  if (g.n < 1) throw ConfigError("image_grid.samples_per_axis: must be >= 1");
  std::string which = s.one_of("spacing_mm", "extent_mm");
  if (which == "spacing_mm")
    g.spacing = s.number("spacing_mm");
  else
    g.spacing = s.number("extent_mm") / g.n;
  g.support_radius = s.number("support_radius_mm");
  s.finish();
  validate(g);
  return g;
}

TimeGrid parse_time_grid(const json& node, double sound_speed) {
  Section s(node, "time_grid");
  TimeGrid t;
  t.num_samples = s.integer("num_samples");
  std::string which = s.one_of("step_us", "step_mm");
  bool in_us = which == "step_us";
  t.step = s.number(which);
  std::string start_key = in_us ? "start_us" : "start_mm";
  std::string wrong_start = in_us ? "start_mm" : "start_us";
  if (node.contains(wrong_start))
    throw ConfigError("time_grid." + wrong_start + ": does not match the unit of " + which);
  t.start = s.number_or(start_key, 0.0);
  if (in_us) {
    t.start *= sound_speed;
    t.step *= sound_speed;
  }
  s.finish();
  validate(t);
  return t;
}

FilterSpec parse_filter(const json& node, double grid_spacing) {
  Section s(node, "filter");
  FilterSpec f;
  std::string kind = s.text("kind");
  if (kind == "gaussian")
    f.kind = FilterKind::gaussian;
  else if (kind == "ideal")
    f.kind = FilterKind::ideal;
  else
    throw ConfigError("filter.kind: must be 'gaussian' or 'ideal'");
  std::string which = s.one_of("bandwidth_rad_per_mm", "bandwidth_factor");
  if (which == "bandwidth_rad_per_mm")
    f.bandwidth = s.number(which);
  else
    f.bandwidth = s.number(which) * M_PI / grid_spacing;
  if (node.contains("attenuation") && f.kind == FilterKind::ideal)
    throw ConfigError("filter.attenuation: only meaningful for the gaussian kind");
  f.attenuation = s.number_or("attenuation", 0.01);
  s.finish();
  validate(f);
  return f;
}

PhantomConfig parse_phantom(const json& node, const ImageGrid& grid) {
  Section s(node, "phantom");
  PhantomConfig p;
  std::string type = s.text("type");
  if (type == "grid") {
    p.type = PhantomType::grid;
    p.grid.pitch = s.number("pitch_mm");
    p.grid.bar_width = s.number("bar_width_mm");
    p.grid.extent = s.number("extent_mm");
    p.grid.amplitude = s.number_or("amplitude", 1.0);
    p.grid.orientation = s.number_or("orientation_deg", 0.0) * deg;
    s.finish();
    validate(p.grid);
    // fit checks up front so the message can name the key
    double c = std::abs(std::cos(p.grid.orientation)), sn = std::abs(std::sin(p.grid.orientation));
    if (0.5 * p.grid.extent * (c + sn) > grid.half_extent() + 1e-9)
      throw ConfigError("phantom.extent_mm: pattern does not fit inside the image grid");
    if (0.5 * p.grid.extent * M_SQRT2 > grid.support_radius + grid.spacing + 1e-9)
      throw ConfigError("phantom.extent_mm: pattern corners leave the support disc");
  } else if (type == "random_bandlimited") {
    p.type = PhantomType::random_bandlimited;
    std::string which = s.one_of("bandwidth_rad_per_mm", "bandwidth_factor");
    if (which == "bandwidth_rad_per_mm")
      p.random_bandwidth = s.number(which);
    else
      p.random_bandwidth = s.number(which) * M_PI / grid.spacing;
    if (!(p.random_bandwidth > 0.0))
      throw ConfigError("phantom." + which + ": must be positive");
    p.amplitude = s.number_or("amplitude", 1.0);
    s.finish();
  } else {
    throw ConfigError("phantom.type: must be 'grid' or 'random_bandlimited'");
  }
  return p;
}

MethodSet parse_methods(const json& node) {
  Section s(node, "methods");
  MethodSet m;
  if (s.has("tikhonov")) {
    Section t(s.j.find("tikhonov").value(), "methods.tikhonov");
    m.has_tikhonov = true;
    m.tikhonov.lambda = t.number("lambda");
    if (m.tikhonov.lambda < 0.0) throw ConfigError("methods.tikhonov.lambda: must be >= 0");
    m.tikhonov.max_iters = t.integer_or("max_iters", 500);
    m.tikhonov.tol = t.number_or("tol", 1e-8);
    t.finish();
  }
  if (s.has("l1pos")) {
    Section t(s.j.find("l1pos").value(), "methods.l1pos");
    m.has_l1pos = true;
    m.l1pos.mu = t.number("mu");
    if (m.l1pos.mu < 0.0) throw ConfigError("methods.l1pos.mu: must be >= 0");
    m.l1pos.max_iters = t.integer_or("max_iters", 500);
    m.l1pos.tol = t.number_or("tol", 1e-7);
    m.l1pos.step_size = t.number_or("step_size", 0.0);
    m.l1pos.restart = t.boolean_or("restart", true);
    m.l1pos.norm_iters = t.integer_or("norm_iters", 60);
    m.l1pos.norm_seed = static_cast<uint64_t>(t.integer_or("norm_seed", 977));
    t.finish();
  }
  s.finish();
  return m;
}

SamplingConfig parse_sampling(const json& node) {
  Section s(node, "sampling");
  SamplingConfig sc;
  sc.probe_num = s.integer_or("probe_num", 0);
  if (sc.probe_num != 0 && sc.probe_num < 10)
    throw ConfigError("sampling.probe_num: must be 0 (off) or at least 10");
  if (s.has("sweep_factors")) {
    const json& arr = s.j.find("sweep_factors").value();
    if (!arr.is_array()) throw ConfigError("sampling.sweep_factors: expected an array");
    for (const json& v : arr) {
      if (!v.is_number() || !(v.get<double>() > 0.0))
        throw ConfigError("sampling.sweep_factors: entries must be positive numbers");
      sc.sweep_factors.push_back(v.get<double>());
    }
  }
  sc.sweep_lambda = s.number_or("sweep_lambda", 1e-6);
  if (!(sc.sweep_lambda >= 0.0)) throw ConfigError("sampling.sweep_lambda: must be >= 0");
  s.finish();
  return sc;
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  Section s(root, "config");
  ExperimentConfig cfg;
  cfg.geometry = parse_geometry(s.get("geometry"));
  cfg.image_grid = parse_image_grid(s.get("image_grid"));
  cfg.time_grid = parse_time_grid(s.get("time_grid"), cfg.geometry.sound_speed);
  cfg.filter = parse_filter(s.get("filter"), cfg.image_grid.spacing);
  cfg.phantom = parse_phantom(s.get("phantom"), cfg.image_grid);
  if (s.has("methods")) cfg.methods = parse_methods(s.j.find("methods").value());
  if (s.has("sampling")) cfg.sampling = parse_sampling(s.j.find("sampling").value());
  if (s.has("output_dir")) {
    const json& v = s.j.find("output_dir").value();
    if (!v.is_string()) throw ConfigError("config.output_dir: expected a string");
    cfg.output_dir = v.get<std::string>();
  }
  if (s.has("seed")) {
    const json& v = s.j.find("seed").value();
    if (!v.is_number_integer() || v.get<int64_t>() < 0)
      throw ConfigError("config.seed: expected a nonnegative integer");
    cfg.seed = v.get<uint64_t>();
  }
  s.finish();

  // cross checks that individual sections cannot see
  if (cfg.geometry.radius <= cfg.image_grid.half_extent() * M_SQRT2)
    throw ConfigError("geometry.radius_mm: sensors must stand clear of the imaging square");
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open config file " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

CoefficientImage make_phantom(const ExperimentConfig& cfg) {
  if (cfg.phantom.type == PhantomType::grid)
    return rasterize_grid_phantom(cfg.phantom.grid, cfg.image_grid);
  CoefficientImage x =
      random_bandlimited_phantom(cfg.image_grid, cfg.phantom.random_bandwidth, cfg.seed);
  if (cfg.phantom.amplitude != 1.0)
    for (double& v : x.values) v *= cfg.phantom.amplitude;
  return x;
}

}  // namespace patkit
