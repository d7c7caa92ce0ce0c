#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "patkit/filter.hpp"
#include "patkit/geometry.hpp"
#include "patkit/phantom.hpp"
#include "patkit/recon.hpp"

namespace patkit {

// One JSON file fully determines an experiment. Lengths carry an _mm suffix,
// angles _deg, the sound speed is metres per second, and the time grid is
// given in exactly one of microseconds or millimetres. Unknown or misspelled
// keys are rejected with the full key path in the message, as are keys that
// contradict each other.

enum class PhantomType { grid, random_bandlimited };

struct PhantomConfig {
  PhantomType type = PhantomType::grid;
  GridPhantomSpec grid;
  double random_bandwidth = 0.0;  // rad/mm
  double amplitude = 1.0;
};

struct MethodSet {
  bool has_tikhonov = false;
  TikhonovConfig tikhonov;
  bool has_l1pos = false;
  L1PosConfig l1pos;
};

struct SamplingConfig {
  int probe_num = 0;  // 0 skips the stability probe
  std::vector<double> sweep_factors;
  double sweep_lambda = 1e-6;
};

struct ExperimentConfig {
  SensorGeometry geometry;
  ImageGrid image_grid;
  TimeGrid time_grid;  // stored in millimetres (times are lengths internally)
  FilterSpec filter;
  PhantomConfig phantom;
  MethodSet methods;
  SamplingConfig sampling;
  std::string output_dir = ".";
  uint64_t seed = 1;
};

ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);

// Rasterizes or draws the configured phantom, deterministic in cfg.seed.
CoefficientImage make_phantom(const ExperimentConfig& cfg);

}  // namespace patkit
