#include "patkit/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace patkit {

void validate(const SensorGeometry& g) {
  if (g.num_sensors < 1) throw std::invalid_argument("geometry: num_sensors must be >= 1");
  if (!(g.radius > 0.0)) throw std::invalid_argument("geometry: radius must be > 0");
  // coverage may exceed 2*pi: decimating a full ring by a factor that does
  // not divide the sensor count yields a uniform step whose total sweep wraps
  if (!(g.coverage > 0.0)) throw std::invalid_argument("geometry: coverage must be > 0");
  if (!(g.sound_speed > 0.0)) throw std::invalid_argument("geometry: sound speed must be > 0");
}

std::vector<Vec2> sensor_positions(const SensorGeometry& g) {
  validate(g);
  std::vector<Vec2> pts(g.num_sensors);
  double step = g.angular_step();
  for (int m = 0; m < g.num_sensors; ++m) {
    double a = g.start_angle + m * step;
    pts[m] = {g.radius * std::cos(a), g.radius * std::sin(a)};
  }
  return pts;
}

std::vector<double> rescale_time(const SensorGeometry& g, const std::vector<double>& times_us) {
  if (!(g.sound_speed > 0.0)) throw std::invalid_argument("rescale_time: sound speed must be > 0");
  std::vector<double> out(times_us.size());
  for (size_t i = 0; i < times_us.size(); ++i) out[i] = g.sound_speed * times_us[i];
  return out;
}

void validate(const ImageGrid& g) {
  if (g.n < 1) throw std::invalid_argument("image_grid: samples_per_axis must be >= 1");
  if (!(g.spacing > 0.0)) throw std::invalid_argument("image_grid: spacing must be > 0");
  if (g.support_radius < 0.0) throw std::invalid_argument("image_grid: support_radius must be >= 0");
}

void validate(const TimeGrid& g) {
  if (g.num_samples < 1) throw std::invalid_argument("time_grid: num_samples must be >= 1");
  if (!(g.step > 0.0)) throw std::invalid_argument("time_grid: step must be > 0");
  if (g.start < 0.0) throw std::invalid_argument("time_grid: start must be >= 0");
}

double l2_norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace patkit
