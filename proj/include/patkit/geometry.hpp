#pragma once
#include <cmath>
#include <vector>

namespace patkit {

struct Vec2 {
  double x = 0.0, y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

// Circular sensor array; angles measured from the positive x axis.
// The angular step is coverage/M by default. With endpoint_inclusive set,
// both arc endpoints carry a sensor and the step becomes coverage/(M-1);
// for a 289 degree arc with 64 sensors the two conventions give
// 0.0788 and 0.0801 rad. The default reproduces the 0.078 figure used
// in the shipped configs.
struct SensorGeometry {
  double radius = 0.0;       // mm
  int num_sensors = 0;
  double coverage = 0.0;     // radians; may pass 2*pi after decimation
  double start_angle = 0.0;  // radians
  double sound_speed = 1.5;  // mm per microsecond
  bool endpoint_inclusive = false;

  double angular_step() const {
    if (endpoint_inclusive && num_sensors > 1) return coverage / (num_sensors - 1);
    return coverage / num_sensors;
  }
  bool full_circle() const { return coverage >= 2.0 * M_PI - 1e-12; }
};

void validate(const SensorGeometry& g);

std::vector<Vec2> sensor_positions(const SensorGeometry& g);

// Times enter in microseconds and leave in mm: one multiplication by the
// sound speed on ingestion, after which the whole pipeline runs with unit
// speed and every time is a length.
std::vector<double> rescale_time(const SensorGeometry& g, const std::vector<double>& times_us);

// Square grid of basis-function centers. Node (ix, iy) sits at
// center + ((ix - (n-1)/2) h, (iy - (n-1)/2) h); storage is row-major
// with iy as the slow index.
struct ImageGrid {
  double spacing = 0.0;  // h_x, mm
  int n = 0;             // samples per axis
  Vec2 center{0.0, 0.0};
  double support_radius = 0.0;  // R0, mm: coefficients live on nodes within this radius

  int num_nodes() const { return n * n; }
  double node_offset() const { return 0.5 * (n - 1); }
  Vec2 node(int ix, int iy) const {
    double off = node_offset();
    return {center.x + (ix - off) * spacing, center.y + (iy - off) * spacing};
  }
  int index(int ix, int iy) const { return iy * n + ix; }
  double half_extent() const { return 0.5 * (n - 1) * spacing; }
};

void validate(const ImageGrid& g);

struct TimeGrid {
  double start = 0.0;  // mm, post-rescaling
  double step = 0.0;   // h_t, mm
  int num_samples = 0;

  double time(int j) const { return start + j * step; }
  double end() const { return start + (num_samples - 1) * step; }
};

void validate(const TimeGrid& g);

struct CoefficientImage {
  ImageGrid grid;
  std::vector<double> values;  // size n*n, index = iy*n + ix

  CoefficientImage() = default;
  explicit CoefficientImage(const ImageGrid& g) : grid(g), values(g.num_nodes(), 0.0) {}
};

struct Sinogram {
  SensorGeometry geometry;
  TimeGrid time_grid;
  std::vector<double> values;  // size M*Nt, index = m*Nt + j

  Sinogram() = default;
  Sinogram(const SensorGeometry& g, const TimeGrid& t)
      : geometry(g), time_grid(t),
        values(static_cast<size_t>(g.num_sensors) * t.num_samples, 0.0) {}
  double& at(int m, int j) { return values[static_cast<size_t>(m) * time_grid.num_samples + j]; }
  double at(int m, int j) const { return values[static_cast<size_t>(m) * time_grid.num_samples + j]; }
};

double l2_norm(const std::vector<double>& v);
double dot(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace patkit
