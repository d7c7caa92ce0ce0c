#include "patkit/io.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "patkit/errors.hpp"

namespace patkit {

static_assert(std::endian::native == std::endian::little,
              "payloads are little-endian floats written raw");

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string timestamp_line() {
  std::time_t now = std::time(nullptr);
  char buf[64];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return std::string("created ") + buf + "\n";
}

// header lines after the magic: "key value...\n" in any order, "created"
// ignored, terminated by "payload <count>"
std::map<std::string, std::string> read_header(std::ifstream& f, const std::string& path,
                                               size_t* payload_count) {
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(f, line)) {
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key)) throw IoError(path + ": blank header line");
    std::string rest;
    std::getline(ls, rest);
    if (!rest.empty() && rest[0] == ' ') rest.erase(0, 1);
    if (key == "payload") {
      *payload_count = std::stoull(rest);
      return kv;
    }
    if (key == "created") continue;
    if (kv.count(key)) throw IoError(path + ": duplicate header key '" + key + "'");
    kv[key] = rest;
  }
  throw IoError(path + ": header ends without a payload line");
}

std::string take(std::map<std::string, std::string>& kv, const std::string& path,
                 const std::string& key) {
  auto it = kv.find(key);
  if (it == kv.end()) throw IoError(path + ": missing header key '" + key + "'");
  std::string v = it->second;
  kv.erase(it);
  return v;
}

void expect_consumed(const std::map<std::string, std::string>& kv, const std::string& path) {
  if (!kv.empty()) throw IoError(path + ": unexpected header key '" + kv.begin()->first + "'");
}

void write_payload(std::ofstream& f, const std::vector<double>& v) {
  std::vector<float> buf(v.size());
  for (size_t i = 0; i < v.size(); ++i) buf[i] = static_cast<float>(v[i]);
  f.write(reinterpret_cast<const char*>(buf.data()),
          static_cast<std::streamsize>(buf.size() * sizeof(float)));
}

std::vector<double> read_payload(std::ifstream& f, const std::string& path, size_t count) {
  std::vector<float> buf(count);
  f.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(count * sizeof(float)));
  if (static_cast<size_t>(f.gcount()) != count * sizeof(float))
    throw IoError(path + ": payload truncated");
  if (f.peek() != std::ifstream::traits_type::eof())
    throw IoError(path + ": trailing bytes after payload");
  std::vector<double> out(count);
  for (size_t i = 0; i < count; ++i) out[i] = buf[i];
  return out;
}

}  // namespace

void write_raster(const std::string& path, const CoefficientImage& x, bool with_timestamp) {
  validate(x.grid);
  if (static_cast<int>(x.values.size()) != x.grid.num_nodes())
    throw IoError(path + ": value count does not match the grid");
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path + " for writing");
  std::string h = "PATKIT RASTER 1\n";
  h += "n " + std::to_string(x.grid.n) + "\n";
  h += "spacing " + fmt(x.grid.spacing) + "\n";
  h += "center " + fmt(x.grid.center.x) + " " + fmt(x.grid.center.y) + "\n";
  h += "support_radius " + fmt(x.grid.support_radius) + "\n";
  if (with_timestamp) h += timestamp_line();
  h += "payload " + std::to_string(x.values.size()) + "\n";
  f.write(h.data(), static_cast<std::streamsize>(h.size()));
  write_payload(f, x.values);
  f.close();
  if (!f) throw IoError("write failed: " + path);
}

CoefficientImage read_raster(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path);
  std::string magic;
  std::getline(f, magic);
  if (magic != "PATKIT RASTER 1") throw IoError(path + ": not a raster file");
  size_t count = 0;
  auto kv = read_header(f, path, &count);

  CoefficientImage x;
  x.grid.n = std::stoi(take(kv, path, "n"));
  x.grid.spacing = std::stod(take(kv, path, "spacing"));
  {
    std::istringstream cs(take(kv, path, "center"));
    if (!(cs >> x.grid.center.x >> x.grid.center.y))
      throw IoError(path + ": malformed center line");
  }
  x.grid.support_radius = std::stod(take(kv, path, "support_radius"));
  expect_consumed(kv, path);
  validate(x.grid);
  if (count != static_cast<size_t>(x.grid.num_nodes()))
    throw IoError(path + ": payload size does not match the grid");
  x.values = read_payload(f, path, count);
  return x;
}

void write_sinogram(const std::string& path, const Sinogram& g, const SinogramMeta& meta,
                    bool with_timestamp) {
  validate(g.geometry);
  validate(g.time_grid);
  if (g.values.size() !=
      static_cast<size_t>(g.geometry.num_sensors) * g.time_grid.num_samples)
    throw IoError(path + ": value count does not match geometry and time grid");
  double h_theta =
      meta.effective_h_theta > 0.0 ? meta.effective_h_theta : g.geometry.angular_step();
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path + " for writing");
  std::string h = "PATKIT SINOGRAM 1\n";
  h += "num_sensors " + std::to_string(g.geometry.num_sensors) + "\n";
  h += "num_samples " + std::to_string(g.time_grid.num_samples) + "\n";
  h += "radius " + fmt(g.geometry.radius) + "\n";
  h += "coverage " + fmt(g.geometry.coverage) + "\n";
  h += "start_angle " + fmt(g.geometry.start_angle) + "\n";
  h += "sound_speed " + fmt(g.geometry.sound_speed) + "\n";
  h += "endpoint_inclusive " + std::string(g.geometry.endpoint_inclusive ? "1" : "0") + "\n";
  h += "h_theta " + fmt(h_theta) + "\n";
  h += "subsample " + std::to_string(meta.subsample) + "\n";
  h += "time_start " + fmt(g.time_grid.start) + "\n";
  h += "time_step " + fmt(g.time_grid.step) + "\n";
  if (with_timestamp) h += timestamp_line();
  h += "payload " + std::to_string(g.values.size()) + "\n";
  f.write(h.data(), static_cast<std::streamsize>(h.size()));
  write_payload(f, g.values);
  f.close();
  if (!f) throw IoError("write failed: " + path);
}

Sinogram read_sinogram(const std::string& path, SinogramMeta* meta) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path);
  std::string magic;
  std::getline(f, magic);
  if (magic != "PATKIT SINOGRAM 1") throw IoError(path + ": not a sinogram file");
  size_t count = 0;
  auto kv = read_header(f, path, &count);

  Sinogram g;
  g.geometry.num_sensors = std::stoi(take(kv, path, "num_sensors"));
  g.time_grid.num_samples = std::stoi(take(kv, path, "num_samples"));
  g.geometry.radius = std::stod(take(kv, path, "radius"));
  g.geometry.coverage = std::stod(take(kv, path, "coverage"));
  g.geometry.start_angle = std::stod(take(kv, path, "start_angle"));
  g.geometry.sound_speed = std::stod(take(kv, path, "sound_speed"));
  g.geometry.endpoint_inclusive = take(kv, path, "endpoint_inclusive") == "1";
  SinogramMeta m;
  m.effective_h_theta = std::stod(take(kv, path, "h_theta"));
  m.subsample = std::stoi(take(kv, path, "subsample"));
  g.time_grid.start = std::stod(take(kv, path, "time_start"));
  g.time_grid.step = std::stod(take(kv, path, "time_step"));
  expect_consumed(kv, path);
  validate(g.geometry);
  validate(g.time_grid);
  if (count != static_cast<size_t>(g.geometry.num_sensors) * g.time_grid.num_samples)
    throw IoError(path + ": payload size does not match geometry and time grid");
  g.values = read_payload(f, path, count);
  if (meta) *meta = m;
  return g;
}

void write_pgm(const std::string& path, const CoefficientImage& x, double lo, double hi) {
  validate(x.grid);
  if (static_cast<int>(x.values.size()) != x.grid.num_nodes())
    throw IoError(path + ": value count does not match the grid");
  if (hi < lo) throw IoError(path + ": display window is inverted");
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path + " for writing");
  std::string h = "P5\n# window " + fmt(lo) + " " + fmt(hi) + "\n" +
                  std::to_string(x.grid.n) + " " + std::to_string(x.grid.n) + "\n65535\n";
  f.write(h.data(), static_cast<std::streamsize>(h.size()));
  double span = hi - lo;
  std::vector<unsigned char> row(static_cast<size_t>(x.grid.n) * 2);
  for (int iy = 0; iy < x.grid.n; ++iy) {
    for (int ix = 0; ix < x.grid.n; ++ix) {
      double v = x.values[x.grid.index(ix, iy)];
      unsigned s = 0;
      if (span > 0.0) {
        double t = (v - lo) / span;
        if (t < 0.0) t = 0.0;
        if (t > 1.0) t = 1.0;
        s = static_cast<unsigned>(std::lround(t * 65535.0));
      }
      row[2 * ix] = static_cast<unsigned char>(s >> 8);  // sample bytes are big-endian
      row[2 * ix + 1] = static_cast<unsigned char>(s & 0xff);
    }
    f.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(row.size()));
  }
  f.close();
  if (!f) throw IoError("write failed: " + path);
}

}  // namespace patkit
