#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "patkit/geometry.hpp"

using namespace patkit;

TEST_CASE("four sensors on a full circle sit on the axes") {
  SensorGeometry g;
  g.radius = 40.0;
  g.num_sensors = 4;
  g.coverage = 2.0 * M_PI;
  auto pos = sensor_positions(g);
  REQUIRE(pos.size() == 4);
  for (const Vec2& p : pos) CHECK(norm(p) == doctest::Approx(40.0).epsilon(1e-14));
  CHECK(pos[0].x == doctest::Approx(40.0));
  CHECK(pos[0].y == doctest::Approx(0.0).scale(40.0));
  CHECK(pos[1].x == doctest::Approx(0.0).scale(40.0));
  CHECK(pos[1].y == doctest::Approx(40.0));
  CHECK(pos[2].x == doctest::Approx(-40.0));
  CHECK(pos[3].y == doctest::Approx(-40.0));
}

TEST_CASE("partial arc step: 289 degrees over 64 sensors") {
  SensorGeometry g;
  g.radius = 40.0;
  g.num_sensors = 64;
  g.coverage = 289.0 * M_PI / 180.0;
  CHECK(g.angular_step() == doctest::Approx(0.0788).epsilon(1e-3));
  CHECK_FALSE(g.full_circle());

  SensorGeometry inc = g;
  inc.endpoint_inclusive = true;
  CHECK(inc.angular_step() == doctest::Approx(g.coverage / 63.0));
  CHECK(inc.angular_step() > g.angular_step());
}

TEST_CASE("single sensor starting at pi lands at (-1, 0)") {
  SensorGeometry g;
  g.radius = 1.0;
  g.num_sensors = 1;
  g.coverage = 2.0 * M_PI;
  g.start_angle = M_PI;
  auto pos = sensor_positions(g);
  REQUIRE(pos.size() == 1);
  CHECK(pos[0].x == doctest::Approx(-1.0));
  CHECK(pos[0].y == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("start angle shift rotates every sensor rigidly") {
  SensorGeometry g;
  g.radius = 40.0;
  g.num_sensors = 17;
  g.coverage = 289.0 * M_PI / 180.0;
  g.start_angle = 0.3;
  double delta = 0.7431;
  SensorGeometry shifted = g;
  shifted.start_angle += delta;

  auto a = sensor_positions(g);
  auto b = sensor_positions(shifted);
  double c = std::cos(delta), s = std::sin(delta);
  for (size_t i = 0; i < a.size(); ++i) {
    Vec2 rot{c * a[i].x - s * a[i].y, s * a[i].x + c * a[i].y};
    CHECK(std::abs(rot.x - b[i].x) <= 1e-12 * g.radius);
    CHECK(std::abs(rot.y - b[i].y) <= 1e-12 * g.radius);
  }
}

TEST_CASE("time rescaling turns microseconds into millimeters") {
  SensorGeometry g;
  g.radius = 40.0;
  g.num_sensors = 1;
  g.coverage = 2.0 * M_PI;
  g.sound_speed = 1.5;
  auto t = rescale_time(g, {26.7, 0.0, 1.0});
  REQUIRE(t.size() == 3);
  CHECK(t[0] == doctest::Approx(40.05).epsilon(1e-14));
  CHECK(t[1] == 0.0);
  CHECK(t[2] == doctest::Approx(1.5));
  CHECK(rescale_time(g, {}).empty());
}

TEST_CASE("geometry validation rejects bad fields") {
  SensorGeometry g;
  g.radius = 40.0;
  g.num_sensors = 4;
  g.coverage = 2.0 * M_PI;
  CHECK_NOTHROW(validate(g));

  SensorGeometry bad = g;
  bad.radius = 0.0;
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
  bad = g;
  bad.num_sensors = 0;
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
  bad = g;
  bad.coverage = 0.0;
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
  bad = g;
  bad.coverage = -1.0;
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
  bad = g;
  bad.sound_speed = 0.0;
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
}

TEST_CASE("image grid node layout") {
  ImageGrid g;
  g.spacing = 0.5;
  g.n = 5;
  g.support_radius = 2.0;
  CHECK_NOTHROW(validate(g));
  CHECK(g.num_nodes() == 25);
  CHECK(g.half_extent() == doctest::Approx(1.0));

  // center node of an odd grid is the grid center
  Vec2 c = g.node(2, 2);
  CHECK(c.x == doctest::Approx(0.0).scale(1.0));
  CHECK(c.y == doctest::Approx(0.0).scale(1.0));
  Vec2 corner = g.node(0, 0);
  CHECK(corner.x == doctest::Approx(-1.0));
  CHECK(corner.y == doctest::Approx(-1.0));
  CHECK(g.index(3, 1) == 1 * 5 + 3);

  ImageGrid off = g;
  off.center = {2.0, -3.0};
  Vec2 p = off.node(4, 0);
  CHECK(p.x == doctest::Approx(3.0));
  CHECK(p.y == doctest::Approx(-4.0));

  ImageGrid bad = g;
  bad.n = 0;
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
  bad = g;
  bad.spacing = 0.0;
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
  bad = g;
  bad.support_radius = -1.0;
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
}

TEST_CASE("time grid endpoints") {
  TimeGrid t;
  t.start = 1.0;
  t.step = 0.25;
  t.num_samples = 9;
  CHECK_NOTHROW(validate(t));
  CHECK(t.time(0) == 1.0);
  CHECK(t.time(4) == doctest::Approx(2.0));
  CHECK(t.end() == doctest::Approx(3.0));

  TimeGrid bad = t;
  bad.num_samples = 0;
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
  bad = t;
  bad.step = 0.0;
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
  bad = t;
  bad.start = -0.5;
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
}

TEST_CASE("sinogram indexing is sensor-major") {
  SensorGeometry g;
  g.radius = 10.0;
  g.num_sensors = 3;
  g.coverage = 2.0 * M_PI;
  TimeGrid t;
  t.step = 1.0;
  t.num_samples = 4;
  Sinogram s(g, t);
  REQUIRE(s.values.size() == 12);
  s.at(2, 3) = 7.0;
  CHECK(s.values[11] == 7.0);
  s.at(1, 0) = 5.0;
  CHECK(s.values[4] == 5.0);
}
