#include <doctest.h>

#include <array>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>

#include "nac/errors.hpp"
#include "nac/gridnav.hpp"
#include "nac/tracksim.hpp"

using namespace nac;

namespace {

constexpr auto kUp = static_cast<std::size_t>(GridAction::up);
constexpr auto kDown = static_cast<std::size_t>(GridAction::down);
constexpr auto kLeft = static_cast<std::size_t>(GridAction::left);
constexpr auto kRight = static_cast<std::size_t>(GridAction::right);

// Hard-max value iteration over every cell by probing the environment.
std::vector<double> value_iteration(const GridMap& map, double gamma) {
  GridNav env(map, 1000);
  std::vector<double> v(map.num_cells(), 0.0);
  for (int sweep = 0; sweep < 500; ++sweep) {
    for (std::size_t r = 0; r < map.rows(); ++r) {
      for (std::size_t c = 0; c < map.cols(); ++c) {
        if (map.at(r, c) == 'W' || map.at(r, c) == 'H') continue;
        double best = -1.0;
        for (std::size_t a = 0; a < GridNav::kNumActions; ++a) {
          env.place(r, c);
          const StepResult s = env.step(a);
          best = std::max(best, s.reward + (s.done ? 0.0 : gamma * v[s.obs.index()]));
        }
        v[map.index(r, c)] = best;
      }
    }
  }
  return v;
}

double reference_reward(double theta, double d, double v, double w, bool damage, bool abs_sin) {
  if (damage) return -10.0;
  const double s = abs_sin ? std::abs(std::sin(theta)) : std::sin(theta);
  return (std::cos(theta) - s - std::abs(d) / w) * v;
}

}  // namespace

TEST_CASE("default map layout") {
  const GridMap m = GridMap::default_map();
  CHECK(m.rows() == 3);
  CHECK(m.cols() == 6);
  CHECK(m.at(0, 0) == 'S');
  CHECK(m.at(0, 5) == 'H');
  CHECK(m.at(1, 1) == 'W');
  CHECK(m.index(2, 5) == 17);
}

TEST_CASE("map validation") {
  CHECK_THROWS_AS(GridMap({"S..", "..H", ".."}), ConfigError);
  CHECK_THROWS_AS(GridMap({"S.X", "..H"}), ConfigError);
  CHECK_THROWS_AS(GridMap({"S..", "..."}), ConfigError);
  CHECK_THROWS_AS(GridMap({"SS.", "..H"}), ConfigError);
  CHECK_NOTHROW(GridMap::parse("S.\n.H\n"));
  CHECK_THROWS_AS(GridMap::load("/nonexistent/map.txt"), ConfigError);
}

TEST_CASE("gridnav reset and steps") {
  GridNav env(GridMap::default_map());
  CHECK_THROWS_AS(env.step(kUp), UsageError);
  CHECK(env.reset().index() == 0);
  CHECK(env.reset().index() == 0);

  StepResult s = env.step(kUp);
  CHECK(s.obs.index() == 0);
  CHECK(s.reward == 0.0);
  CHECK_FALSE(s.done);

  env.place(0, 4);
  s = env.step(kRight);
  CHECK(s.reward == 1.0);
  CHECK(s.done);
  CHECK_THROWS_AS(env.step(kRight), UsageError);

  env.place(0, 1);
  s = env.step(kDown);
  CHECK(s.obs.index() == 7);
  CHECK(s.reward == 0.0);
  CHECK(s.done);
}

TEST_CASE("gridnav step cap ends the episode") {
  GridNav env(GridMap::default_map(), 3);
  env.reset();
  CHECK_FALSE(env.step(kUp).done);
  CHECK_FALSE(env.step(kUp).done);
  CHECK(env.step(kUp).done);
}

TEST_CASE("gridnav transition table snapshot") {
  // next cell per (cell, action) on the default map for non-terminal cells,
  // in Up, Down, Left, Right order.
  const std::array<std::array<int, 4>, 18> expected{{
      {0, 6, 0, 1},    {1, 7, 0, 2},    {2, 8, 1, 3},    {3, 9, 2, 4},    {4, 10, 3, 5},  {-1, -1, -1, -1},
      {0, 12, 6, 7},   {-1, -1, -1, -1}, {-1, -1, -1, -1}, {-1, -1, -1, -1}, {-1, -1, -1, -1}, {5, 17, 10, 11},
      {6, 12, 12, 13}, {7, 13, 12, 14}, {8, 14, 13, 15}, {9, 15, 14, 16}, {10, 16, 15, 17}, {11, 17, 16, 17},
  }};
  const GridMap m = GridMap::default_map();
  GridNav env(m);
  for (std::size_t cell = 0; cell < 18; ++cell) {
    if (expected[cell][0] < 0) continue;
    for (std::size_t a = 0; a < 4; ++a) {
      env.place(cell / 6, cell % 6);
      const StepResult s = env.step(a);
      CAPTURE(cell);
      CAPTURE(a);
      CHECK(s.obs.index() == static_cast<std::size_t>(expected[cell][a]));
      const char tile = m.at(s.obs.index() / 6, s.obs.index() % 6);
      CHECK(s.done == (tile == 'W' || tile == 'H'));
      CHECK(s.reward == (tile == 'H' ? 1.0 : 0.0));
    }
  }
}

TEST_CASE("default map optimal and long path returns") {
  const auto v = value_iteration(GridMap::default_map(), 0.95);
  CHECK(v[0] == doctest::Approx(0.81450625).epsilon(1e-12));

  GridNav env(GridMap::default_map());
  env.reset();
  double ret = 0.0;
  double disc = 1.0;
  for (std::size_t a : {kDown, kDown, kRight, kRight, kRight, kRight, kRight, kUp, kUp}) {
    const StepResult s = env.step(a);
    ret += disc * s.reward;
    disc *= 0.95;
  }
  CHECK(env.done());
  CHECK(ret == doctest::Approx(0.66342043).epsilon(1e-8));
}

TEST_CASE("drive action encoding") {
  for (std::size_t a = 0; a < TrackSim::kNumActions; ++a) CHECK(encode_drive_action(decode_drive_action(a)) == a);
  CHECK(decode_drive_action(4).steer == 0);
  CHECK(decode_drive_action(4).accel == 0);
  CHECK(decode_drive_action(0).steer == -1);
  CHECK(decode_drive_action(0).accel == 1);
  CHECK(decode_drive_action(8).steer == 1);
  CHECK(decode_drive_action(8).accel == -1);
}

TEST_CASE("track geometry") {
  const TrackGeometry g;
  CHECK(g.length() == doctest::Approx(200.0 + 60.0 * std::numbers::pi));
  CHECK(g.curvature(50.0) == 0.0);
  CHECK(g.curvature(100.0 + 10.0) == doctest::Approx(1.0 / 30.0));
  CHECK(g.curvature(g.length() + 50.0) == 0.0);
  CHECK(g.curvature(-1.0) == doctest::Approx(1.0 / 30.0));
}

TEST_CASE("footnote reward examples") {
  const TrackGeometry g;
  CHECK(footnote_reward({0, 0, 0, 10}, g, false, false) == doctest::Approx(10.0));
  CHECK(footnote_reward({0, 0, 0, 10}, g, true, false) == -10.0);
  CHECK(footnote_reward({0, 0, std::numbers::pi / 2, 10}, g, false, false) == doctest::Approx(-10.0));
  CHECK(speed_squared_reward({0, 0, 0, 10}, false) == 100.0);
  CHECK(speed_squared_reward({0, 0, 0, 0}, false) == 0.0);
  CHECK(speed_squared_reward({0, 0, 0, 20}, false) == 400.0);
  CHECK(speed_squared_reward({0, 0, 0, 20}, true) == -10.0);
}

TEST_CASE("footnote reward matches an independent formula on random states") {
  const TrackGeometry g;
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> th(-std::numbers::pi, std::numbers::pi);
  std::uniform_real_distribution<double> dd(-3.0, 3.0);
  std::uniform_real_distribution<double> vv(0.0, 20.0);
  for (int i = 0; i < 1000; ++i) {
    const VehicleState s{0.0, dd(rng), th(rng), vv(rng)};
    const bool damage = i % 7 == 0;
    for (bool abs_sin : {false, true}) {
      CHECK(footnote_reward(s, g, damage, abs_sin) ==
            doctest::Approx(reference_reward(s.theta, s.d, s.v, g.half_width, damage, abs_sin)).epsilon(1e-12));
    }
  }
}

TEST_CASE("tracksim reset") {
  TrackSim env;
  CHECK_THROWS_AS(env.step(4), UsageError);
  const Observation o = env.reset();
  CHECK(o.width() == 28);
  const auto f = o.features();
  for (std::size_t k = 1; k < 4; ++k) {
    for (std::size_t i = 0; i < 7; ++i) CHECK(f[k * 7 + i] == f[i]);
  }
  CHECK(env.state().p == 0.0);
  CHECK(env.state().v == 1.0);
  CHECK(env.reset() == o);
  const StepResult s = env.step(4);
  CHECK(s.reward == doctest::Approx(1.0));
}

TEST_CASE("tracksim frame contents") {
  TrackSim env;
  const Observation o = env.place({10.0, 0.0, 0.0, 20.0});
  const auto f = o.features();
  const auto cur = f.subspan(21, 7);
  CHECK(cur[0] == 0.0);
  CHECK(cur[1] == 1.0);
  CHECK(cur[2] == 0.0);
  CHECK(cur[3] == 1.0);
  CHECK(cur[4] == 0.0);
  CHECK(cur[5] == 0.0);
  CHECK(cur[6] == 0.0);
  const auto near_arc = drive_frame({90.0, 0.0, 0.0, 20.0}, TrackGeometry{});
  CHECK(near_arc[5] == doctest::Approx(1.0));
  CHECK(near_arc[6] == doctest::Approx(1.0));
}

TEST_CASE("tracksim frame stack shifts") {
  TrackSim env;
  const Observation first = env.reset();
  const auto reset_frame = std::vector<double>(first.features().begin(), first.features().begin() + 7);
  const StepResult s = env.step(1);
  const auto f = s.obs.features();
  for (std::size_t k = 0; k < 3; ++k) {
    for (std::size_t i = 0; i < 7; ++i) CHECK(f[k * 7 + i] == reset_frame[i]);
  }
  CHECK(f[21] != reset_frame[0]);
}

TEST_CASE("tracksim dynamics follow the kinematic update") {
  const TrackGeometry g;
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<std::size_t> act(0, 8);
  TrackSim env;
  env.reset();
  for (int i = 0; i < 300 && !env.done(); ++i) {
    const VehicleState before = env.state();
    const std::size_t a = act(rng);
    const DriveControl c = decode_drive_action(a);
    const double v = std::clamp(before.v + c.accel * 1.0, 0.0, 20.0);
    double theta = before.theta + c.steer * 0.1 - g.curvature(before.p) * v * std::cos(before.theta) * 0.2;
    theta = wrap_angle(theta);
    double p = std::fmod(before.p + v * std::cos(theta) * 0.2, g.length());
    if (p < 0) p += g.length();
    const double d = before.d + v * std::sin(theta) * 0.2;
    const StepResult s = env.step(a);
    const VehicleState& after = env.state();
    CHECK(after.v == doctest::Approx(v));
    CHECK(after.theta == doctest::Approx(theta));
    CHECK(after.p == doctest::Approx(p));
    CHECK(after.d == doctest::Approx(d));
    CHECK(s.damage == (std::abs(d) > g.half_width));
    CHECK(after.p >= 0.0);
    CHECK(after.p < g.length());
    CHECK(after.theta >= -std::numbers::pi);
    CHECK(after.theta < std::numbers::pi);
    if (s.damage) {
      CHECK(s.reward == -10.0);
      CHECK(s.done);
    }
  }
}

TEST_CASE("tracksim energy sanity") {
  TrackSim env;
  env.place({0.0, 0.0, 0.0, 5.0});
  for (int i = 0; i < 50; ++i) {
    env.step(4);
    CHECK(env.state().v == 5.0);
    CHECK(env.state().d == 0.0);
    CHECK(env.state().theta == 0.0);
  }
}

TEST_CASE("tracksim episode cap") {
  TrackSim env;
  env.reset();
  std::size_t steps = 0;
  // Braking to a stop keeps the car on the road.
  while (!env.done()) {
    env.step(5);
    ++steps;
  }
  CHECK(steps == 500);
}

TEST_CASE("wrap angle range") {
  for (double x : {-10.0, -std::numbers::pi, 0.0, std::numbers::pi, 3.5, 100.0}) {
    const double w = wrap_angle(x);
    CHECK(w >= -std::numbers::pi);
    CHECK(w < std::numbers::pi);
    CHECK(std::cos(w) == doctest::Approx(std::cos(x)));
  }
}

TEST_CASE("environment factory") {
  EnvConfig c;
  CHECK(make_environment(c)->id() == "gridnav");
  c.id = "tracksim";
  c.frame_stack = 2;
  auto env = make_environment(c);
  CHECK(env->num_actions() == 9);
  CHECK(env->observation_spec().size == 14);
  c.id = "torcs";
  CHECK_THROWS_AS(make_environment(c), ConfigError);
}
