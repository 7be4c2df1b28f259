#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "holo/error.hpp"
#include "holo/scenarios.hpp"

using namespace holo;

namespace {

double distance(const Spot& a, const Spot& b) {
  return std::hypot(a.x - b.x, a.y - b.y, a.z - b.z);
}

void check_rigid(const SpotSet& a, const SpotSet& b) {
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      const double d = distance(a[i], a[j]);
      CHECK(std::abs(distance(b[i], b[j]) - d) <= 1e-12 * d);
    }
  }
}

}  // namespace

TEST_CASE("planar grids") {
  const SpotSet g100 = grid_scenario(10, 10, 3e-4, {});
  CHECK(g100.size() == 100);
  for (const auto& s : g100) {
    CHECK(s.z == 0.0);
    CHECK(s.amplitude == 1.0);
  }
  CHECK(grid_scenario(6, 6, 3e-4, {}).size() == 36);
  CHECK_THROWS_AS(grid_scenario(0, 3, 1e-4, {}), InvalidParameter);
  CHECK_THROWS_AS(grid_scenario(2, 2, 0.0, {}), InvalidParameter);
}

TEST_CASE("quarter turn about x maps y onto z") {
  const SpotSet flat = grid_scenario(2, 2, 2e-4, {});
  const SpotSet turned = grid_scenario(2, 2, 2e-4, {{1, 0, 0}, kPi / 2});
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(turned[i].x == doctest::Approx(flat[i].x));
    CHECK(std::abs(turned[i].y) < 1e-18);
    CHECK(turned[i].z == doctest::Approx(flat[i].y));
  }
}

TEST_CASE("cube corners") {
  const SpotSet two = cubes_scenario(1e-4, {0, 0, 0}, {5e-4, 0, 0}, {});
  CHECK(two.size() == 16);
  for (std::size_t i = 0; i < 8; ++i) {
    CHECK(std::abs(std::abs(two[i].x) - 0.5e-4) < 1e-18);
    CHECK(std::abs(std::abs(two[i].y) - 0.5e-4) < 1e-18);
    CHECK(std::abs(std::abs(two[i].z) - 0.5e-4) < 1e-18);
  }
  std::set<std::tuple<double, double, double>> unique;
  for (const auto& s : two) unique.insert({s.x, s.y, s.z});
  CHECK(unique.size() == 16);
  CHECK_THROWS_AS(cubes_scenario(1e-4, {0, 0, 0}, {0, 0, 0}, {}), InvalidParameter);
  CHECK_THROWS_AS(cubes_scenario(-1.0, {0, 0, 0}, {1e-4, 0, 0}, {}), InvalidParameter);
}

TEST_CASE("full turn is the identity") {
  const SpotSet a = cubes_scenario(6e-4, {-1.2e-3, 0, 0}, {1.2e-3, 0, 0}, {});
  const SpotSet b = cubes_scenario(6e-4, {-1.2e-3, 0, 0}, {1.2e-3, 0, 0}, {{0.3, -1, 2}, kTwoPi});
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(std::abs(a[i].x - b[i].x) <= 1e-12 * 1.5e-3);
    CHECK(std::abs(a[i].y - b[i].y) <= 1e-12 * 1.5e-3);
    CHECK(std::abs(a[i].z - b[i].z) <= 1e-12 * 1.5e-3);
  }
}

TEST_CASE("rotations are rigid") {
  const Scenario sc = named_scenario("cubes");
  const SpotSet base = generate(sc);
  for (int k = 1; k < 8; ++k) check_rigid(base, generate(sc, {{1, 2, -0.5}, 0.37 * k}));
  const SpotSet g = grid_scenario(10, 10, 3e-4, {});
  check_rigid(g, grid_scenario(10, 10, 3e-4, {{0.2, 1, 0.1}, 0.4}));
}

TEST_CASE("named scenarios") {
  CHECK(generate(named_scenario("grid100")).size() == 100);
  CHECK(generate(named_scenario("grid36")).size() == 36);
  CHECK(generate(named_scenario("cubes")).size() == 16);
  CHECK(named_scenario("cubes").spot_count() == 16);
  CHECK(scenario_names().size() == 3);
  CHECK_THROWS_AS(named_scenario("nope"), InvalidParameter);
}

TEST_CASE("every sweep frame stays in the field") {
  const FieldOfView fov = FieldOfView::default_field();
  for (const auto& name : scenario_names()) {
    const Scenario sc = named_scenario(name);
    const auto frames = rotation_sweep(sc, 10, sc.sweep_step, sc.sweep_axis);
    CHECK(frames.size() == 10);
    for (const auto& f : frames) {
      CHECK(f.size() == sc.spot_count());
      for (const auto& s : f) {
        CHECK(std::abs(s.x) <= fov.lateral);
        CHECK(std::abs(s.y) <= fov.lateral);
        CHECK(std::abs(s.z) <= fov.axial);
      }
    }
  }
}

TEST_CASE("rotation sweep frames") {
  const Scenario sc = named_scenario("grid36");
  const auto one = rotation_sweep(sc, 1, 0.5, {0, 0, 1});
  REQUIRE(one.size() == 1);
  const SpotSet base = generate(sc);
  for (std::size_t i = 0; i < base.size(); ++i) CHECK(one[0][i].x == base[i].x);

  // Ten 36 degree steps about z close the circle; frame 10 is frame 0.
  const auto eleven = rotation_sweep(sc, 11, kTwoPi / 10, {0, 0, 1});
  for (std::size_t i = 0; i < base.size(); ++i) {
    CHECK(std::abs(eleven[10][i].x - base[i].x) <= 1e-15);
    CHECK(std::abs(eleven[10][i].y - base[i].y) <= 1e-15);
  }
  // Square grid: a quarter turn permutes the spots.
  const auto quarter = rotation_sweep(sc, 2, kPi / 2, {0, 0, 1});
  for (const auto& s : quarter[1]) {
    bool found = false;
    for (const auto& t : base)
      found = found || (std::abs(s.x - t.x) < 1e-15 && std::abs(s.y - t.y) < 1e-15);
    CHECK(found);
  }
  CHECK_THROWS_AS(rotation_sweep(sc, 0, 0.1, {0, 0, 1}), InvalidParameter);
}

TEST_CASE("out of field spots are rejected") {
  CHECK_THROWS_AS(grid_scenario(2, 2, 0.05, {}), OutOfField);
  FieldOfView narrow{1e-3, 1e-5};
  CHECK_THROWS_AS(grid_scenario(2, 2, 1e-4, {{1, 0, 0}, kPi / 2}, narrow), OutOfField);
  CHECK_NOTHROW(grid_scenario(2, 2, 1e-4, {}, narrow));
}

TEST_CASE("field of view formulas") {
  const FieldOfView f = FieldOfView::for_pupil(1152, 9.2e-6, 800e-9, 0.2);
  CHECK(f.lateral == doctest::Approx(800e-9 * 0.2 / (2 * 9.2e-6)));
  CHECK(f.axial == doctest::Approx(800e-9 * 0.04 / (4 * 576 * 9.2e-6 * 9.2e-6)));
}

TEST_CASE("scenario config files") {
  std::istringstream in(
      "# tilted grid\n"
      "type = grid\n"
      "name = mine\n"
      "rows = 3\n"
      "cols = 4\n"
      "spacing_um = 100\n"
      "rotation_axis = 1,0,0\n"
      "rotation_deg = 90\n"
      "intensities = 1,1,1,1,1,1,1,1,1,1,1,4\n");
  const Scenario s = parse_scenario_config(in);
  CHECK(s.name == "mine");
  CHECK(s.spot_count() == 12);
  const SpotSet spots = generate(s);
  CHECK(spots.size() == 12);
  CHECK(spots[11].amplitude == doctest::Approx(2.0));
  CHECK(std::abs(spots[0].y) < 1e-15);
  CHECK(spots[0].z == doctest::Approx(-100e-6));

  std::istringstream base("base = cubes\nedge_um = 300\n");
  const Scenario c = parse_scenario_config(base);
  CHECK(c.kind == Scenario::Kind::cubes);
  CHECK(c.edge == doctest::Approx(3e-4));
  CHECK(c.name == "cubes");

  std::istringstream bad_key("colour = red\n");
  CHECK_THROWS_AS(parse_scenario_config(bad_key), ParseError);
  std::istringstream bad_line("rows 3\n");
  CHECK_THROWS_AS(parse_scenario_config(bad_line), ParseError);
  std::istringstream bad_num("rows = three\n");
  CHECK_THROWS_AS(parse_scenario_config(bad_num), ParseError);
  CHECK_THROWS_AS(load_scenario_config("/nonexistent.cfg"), IoError);
}
