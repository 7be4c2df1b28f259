#include <doctest.h>

#include <cmath>
#include <random>

#include "holo/error.hpp"
#include "holo/metrics.hpp"
#include "holo/solvers.hpp"
#include "oracle.hpp"

using namespace holo;

TEST_CASE("efficiency sums intensities") {
  CHECK(efficiency(std::vector<double>{1.0}) == 1.0);
  CHECK(efficiency(std::vector<double>{0.3, 0.4}) == doctest::Approx(0.7));
  CHECK_THROWS_AS(efficiency(std::vector<double>{}), InvalidParameter);
}

TEST_CASE("uniformity examples") {
  CHECK(uniformity(std::vector<double>{5, 5, 5}) == 1.0);
  CHECK(uniformity(std::vector<double>{2, 0}) == 0.0);
  CHECK(uniformity(std::vector<double>{3, 1}) == 0.5);
  CHECK_THROWS_AS(uniformity(std::vector<double>{0, 0}), UndefinedUniformity);
  CHECK_THROWS_AS(uniformity(std::vector<double>{}), InvalidParameter);
  CHECK_THROWS_AS(uniformity(std::vector<double>{1, -1}), InvalidParameter);
}

TEST_CASE("uniformity range, constancy and scale invariance") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  std::uniform_real_distribution<double> scale(1e-6, 1e6);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> v(1 + rng() % 20);
    for (double& x : v) x = u(rng);
    const double val = uniformity(v);
    CHECK(val >= 0.0);
    CHECK(val <= 1.0);
    if (v.size() > 1) CHECK(val < 1.0);
    const double s = scale(rng);
    std::vector<double> scaled = v;
    for (double& x : scaled) x *= s;
    CHECK(std::abs(uniformity(scaled) - val) <= 1e-12);
    CHECK(uniformity(std::vector<double>(v.size(), v[0])) == 1.0);
  }
}

TEST_CASE("relative intensities divide by the target") {
  const SpotSet spots({{0, 0, 0, 2.0}, {1e-4, 0, 0, 1.0}});
  const auto r = relative_intensities(std::vector<double>{0.8, 0.2}, spots);
  CHECK(r[0] == doctest::Approx(0.2));
  CHECK(r[1] == doctest::Approx(0.2));
  CHECK(uniformity(r) == 1.0);
}

TEST_CASE("conjugate single-spot hologram scores one") {
  const Pupil p = build_pupil(64, 9.2e-6, 800e-9, 0.2, Illumination::gaussian(2e-4), 1);
  const Spot spot{-2e-4, 3e-4, 1e-4, 1};
  std::vector<double> phase(p.active_count());
  for (std::size_t s = 0; s < phase.size(); ++s)
    phase[s] = wrap_phase(spot_phase(p, spot, p.pixel(s)));
  const auto q = evaluate(p, Hologram(p, phase), SpotSet({spot}));
  CHECK(q.intensities[0] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(q.efficiency == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(q.uniformity == 1.0);
}

TEST_CASE("flat hologram dephases an off-axis spot") {
  const Pupil p = build_pupil(128, 9.2e-6, 800e-9, 0.2, Illumination::uniform(), 0);
  const Hologram flat(p, std::vector<double>(p.active_count(), 0.0));
  const auto i = spot_intensities(p, flat, SpotSet({{1.5e-3, 1.1e-3, 0, 1}}));
  CHECK(i[0] < 1e-3);
}

TEST_CASE("spot intensities match the brute-force oracle") {
  const Pupil p = build_pupil(8, 9.2e-6, 800e-9, 0.2, Illumination::gaussian(3e-5), 4);
  const SpotSet spots({{2e-4, -1e-4, 0, 1}, {-3e-4, 2e-4, 3e-4, 1}});
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-kPi, kPi);
  std::vector<double> phase(p.active_count());
  for (double& v : phase) v = u(rng);
  const auto i = spot_intensities(p, Hologram(p, phase), spots);
  for (std::size_t n = 0; n < 2; ++n)
    CHECK(std::abs(i[n] - oracle::intensity(p, phase, spots[n])) <= 1e-12L);
}

TEST_CASE("zero illumination is rejected") {
  const Pupil p = build_pupil(8, 9.2e-6, 800e-9, 0.2, Illumination::gaussian(1e-9), 0);
  const Hologram h(p, std::vector<double>(p.active_count(), 0.0));
  CHECK_THROWS_AS(spot_intensities(p, h, SpotSet({{0, 0, 0, 1}})), InvalidPupil);
}

TEST_CASE("efficiency stays bounded for well separated spots") {
  const Pupil p = build_pupil(64, 9.2e-6, 800e-9, 0.2, Illumination::uniform(), 2);
  // Diffraction unit here is 800e-9 * 0.2 / (64 * 9.2e-6) = 272 um.
  const SpotSet spots({{-6e-4, -6e-4, 0, 1}, {6e-4, -6e-4, 0, 1}, {0, 6e-4, 0, 1}});
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto q = evaluate(p, wgs(p, spots, 10, seed).hologram, spots);
    CHECK(q.efficiency >= 0.0);
    CHECK(q.efficiency <= 1.02);
  }
}
