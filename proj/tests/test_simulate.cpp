#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "holo/error.hpp"
#include "holo/metrics.hpp"
#include "holo/simulate.hpp"
#include "holo/solvers.hpp"
#include "oracle.hpp"

using namespace holo;

namespace {

Hologram conjugate(const Pupil& p, const Spot& spot) {
  std::vector<double> phase(p.active_count());
  for (std::size_t s = 0; s < phase.size(); ++s)
    phase[s] = wrap_phase(spot_phase(p, spot, p.pixel(s)));
  return Hologram(p, phase);
}

std::size_t argmax(const FieldImage& img) {
  return static_cast<std::size_t>(
      std::max_element(img.intensity.begin(), img.intensity.end()) - img.intensity.begin());
}

}  // namespace

TEST_CASE("single spot peaks at its own position") {
  const Pupil p = build_pupil(64, 9.2e-6, 800e-9, 0.2, Illumination::uniform(), 1);
  const Spot spot{4e-4, -3e-4, 0, 1};
  const Hologram h = conjugate(p, spot);
  // 21 x 21 probes centered on the spot, so the middle probe sits on it.
  const FieldImage img = render_plane(p, h, {spot.x, spot.y, 1e-3, 1e-3}, 0.0, 21, 21);
  CHECK(argmax(img) == 10u * 21u + 10u);
  CHECK(img.probe_x(10) == doctest::Approx(spot.x));
  CHECK(img.probe_y(10) == doctest::Approx(spot.y));
  CHECK(img.at(10, 10) == doctest::Approx(1.0).epsilon(1e-9));
  for (double v : img.intensity) CHECK(v >= 0.0);
}

TEST_CASE("defocus lowers the peak") {
  const Pupil p = build_pupil(64, 9.2e-6, 800e-9, 0.2, Illumination::uniform(), 1);
  const Spot spot{2e-4, 1e-4, 0, 1};
  const Hologram h = conjugate(p, spot);
  const Window w{spot.x, spot.y, 1e-3, 1e-3};
  const FieldImage focus = render_plane(p, h, w, 0.0, 15, 15);
  // Depth of focus of this small aperture is about lambda (f / r)^2 = 0.38 m.
  const FieldImage blur = render_plane(p, h, w, 1.5, 15, 15);
  CHECK(*std::max_element(blur.intensity.begin(), blur.intensity.end()) <
        *std::max_element(focus.intensity.begin(), focus.intensity.end()));
}

TEST_CASE("render matches the brute-force oracle") {
  const Pupil p = build_pupil(8, 9.2e-6, 800e-9, 0.2, Illumination::gaussian(3e-5), 3);
  std::mt19937_64 rng(44);
  std::uniform_real_distribution<double> u(-kPi, kPi);
  std::vector<double> phase(p.active_count());
  for (double& v : phase) v = u(rng);
  const Hologram h(p, phase);
  const FieldImage img = render_plane(p, h, {1e-4, -2e-4, 4e-3, 3e-3}, 2e-3, 16, 16);
  for (int row = 0; row < 16; ++row) {
    for (int col = 0; col < 16; ++col) {
      const long double ref =
          oracle::intensity(p, phase, {img.probe_x(col), img.probe_y(row), 2e-3, 1});
      CHECK(std::abs(img.at(col, row) - ref) <= 1e-12L);
    }
  }
}

TEST_CASE("probe at a spot reproduces its metric intensity") {
  const Pupil p = build_pupil(48, 9.2e-6, 800e-9, 0.2, Illumination::uniform(), 2);
  const SpotSet spots({{3e-4, 1e-4, 0, 1}, {-2e-4, -2e-4, 0, 1}});
  const Hologram h = wgs(p, spots, 4, 1).hologram;
  const auto i = spot_intensities(p, h, spots);
  for (std::size_t n = 0; n < 2; ++n) {
    const FieldImage img = render_plane(p, h, {spots[n].x, spots[n].y, 0, 0}, 0.0, 1, 1);
    CHECK(std::abs(img.at(0, 0) - i[n]) <= 1e-12 * std::max(1.0, i[n]));
  }
}

TEST_CASE("two-photon exposure squares the linear image") {
  const Pupil p = build_pupil(32, 9.2e-6, 800e-9, 0.2, Illumination::uniform(), 2);
  const Hologram h = conjugate(p, {1e-4, 1e-4, 0, 1});
  const Window w{0, 0, 2e-3, 2e-3};
  const FieldImage lin = render_plane(p, h, w, 0.0, 12, 9);
  const FieldImage two = render_plane(p, h, w, 0.0, 12, 9, Exposure::two_photon);
  CHECK(two.width == 12);
  CHECK(two.height == 9);
  for (std::size_t k = 0; k < lin.intensity.size(); ++k)
    CHECK(two.intensity[k] == lin.intensity[k] * lin.intensity[k]);
}

TEST_CASE("render argument checks") {
  const Pupil p = build_pupil(16, 9.2e-6, 800e-9, 0.2, Illumination::uniform(), 2);
  const Hologram h(p, std::vector<double>(p.active_count(), 0.0));
  CHECK_THROWS_AS(render_plane(p, h, {0, 0, 1e-3, 1e-3}, 0.0, 0, 4), InvalidParameter);
  CHECK_THROWS_AS(render_plane(p, h, {0, 0, 1.0, 1e-3}, 0.0, 4, 4), OutOfField);
  CHECK_THROWS_AS(render_plane(p, h, {0, 0, 1e-3, 1e-3}, 100.0, 4, 4), OutOfField);
  const Pupil q = build_pupil(16, 9.2e-6, 800e-9, 0.2, Illumination::uniform(), 3);
  CHECK_THROWS_AS(render_plane(q, h, {0, 0, 1e-3, 1e-3}, 0.0, 4, 4), GeometryMismatch);
}
