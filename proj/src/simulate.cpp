#include "holo/simulate.hpp"

#include <cmath>
#include <complex>

#include "holo/error.hpp"
#include "holo/kernels.hpp"
#include "holo/scenarios.hpp"

namespace holo {

double FieldImage::probe_x(int col) const {
  return window.center_x + (col - 0.5 * (width - 1)) * (window.width / width);
}

double FieldImage::probe_y(int row) const {
  return window.center_y + (row - 0.5 * (height - 1)) * (window.height / height);
}

FieldImage render_plane(const Pupil& pupil, const Hologram& hologram, const Window& window,
                        double z, int width, int height, Exposure exposure,
                        const ExecPolicy& exec) {
  hologram.require_matches(pupil);
  if (width < 1 || height < 1) throw InvalidParameter("image resolution must be at least 1x1");
  if (!(window.width >= 0.0) || !(window.height >= 0.0))
    throw InvalidParameter("window extent must be non-negative");
  const FieldOfView field = FieldOfView::for_pupil(pupil);
  if (std::abs(window.center_x) + 0.5 * window.width > field.lateral ||
      std::abs(window.center_y) + 0.5 * window.height > field.lateral ||
      std::abs(z) > field.axial)
    throw OutOfField("render window extends beyond the addressable field");
  const double total = pupil.amplitude_sum();
  if (!(total > 0.0)) throw InvalidPupil("pupil illumination sums to zero");

  FieldImage img;
  img.width = width;
  img.height = height;
  img.window = window;
  img.z = z;
  img.exposure = exposure;
  img.intensity.resize(static_cast<std::size_t>(width) * height);

  const double norm = total * total;
  for (int row = 0; row < height; ++row) {
    std::vector<Spot> probes;
    probes.reserve(static_cast<std::size_t>(width));
    for (int col = 0; col < width; ++col) probes.push_back({img.probe_x(col), img.probe_y(row), z, 1.0});
    const SpotFields fields =
        forward_project(pupil, hologram, SpotSet(std::move(probes)), pupil.full_range(), exec);
    for (int col = 0; col < width; ++col) {
      double v = std::norm(fields[static_cast<std::size_t>(col)]) / norm;
      if (exposure == Exposure::two_photon) v *= v;
      img.intensity[static_cast<std::size_t>(row) * width + col] = v;
    }
  }
  return img;
}

}  // namespace holo
