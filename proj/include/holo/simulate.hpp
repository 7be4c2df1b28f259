#pragma once

#include <vector>

#include "holo/exec.hpp"
#include "holo/optics.hpp"

namespace holo {

enum class Exposure { linear, two_photon };

// Rectangular probe window in a focal plane, meters.
struct Window {
  double center_x = 0.0;
  double center_y = 0.0;
  double width = 0.0;
  double height = 0.0;
};

struct FieldImage {
  int width = 0;
  int height = 0;
  Window window;
  double z = 0.0;
  Exposure exposure = Exposure::linear;
  std::vector<double> intensity;  // row-major, row 0 at the lowest y

  double at(int col, int row) const {
    return intensity[static_cast<std::size_t>(row) * width + col];
  }
  // Physical probe position of an image pixel center.
  double probe_x(int col) const;
  double probe_y(int row) const;
};

/// Focal-plane intensity at a width x height grid of probe points. Each probe
/// is treated as a unit spot and evaluated with forward_project, normalized
/// like spot_intensities; two-photon exposure squares the result.
FieldImage render_plane(const Pupil& pupil, const Hologram& hologram, const Window& window,
                        double z, int width, int height, Exposure exposure = Exposure::linear,
                        const ExecPolicy& exec = {});

}  // namespace holo
