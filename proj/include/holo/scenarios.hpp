#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "holo/optics.hpp"

namespace holo {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

// Right-handed rotation by `angle` radians about `axis` (need not be unit length).
struct Rotation {
  Vec3 axis{0.0, 0.0, 1.0};
  double angle = 0.0;

  Vec3 apply(const Vec3& v) const;
};

// Addressable focal volume: lateral half-width where the prism term reaches
// the pixel Nyquist limit, axial half-depth where the lens term does at the
// aperture edge.
struct FieldOfView {
  double lateral = 0.0;
  double axial = 0.0;

  static FieldOfView for_pupil(int side_px, double pitch, double wavelength, double focal_length);
  static FieldOfView for_pupil(const Pupil& pupil);
  static FieldOfView default_field();
};

/// rows x cols grid in the z = 0 plane, centered on the origin, then rotated
/// rigidly about the origin. Unit target intensities.
SpotSet grid_scenario(int rows, int cols, double spacing, const Rotation& rotation,
                      const FieldOfView& field = FieldOfView::default_field());

/// The 8 corners of two cubes of the given edge, rotated rigidly about the
/// centroid of all 16 spots.
SpotSet cubes_scenario(double edge, const Vec3& center1, const Vec3& center2,
                       const Rotation& rotation,
                       const FieldOfView& field = FieldOfView::default_field());

struct Scenario {
  enum class Kind { grid, cubes };

  std::string name;
  Kind kind = Kind::grid;
  int rows = 1;
  int cols = 1;
  double spacing = 300e-6;
  double edge = 600e-6;
  Vec3 center1{-1.2e-3, 0.0, 0.0};
  Vec3 center2{1.2e-3, 0.0, 0.0};
  Rotation rotation;  // base orientation
  Vec3 sweep_axis{0.0, 0.0, 1.0};
  double sweep_step = 0.0;  // radians per frame in benchmark sweeps
  std::vector<double> intensities;  // optional per-spot |a_n^0|^2 override
  FieldOfView field = FieldOfView::default_field();

  std::size_t spot_count() const;
};

/// "grid100", "grid36" or "cubes".
Scenario named_scenario(const std::string& name);
std::vector<std::string> scenario_names();

/// Spots of the scenario after its base rotation and an extra rotation about
/// the pattern centroid.
SpotSet generate(const Scenario& scenario, const Rotation& extra = {});

/// Frame k is the scenario rotated by k * step_angle about `axis` through the
/// pattern centroid. Frame 0 is the scenario as defined.
std::vector<SpotSet> rotation_sweep(const Scenario& scenario, int frames, double step_angle,
                                    const Vec3& axis);

/// `key = value` config. Keys: base, name, type (grid|cubes), rows, cols,
/// spacing_um, edge_um, center1_um, center2_um (x,y,z), rotation_axis,
/// rotation_deg, sweep_axis, sweep_step_deg, intensities (comma list).
Scenario parse_scenario_config(std::istream& in);
Scenario load_scenario_config(const std::filesystem::path& path);

}  // namespace holo
