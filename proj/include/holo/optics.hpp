#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <numbers>
#include <span>
#include <vector>

#include "holo/exec.hpp"

namespace holo {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Bench-top defaults: 1152 px round aperture, 9.2 um pitch, 800 nm, 6 mm waist.
inline constexpr int kDefaultSidePx = 1152;
inline constexpr double kDefaultPitch = 9.2e-6;
inline constexpr double kDefaultWavelength = 800e-9;
inline constexpr double kDefaultFocalLength = 0.2;
inline constexpr double kDefaultWaist = 6e-3;

/// Wraps any real phase into [-pi, pi).
double wrap_phase(double phase);

struct Illumination {
  enum class Kind { uniform, gaussian };

  Kind kind = Kind::uniform;
  double waist = 0.0;  // meters, gaussian only

  static Illumination uniform() { return {}; }
  static Illumination gaussian(double waist) { return {Kind::gaussian, waist}; }
};

struct PixelCoord {
  int col = 0;
  int row = 0;
};

// Identifies the storage layout a hologram was computed for.
struct GeometryKey {
  int side_px = 0;
  std::size_t active_count = 0;
  std::uint64_t seed = 0;

  bool operator==(const GeometryKey&) const = default;
};

/// SLM pixel grid with a circular aperture and a fixed random storage order.
///
/// Storage index s in [0, M) enumerates the in-aperture pixels in a random
/// order drawn once from the seed; every per-pixel array in the engine
/// (hologram phase, illumination) uses this order. A prefix of the storage
/// order is therefore a uniformly random pixel subset.
class Pupil {
 public:
  int side_px() const { return side_px_; }
  double pitch() const { return pitch_; }
  double wavelength() const { return wavelength_; }
  double focal_length() const { return focal_length_; }
  const Illumination& illumination() const { return illumination_; }
  std::uint64_t seed() const { return seed_; }
  std::size_t active_count() const { return cols_.size(); }
  GeometryKey geometry() const { return {side_px_, active_count(), seed_}; }
  PixelRange full_range() const { return {0, active_count()}; }

  bool in_aperture(int col, int row) const;
  // Physical offset of pixel-center index i from the aperture center, meters.
  double coordinate(int i) const { return coords_[static_cast<std::size_t>(i)]; }
  std::span<const double> coordinates() const { return coords_; }

  PixelCoord pixel(std::size_t storage) const {
    return {static_cast<int>(cols_[storage]), static_cast<int>(rows_[storage])};
  }
  std::span<const std::uint32_t> cols() const { return cols_; }
  std::span<const std::uint32_t> rows() const { return rows_; }
  // Storage index of a grid pixel, or -1 outside the aperture.
  std::int64_t storage_index(int col, int row) const;

  // Illumination amplitude A in storage order.
  std::span<const double> amplitudes() const { return amplitude_; }
  double amplitude_at(int col, int row) const;
  double amplitude_sum() const { return amplitude_sum_; }

 private:
  friend Pupil build_pupil(int, double, double, double, Illumination, std::uint64_t);

  int side_px_ = 0;
  double pitch_ = 0.0;
  double wavelength_ = 0.0;
  double focal_length_ = 0.0;
  Illumination illumination_;
  std::uint64_t seed_ = 0;
  std::vector<double> coords_;
  std::vector<std::uint32_t> cols_;
  std::vector<std::uint32_t> rows_;
  std::vector<std::int64_t> inverse_;
  std::vector<double> amplitude_;
  double amplitude_sum_ = 0.0;
};

/// Builds the pupil. Throws InvalidParameter for side_px < 2 or any
/// non-positive physical parameter.
Pupil build_pupil(int side_px, double pitch, double wavelength, double focal_length,
                  Illumination illumination, std::uint64_t seed);

struct PupilParams {
  int side_px = kDefaultSidePx;
  double pitch = kDefaultPitch;
  double wavelength = kDefaultWavelength;
  double focal_length = kDefaultFocalLength;
  Illumination illumination = Illumination::gaussian(kDefaultWaist);
  std::uint64_t seed = 0;
};

Pupil build_pupil(const PupilParams& params);

struct Spot {
  double x = 0.0;  // meters
  double y = 0.0;
  double z = 0.0;
  double amplitude = 1.0;  // target amplitude a_n^0
};

class SpotSet {
 public:
  explicit SpotSet(std::vector<Spot> spots);

  std::size_t size() const { return spots_.size(); }
  const Spot& operator[](std::size_t n) const { return spots_[n]; }
  std::span<const Spot> spots() const { return spots_; }
  auto begin() const { return spots_.begin(); }
  auto end() const { return spots_.end(); }

 private:
  std::vector<Spot> spots_;
};

/// Prism plus lens phase of one spot at a physical pupil position (x', y').
/// Not wrapped.
double spot_phase(double wavelength, double focal_length, const Spot& spot, double xp,
                  double yp);
double spot_phase(const Pupil& pupil, const Spot& spot, PixelCoord pixel);

/// Per-pixel phase in storage order, each value in [-pi, pi).
class Hologram {
 public:
  Hologram(const Pupil& pupil, std::vector<double> phase);
  Hologram(GeometryKey geometry, std::vector<double> phase);

  const GeometryKey& geometry() const { return geometry_; }
  std::span<const double> phase() const { return phase_; }
  std::size_t size() const { return phase_.size(); }
  void require_matches(const Pupil& pupil) const;

 private:
  GeometryKey geometry_;
  std::vector<double> phase_;
};

struct CompressionPlan {
  double ratio = 1.0;
  std::size_t subset_size = 0;
  std::uint64_t seed = 0;

  PixelRange range() const { return {0, subset_size}; }
};

/// Subset of ceil(c * M) pixels (at least one), taken as a storage-order prefix.
CompressionPlan make_compression_plan(const Pupil& pupil, double ratio);
std::size_t compressed_size(std::size_t active_count, double ratio);

/// Spot list text: `x_um y_um z_um relative_intensity` per line, `#` comments.
SpotSet parse_spot_list(std::istream& in);
SpotSet load_spot_list(const std::filesystem::path& path);

}  // namespace holo
