#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "holo/optics.hpp"
#include "holo/simulate.hpp"

namespace holo {

/// 256-level phase/gray lookup. The default is linear, phase(g) = -pi + 2 pi g / 256.
class PhaseLut {
 public:
  PhaseLut();
  explicit PhaseLut(const std::array<double, 256>& phases);

  static PhaseLut linear() { return PhaseLut(); }
  // One float per line, 256 lines; `#` comments allowed.
  static PhaseLut load(const std::filesystem::path& path);

  double phase(std::uint8_t gray) const { return phases_[gray]; }
  // Gray level whose phase is circularly nearest to `phase`.
  std::uint8_t gray(double phase) const;
  bool is_linear() const { return linear_; }

 private:
  std::array<double, 256> phases_{};
  bool linear_ = true;
};

struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;  // row-major
};

// Binary P5 graymap, maxval 255. Each comment string becomes one `#` line.
void write_pgm(const std::filesystem::path& path, const GrayImage& image,
               const std::vector<std::string>& comments = {});
GrayImage read_pgm(const std::filesystem::path& path);

/// Square side_px x side_px hologram image; pixels outside the aperture are gray 0.
GrayImage hologram_to_gray(const Pupil& pupil, const Hologram& hologram, const PhaseLut& lut);
Hologram hologram_from_gray(const Pupil& pupil, const GrayImage& image, const PhaseLut& lut);

void write_hologram_pgm(const std::filesystem::path& path, const Pupil& pupil,
                        const Hologram& hologram, const PhaseLut& lut);
Hologram read_hologram_pgm(const std::filesystem::path& path, const Pupil& pupil,
                           const PhaseLut& lut);

// Raw dumps share a 16-byte little-endian header: 4-byte magic, u32 width,
// u32 height, u32 reserved (0). "HFIM" carries float32 intensities, "HPHS"
// carries float64 phases (0 outside the aperture), both row-major.
void write_hologram_raw(const std::filesystem::path& path, const Pupil& pupil,
                        const Hologram& hologram);
Hologram read_hologram_raw(const std::filesystem::path& path, const Pupil& pupil);

/// Linear map of [0, image max] onto gray 0..255; the max is recorded in a
/// header comment.
void write_field_pgm(const std::filesystem::path& path, const FieldImage& image);
GrayImage field_to_gray(const FieldImage& image);
void write_field_raw(const std::filesystem::path& path, const FieldImage& image);

struct RawFieldDump {
  int width = 0;
  int height = 0;
  std::vector<float> values;
};
RawFieldDump read_field_raw(const std::filesystem::path& path);

}  // namespace holo
