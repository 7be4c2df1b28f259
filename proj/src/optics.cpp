#include "holo/optics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <sstream>
#include <string>

#include "holo/error.hpp"
#include "holo/rng.hpp"

namespace holo {

double wrap_phase(double phase) {
  double w = phase - kTwoPi * std::floor((phase + kPi) / kTwoPi);
  // Rounding can land exactly on the open end of the interval.
  if (w >= kPi) w -= kTwoPi;
  if (w < -kPi) w = -kPi;
  return w;
}

bool Pupil::in_aperture(int col, int row) const { return storage_index(col, row) >= 0; }

std::int64_t Pupil::storage_index(int col, int row) const {
  if (col < 0 || row < 0 || col >= side_px_ || row >= side_px_) return -1;
  return inverse_[static_cast<std::size_t>(row) * side_px_ + col];
}

double Pupil::amplitude_at(int col, int row) const {
  const auto s = storage_index(col, row);
  return s < 0 ? 0.0 : amplitude_[static_cast<std::size_t>(s)];
}

Pupil build_pupil(int side_px, double pitch, double wavelength, double focal_length,
                  Illumination illumination, std::uint64_t seed) {
  if (side_px < 2) throw InvalidParameter("pupil side must be at least 2 pixels");
  if (!(pitch > 0.0) || !(wavelength > 0.0) || !(focal_length > 0.0))
    throw InvalidParameter("pitch, wavelength and focal length must be positive");
  if (illumination.kind == Illumination::Kind::gaussian && !(illumination.waist > 0.0))
    throw InvalidParameter("gaussian waist must be positive");
  if (!std::isfinite(pitch) || !std::isfinite(wavelength) || !std::isfinite(focal_length))
    throw InvalidParameter("physical parameters must be finite");

  Pupil p;
  p.side_px_ = side_px;
  p.pitch_ = pitch;
  p.wavelength_ = wavelength;
  p.focal_length_ = focal_length;
  p.illumination_ = illumination;
  p.seed_ = seed;

  const double center = 0.5 * (side_px - 1);
  const double radius = 0.5 * side_px;
  p.coords_.resize(static_cast<std::size_t>(side_px));
  for (int i = 0; i < side_px; ++i) p.coords_[static_cast<std::size_t>(i)] = (i - center) * pitch;

  std::vector<std::uint32_t> raster;
  for (int row = 0; row < side_px; ++row) {
    for (int col = 0; col < side_px; ++col) {
      const double dx = col - center;
      const double dy = row - center;
      if (dx * dx + dy * dy <= radius * radius)
        raster.push_back(static_cast<std::uint32_t>(row * side_px + col));
    }
  }

  std::mt19937_64 rng(seed);
  for (std::size_t i = raster.size(); i > 1; --i) {
    const auto j = detail::uniform_index(rng, i);
    std::swap(raster[i - 1], raster[j]);
  }

  const std::size_t m = raster.size();
  p.cols_.resize(m);
  p.rows_.resize(m);
  p.amplitude_.resize(m);
  p.inverse_.assign(static_cast<std::size_t>(side_px) * side_px, -1);
  for (std::size_t s = 0; s < m; ++s) {
    const auto lin = raster[s];
    const auto col = lin % static_cast<std::uint32_t>(side_px);
    const auto row = lin / static_cast<std::uint32_t>(side_px);
    p.cols_[s] = col;
    p.rows_[s] = row;
    p.inverse_[lin] = static_cast<std::int64_t>(s);
    double a = 1.0;
    if (illumination.kind == Illumination::Kind::gaussian) {
      const double x = p.coords_[col];
      const double y = p.coords_[row];
      a = std::exp(-(x * x + y * y) / (illumination.waist * illumination.waist));
    }
    p.amplitude_[s] = a;
  }
  p.amplitude_sum_ = std::accumulate(p.amplitude_.begin(), p.amplitude_.end(), 0.0);
  return p;
}

Pupil build_pupil(const PupilParams& params) {
  return build_pupil(params.side_px, params.pitch, params.wavelength, params.focal_length,
                     params.illumination, params.seed);
}

SpotSet::SpotSet(std::vector<Spot> spots) : spots_(std::move(spots)) {
  if (spots_.empty()) throw InvalidParameter("spot set must contain at least one spot");
  for (const auto& s : spots_) {
    if (!std::isfinite(s.x) || !std::isfinite(s.y) || !std::isfinite(s.z))
      throw InvalidParameter("spot coordinates must be finite");
    if (!(s.amplitude > 0.0) || !std::isfinite(s.amplitude))
      throw InvalidParameter("spot target amplitudes must be positive");
  }
}

double spot_phase(double wavelength, double focal_length, const Spot& spot, double xp,
                  double yp) {
  const double prism = kTwoPi / (wavelength * focal_length) * (spot.x * xp + spot.y * yp);
  const double lens =
      kTwoPi / (wavelength * focal_length * focal_length) * (xp * xp + yp * yp) * spot.z;
  return prism + lens;
}

double spot_phase(const Pupil& pupil, const Spot& spot, PixelCoord pixel) {
  return spot_phase(pupil.wavelength(), pupil.focal_length(), spot, pupil.coordinate(pixel.col),
                    pupil.coordinate(pixel.row));
}

namespace {

void check_phase_range(std::span<const double> phase) {
  for (double v : phase) {
    if (!(v >= -kPi && v < kPi)) throw InvalidParameter("hologram phase outside [-pi, pi)");
  }
}

}  // namespace

Hologram::Hologram(const Pupil& pupil, std::vector<double> phase)
    : Hologram(pupil.geometry(), std::move(phase)) {}

Hologram::Hologram(GeometryKey geometry, std::vector<double> phase)
    : geometry_(geometry), phase_(std::move(phase)) {
  if (phase_.size() != geometry_.active_count)
    throw GeometryMismatch("hologram length does not match the pupil's active pixel count");
  check_phase_range(phase_);
}

void Hologram::require_matches(const Pupil& pupil) const {
  if (!(geometry_ == pupil.geometry()))
    throw GeometryMismatch("hologram was computed for a different pupil geometry");
}

std::size_t compressed_size(std::size_t active_count, double ratio) {
  if (!(ratio > 0.0 && ratio <= 1.0))
    throw InvalidParameter("compression ratio must lie in (0, 1]");
  const auto n = static_cast<std::size_t>(std::ceil(ratio * static_cast<double>(active_count)));
  return std::clamp<std::size_t>(n, 1, active_count);
}

CompressionPlan make_compression_plan(const Pupil& pupil, double ratio) {
  return {ratio, compressed_size(pupil.active_count(), ratio), pupil.seed()};
}

SpotSet parse_spot_list(std::istream& in) {
  std::vector<Spot> spots;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    double x_um, y_um, z_um, intensity;
    if (!(ls >> x_um >> y_um >> z_um >> intensity))
      throw ParseError("spot list line " + std::to_string(lineno) +
                       ": expected `x_um y_um z_um relative_intensity`");
    std::string rest;
    if (ls >> rest)
      throw ParseError("spot list line " + std::to_string(lineno) + ": trailing data");
    if (!(intensity > 0.0))
      throw ParseError("spot list line " + std::to_string(lineno) + ": intensity must be > 0");
    spots.push_back({x_um * 1e-6, y_um * 1e-6, z_um * 1e-6, std::sqrt(intensity)});
  }
  if (spots.empty()) throw ParseError("spot list contains no spots");
  return SpotSet(std::move(spots));
}

SpotSet load_spot_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open spot list " + path.string());
  return parse_spot_list(in);
}

}  // namespace holo
