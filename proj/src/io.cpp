#include "holo/io.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

#include "holo/error.hpp"

namespace holo {

PhaseLut::PhaseLut() {
  for (int g = 0; g < 256; ++g) phases_[static_cast<std::size_t>(g)] = -kPi + kTwoPi * g / 256.0;
}

PhaseLut::PhaseLut(const std::array<double, 256>& phases) : phases_(phases), linear_(false) {
  for (double p : phases_) {
    if (!std::isfinite(p)) throw InvalidParameter("LUT phases must be finite");
  }
}

PhaseLut PhaseLut::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open LUT file " + path.string());
  std::array<double, 256> phases{};
  std::size_t count = 0;
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    double v;
    if (!(ls >> v)) throw ParseError("LUT file: bad value '" + line + "'");
    if (count == 256) throw ParseError("LUT file has more than 256 entries");
    phases[count++] = v;
  }
  if (count != 256) throw ParseError("LUT file must contain exactly 256 entries");
  return PhaseLut(phases);
}

std::uint8_t PhaseLut::gray(double phase) const {
  const double p = wrap_phase(phase);
  if (linear_) {
    const auto g = static_cast<long>(std::lround((p + kPi) * 256.0 / kTwoPi));
    return static_cast<std::uint8_t>(g & 255);
  }
  std::size_t best = 0;
  double best_d = INFINITY;
  for (std::size_t g = 0; g < 256; ++g) {
    const double d = std::abs(wrap_phase(phases_[g] - p));
    if (d < best_d) {
      best_d = d;
      best = g;
    }
  }
  return static_cast<std::uint8_t>(best);
}

namespace {

void put_u32(std::ostream& out, std::uint32_t v) {
  const unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                              static_cast<unsigned char>(v >> 16),
                              static_cast<unsigned char>(v >> 24)};
  out.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t get_u32(const unsigned char* b) {
  return static_cast<std::uint32_t>(b[0]) | static_cast<std::uint32_t>(b[1]) << 8 |
         static_cast<std::uint32_t>(b[2]) << 16 | static_cast<std::uint32_t>(b[3]) << 24;
}

void put_u64(std::ostream& out, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 8);
}

std::uint64_t get_u64(const unsigned char* b) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

std::vector<unsigned char> slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_header(std::ostream& out, const char* magic, std::uint32_t w, std::uint32_t h) {
  out.write(magic, 4);
  put_u32(out, w);
  put_u32(out, h);
  put_u32(out, 0);
}

struct RawHeader {
  std::uint32_t width = 0;
  std::uint32_t height = 0;
};

RawHeader check_header(const std::vector<unsigned char>& bytes, const char* magic,
                       std::size_t sample_size, const std::filesystem::path& path) {
  if (bytes.size() < 16 || std::memcmp(bytes.data(), magic, 4) != 0)
    throw ParseError(path.string() + ": missing " + std::string(magic, 4) + " header");
  RawHeader h{get_u32(&bytes[4]), get_u32(&bytes[8])};
  const std::size_t expect = 16 + static_cast<std::size_t>(h.width) * h.height * sample_size;
  if (bytes.size() != expect) throw ParseError(path.string() + ": payload size mismatch");
  return h;
}

}  // namespace

void write_pgm(const std::filesystem::path& path, const GrayImage& image,
               const std::vector<std::string>& comments) {
  if (image.width < 1 || image.height < 1 ||
      image.pixels.size() != static_cast<std::size_t>(image.width) * image.height)
    throw InvalidParameter("gray image dimensions do not match its pixel buffer");
  auto out = open_out(path);
  out << "P5\n";
  for (const auto& c : comments) out << "# " << c << "\n";
  out << image.width << " " << image.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(image.pixels.data()),
            static_cast<std::streamsize>(image.pixels.size()));
  if (!out) throw IoError("failed writing " + path.string());
}

GrayImage read_pgm(const std::filesystem::path& path) {
  const auto bytes = slurp(path);
  std::size_t pos = 0;
  auto skip_space = [&] {
    while (pos < bytes.size()) {
      if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (std::isspace(bytes[pos])) {
        ++pos;
      } else {
        break;
      }
    }
  };
  auto read_int = [&] {
    skip_space();
    long v = 0;
    const std::size_t start = pos;
    while (pos < bytes.size() && std::isdigit(bytes[pos])) v = v * 10 + (bytes[pos++] - '0');
    if (pos == start || v > 1'000'000) throw ParseError(path.string() + ": bad PGM header");
    return static_cast<int>(v);
  };
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5')
    throw ParseError(path.string() + ": not a binary (P5) PGM");
  pos = 2;
  GrayImage img;
  img.width = read_int();
  img.height = read_int();
  const int maxval = read_int();
  if (img.width < 1 || img.height < 1 || maxval < 1 || maxval > 255)
    throw ParseError(path.string() + ": unsupported PGM dimensions or maxval");
  if (pos >= bytes.size() || !std::isspace(bytes[pos]))
    throw ParseError(path.string() + ": bad PGM header");
  ++pos;
  const std::size_t n = static_cast<std::size_t>(img.width) * img.height;
  if (bytes.size() - pos != n) throw ParseError(path.string() + ": PGM payload size mismatch");
  img.pixels.assign(bytes.begin() + static_cast<std::ptrdiff_t>(pos), bytes.end());
  return img;
}

GrayImage hologram_to_gray(const Pupil& pupil, const Hologram& hologram, const PhaseLut& lut) {
  hologram.require_matches(pupil);
  GrayImage img;
  img.width = img.height = pupil.side_px();
  img.pixels.assign(static_cast<std::size_t>(img.width) * img.height, 0);
  const auto phase = hologram.phase();
  for (std::size_t s = 0; s < phase.size(); ++s) {
    const PixelCoord px = pupil.pixel(s);
    img.pixels[static_cast<std::size_t>(px.row) * img.width + px.col] = lut.gray(phase[s]);
  }
  return img;
}

Hologram hologram_from_gray(const Pupil& pupil, const GrayImage& image, const PhaseLut& lut) {
  if (image.width != pupil.side_px() || image.height != pupil.side_px())
    throw GeometryMismatch("hologram image size does not match the pupil side");
  std::vector<double> phase(pupil.active_count());
  for (std::size_t s = 0; s < phase.size(); ++s) {
    const PixelCoord px = pupil.pixel(s);
    phase[s] = wrap_phase(lut.phase(image.pixels[static_cast<std::size_t>(px.row) * image.width + px.col]));
  }
  return Hologram(pupil, std::move(phase));
}

void write_hologram_pgm(const std::filesystem::path& path, const Pupil& pupil,
                        const Hologram& hologram, const PhaseLut& lut) {
  write_pgm(path, hologram_to_gray(pupil, hologram, lut),
            {lut.is_linear() ? "phase = -pi + 2 pi g / 256" : "phase per custom LUT"});
}

Hologram read_hologram_pgm(const std::filesystem::path& path, const Pupil& pupil,
                           const PhaseLut& lut) {
  return hologram_from_gray(pupil, read_pgm(path), lut);
}

void write_hologram_raw(const std::filesystem::path& path, const Pupil& pupil,
                        const Hologram& hologram) {
  hologram.require_matches(pupil);
  const auto side = static_cast<std::size_t>(pupil.side_px());
  std::vector<double> grid(side * side, 0.0);
  const auto phase = hologram.phase();
  for (std::size_t s = 0; s < phase.size(); ++s) {
    const PixelCoord px = pupil.pixel(s);
    grid[static_cast<std::size_t>(px.row) * side + px.col] = phase[s];
  }
  auto out = open_out(path);
  write_header(out, "HPHS", static_cast<std::uint32_t>(side), static_cast<std::uint32_t>(side));
  for (double v : grid) put_u64(out, std::bit_cast<std::uint64_t>(v));
  if (!out) throw IoError("failed writing " + path.string());
}

Hologram read_hologram_raw(const std::filesystem::path& path, const Pupil& pupil) {
  const auto bytes = slurp(path);
  const RawHeader h = check_header(bytes, "HPHS", 8, path);
  if (h.width != static_cast<std::uint32_t>(pupil.side_px()) || h.height != h.width)
    throw GeometryMismatch(path.string() + ": phase dump size does not match the pupil side");
  std::vector<double> phase(pupil.active_count());
  for (std::size_t s = 0; s < phase.size(); ++s) {
    const PixelCoord px = pupil.pixel(s);
    const std::size_t at = 16 + 8 * (static_cast<std::size_t>(px.row) * h.width + px.col);
    phase[s] = std::bit_cast<double>(get_u64(&bytes[at]));
  }
  return Hologram(pupil, std::move(phase));
}

GrayImage field_to_gray(const FieldImage& image) {
  double peak = 0.0;
  for (double v : image.intensity) peak = std::max(peak, v);
  GrayImage img;
  img.width = image.width;
  img.height = image.height;
  img.pixels.resize(image.intensity.size());
  for (std::size_t i = 0; i < image.intensity.size(); ++i) {
    const double g = peak > 0.0 ? 255.0 * image.intensity[i] / peak : 0.0;
    img.pixels[i] = static_cast<std::uint8_t>(std::lround(std::clamp(g, 0.0, 255.0)));
  }
  return img;
}

void write_field_pgm(const std::filesystem::path& path, const FieldImage& image) {
  double peak = 0.0;
  for (double v : image.intensity) peak = std::max(peak, v);
  std::ostringstream note;
  note.precision(9);
  note << "linear gray map: 0 -> 0, 255 -> " << peak << " (per-image max), "
       << (image.exposure == Exposure::two_photon ? "two-photon" : "linear") << " exposure";
  write_pgm(path, field_to_gray(image), {note.str()});
}

void write_field_raw(const std::filesystem::path& path, const FieldImage& image) {
  auto out = open_out(path);
  write_header(out, "HFIM", static_cast<std::uint32_t>(image.width),
               static_cast<std::uint32_t>(image.height));
  for (double v : image.intensity) put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
  if (!out) throw IoError("failed writing " + path.string());
}

RawFieldDump read_field_raw(const std::filesystem::path& path) {
  const auto bytes = slurp(path);
  const RawHeader h = check_header(bytes, "HFIM", 4, path);
  RawFieldDump d;
  d.width = static_cast<int>(h.width);
  d.height = static_cast<int>(h.height);
  d.values.resize(static_cast<std::size_t>(h.width) * h.height);
  for (std::size_t i = 0; i < d.values.size(); ++i)
    d.values[i] = std::bit_cast<float>(get_u32(&bytes[16 + 4 * i]));
  return d;
}

}  // namespace holo
