#include "holo/scenarios.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

#include "holo/error.hpp"

namespace holo {

Vec3 Rotation::apply(const Vec3& v) const {
  const double len = std::sqrt(axis.x * axis.x + axis.y * axis.y + axis.z * axis.z);
  if (angle == 0.0) return v;
  if (!(len > 0.0)) throw InvalidParameter("rotation axis must be non-zero");
  const double kx = axis.x / len, ky = axis.y / len, kz = axis.z / len;
  const double c = std::cos(angle), s = std::sin(angle);
  const double dot = kx * v.x + ky * v.y + kz * v.z;
  // Rodrigues: v c + (k x v) s + k (k.v)(1 - c)
  const double cx = ky * v.z - kz * v.y;
  const double cy = kz * v.x - kx * v.z;
  const double cz = kx * v.y - ky * v.x;
  return {v.x * c + cx * s + kx * dot * (1.0 - c), v.y * c + cy * s + ky * dot * (1.0 - c),
          v.z * c + cz * s + kz * dot * (1.0 - c)};
}

FieldOfView FieldOfView::for_pupil(int side_px, double pitch, double wavelength,
                                   double focal_length) {
  const double aperture_radius = 0.5 * side_px * pitch;
  return {wavelength * focal_length / (2.0 * pitch),
          wavelength * focal_length * focal_length / (4.0 * aperture_radius * pitch)};
}

FieldOfView FieldOfView::for_pupil(const Pupil& pupil) {
  return for_pupil(pupil.side_px(), pupil.pitch(), pupil.wavelength(), pupil.focal_length());
}

FieldOfView FieldOfView::default_field() {
  return for_pupil(kDefaultSidePx, kDefaultPitch, kDefaultWavelength, kDefaultFocalLength);
}

namespace {

Vec3 rotate_about(const Rotation& r, const Vec3& p, const Vec3& pivot) {
  const Vec3 q = r.apply({p.x - pivot.x, p.y - pivot.y, p.z - pivot.z});
  return {q.x + pivot.x, q.y + pivot.y, q.z + pivot.z};
}

Vec3 centroid(const std::vector<Vec3>& pts) {
  Vec3 c;
  for (const auto& p : pts) {
    c.x += p.x;
    c.y += p.y;
    c.z += p.z;
  }
  const double n = static_cast<double>(pts.size());
  return {c.x / n, c.y / n, c.z / n};
}

SpotSet to_spots(const std::vector<Vec3>& pts, const FieldOfView& field,
                 const std::vector<double>& intensities) {
  if (!intensities.empty() && intensities.size() != pts.size())
    throw InvalidParameter("intensity override count does not match the scenario spot count");
  std::vector<Spot> spots;
  spots.reserve(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto& p = pts[i];
    if (std::abs(p.x) > field.lateral || std::abs(p.y) > field.lateral ||
        std::abs(p.z) > field.axial)
      throw OutOfField("scenario spot lies outside the addressable field of view");
    const double a = intensities.empty() ? 1.0 : std::sqrt(intensities[i]);
    spots.push_back({p.x, p.y, p.z, a});
  }
  return SpotSet(std::move(spots));
}

std::vector<Vec3> grid_points(int rows, int cols, double spacing) {
  if (rows < 1 || cols < 1) throw InvalidParameter("grid needs at least one row and column");
  if (!(spacing > 0.0)) throw InvalidParameter("grid spacing must be positive");
  std::vector<Vec3> pts;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c)
      pts.push_back({(c - 0.5 * (cols - 1)) * spacing, (r - 0.5 * (rows - 1)) * spacing, 0.0});
  }
  return pts;
}

std::vector<Vec3> cube_points(double edge, const Vec3& c1, const Vec3& c2) {
  if (!(edge > 0.0)) throw InvalidParameter("cube edge must be positive");
  if (c1.x == c2.x && c1.y == c2.y && c1.z == c2.z)
    throw InvalidParameter("cube centers must be distinct");
  std::vector<Vec3> pts;
  for (const Vec3& c : {c1, c2}) {
    for (int k = 0; k < 8; ++k) {
      pts.push_back({c.x + ((k & 1) ? 0.5 : -0.5) * edge, c.y + ((k & 2) ? 0.5 : -0.5) * edge,
                     c.z + ((k & 4) ? 0.5 : -0.5) * edge});
    }
  }
  return pts;
}

std::vector<Vec3> scenario_points(const Scenario& s) {
  return s.kind == Scenario::Kind::grid ? grid_points(s.rows, s.cols, s.spacing)
                                        : cube_points(s.edge, s.center1, s.center2);
}

void rotate_all(std::vector<Vec3>& pts, const Rotation& r, const Vec3& pivot) {
  for (auto& p : pts) p = rotate_about(r, p, pivot);
}

}  // namespace

SpotSet grid_scenario(int rows, int cols, double spacing, const Rotation& rotation,
                      const FieldOfView& field) {
  auto pts = grid_points(rows, cols, spacing);
  rotate_all(pts, rotation, {});
  return to_spots(pts, field, {});
}

SpotSet cubes_scenario(double edge, const Vec3& center1, const Vec3& center2,
                       const Rotation& rotation, const FieldOfView& field) {
  auto pts = cube_points(edge, center1, center2);
  rotate_all(pts, rotation, centroid(pts));
  return to_spots(pts, field, {});
}

std::size_t Scenario::spot_count() const {
  return kind == Kind::grid ? static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols) : 16;
}

Scenario named_scenario(const std::string& name) {
  Scenario s;
  s.name = name;
  if (name == "grid100" || name == "grid36") {
    s.kind = Scenario::Kind::grid;
    s.rows = s.cols = name == "grid100" ? 10 : 6;
    // Sweeps tilt the grid plane by up to 30 degrees out of focus.
    s.sweep_axis = {std::sin(15.0 * kPi / 180.0), 0.0, std::cos(15.0 * kPi / 180.0)};
    s.sweep_step = 36.0 * kPi / 180.0;
    return s;
  }
  if (name == "cubes") {
    s.kind = Scenario::Kind::cubes;
    // Oblique base orientation so no two corners share a lateral position.
    s.rotation = {{1.0, 1.0, 0.0}, 35.0 * kPi / 180.0};
    s.sweep_axis = {0.0, 0.0, 1.0};
    s.sweep_step = 36.0 * kPi / 180.0;
    return s;
  }
  throw InvalidParameter("unknown scenario '" + name + "'");
}

std::vector<std::string> scenario_names() { return {"grid100", "grid36", "cubes"}; }

SpotSet generate(const Scenario& scenario, const Rotation& extra) {
  auto pts = scenario_points(scenario);
  const Vec3 pivot = centroid(pts);
  rotate_all(pts, scenario.rotation, pivot);
  rotate_all(pts, extra, pivot);
  return to_spots(pts, scenario.field, scenario.intensities);
}

std::vector<SpotSet> rotation_sweep(const Scenario& scenario, int frames, double step_angle,
                                    const Vec3& axis) {
  if (frames < 1) throw InvalidParameter("rotation sweep needs at least one frame");
  std::vector<SpotSet> out;
  out.reserve(static_cast<std::size_t>(frames));
  for (int k = 0; k < frames; ++k) out.push_back(generate(scenario, {axis, k * step_angle}));
  return out;
}

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<double> parse_list(const std::string& value, const std::string& key) {
  std::vector<double> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const std::string t = trim(item);
      out.push_back(std::stod(t, &used));
      if (used != t.size()) throw std::invalid_argument(t);
    } catch (const std::exception&) {
      throw ParseError("scenario config: bad number in '" + key + "'");
    }
  }
  return out;
}

double parse_number(const std::string& value, const std::string& key) {
  const auto v = parse_list(value, key);
  if (v.size() != 1) throw ParseError("scenario config: '" + key + "' expects one number");
  return v[0];
}

Vec3 parse_vec(const std::string& value, const std::string& key, double scale) {
  const auto v = parse_list(value, key);
  if (v.size() != 3) throw ParseError("scenario config: '" + key + "' expects x,y,z");
  return {v[0] * scale, v[1] * scale, v[2] * scale};
}

}  // namespace

Scenario parse_scenario_config(std::istream& in) {
  std::vector<std::pair<std::string, std::string>> entries;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ParseError("scenario config line " + std::to_string(lineno) + ": expected key = value");
    entries.emplace_back(trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
  }

  Scenario s = named_scenario("grid36");
  s.name = "custom";
  for (const auto& [key, value] : entries) {
    if (key == "base") {
      s = named_scenario(value);
    }
  }
  for (const auto& [key, value] : entries) {
    if (key == "base") continue;
    if (key == "name") {
      s.name = value;
    } else if (key == "type") {
      if (value == "grid")
        s.kind = Scenario::Kind::grid;
      else if (value == "cubes")
        s.kind = Scenario::Kind::cubes;
      else
        throw ParseError("scenario config: type must be grid or cubes");
    } else if (key == "rows") {
      s.rows = static_cast<int>(parse_number(value, key));
    } else if (key == "cols") {
      s.cols = static_cast<int>(parse_number(value, key));
    } else if (key == "spacing_um") {
      s.spacing = parse_number(value, key) * 1e-6;
    } else if (key == "edge_um") {
      s.edge = parse_number(value, key) * 1e-6;
    } else if (key == "center1_um") {
      s.center1 = parse_vec(value, key, 1e-6);
    } else if (key == "center2_um") {
      s.center2 = parse_vec(value, key, 1e-6);
    } else if (key == "rotation_axis") {
      s.rotation.axis = parse_vec(value, key, 1.0);
    } else if (key == "rotation_deg") {
      s.rotation.angle = parse_number(value, key) * kPi / 180.0;
    } else if (key == "sweep_axis") {
      s.sweep_axis = parse_vec(value, key, 1.0);
    } else if (key == "sweep_step_deg") {
      s.sweep_step = parse_number(value, key) * kPi / 180.0;
    } else if (key == "intensities") {
      s.intensities = parse_list(value, key);
    } else {
      throw ParseError("scenario config: unknown key '" + key + "'");
    }
  }
  return s;
}

Scenario load_scenario_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open scenario config " + path.string());
  return parse_scenario_config(in);
}

}  // namespace holo
