#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <regex>
#include <set>
#include <sstream>

#include "holo/cli.hpp"
#include "holo/io.hpp"
#include "holo/optics.hpp"
#include "holo/scenarios.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "holo");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Run r;
  r.code = holo::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("holo_cli_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const char* name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Report line without the wall time.
std::string report_core(const std::string& line) {
  return line.substr(0, line.find(" wall_ms="));
}

long field_of(const std::string& line, const std::string& key) {
  std::smatch m;
  REQUIRE(std::regex_search(line, m, std::regex(key + "=([-0-9.e+]+)")));
  return std::lround(std::stod(m[1]));
}

double value_of(const std::string& line, const std::string& key) {
  std::smatch m;
  REQUIRE(std::regex_search(line, m, std::regex(key + "=([-0-9.e+]+)")));
  return std::stod(m[1]);
}

}  // namespace

TEST_CASE("solve is deterministic and worker-count independent") {
  TempDir tmp;
  const std::vector<std::string> base{"solve", "--scenario", "grid36", "--alg", "cswgs", "--c",
                                      "0.0625", "--iters", "10", "--seed", "7", "--side", "96"};
  auto a_args = base, b_args = base;
  a_args.insert(a_args.end(), {"--out", tmp / "a.pgm", "--raw", tmp / "a.raw"});
  b_args.insert(b_args.end(), {"--out", tmp / "b.pgm", "--raw", tmp / "b.raw", "--threads", "4"});
  const Run a = run(a_args), b = run(b_args);
  REQUIRE(a.code == 0);
  REQUIRE(b.code == 0);
  CHECK(std::regex_search(a.out, std::regex(R"(^e=\S+ u=\S+ ops=\d+ iters=10 wall_ms=\S+\n$)")));
  CHECK(report_core(a.out) == report_core(b.out));
  CHECK(slurp(tmp / "a.pgm") == slurp(tmp / "b.pgm"));
  CHECK(slurp(tmp / "a.raw") == slurp(tmp / "b.raw"));
  CHECK(slurp(tmp / "a.pgm").rfind("P5\n", 0) == 0);
}

TEST_CASE("random superposition from a spot list costs one pass") {
  TempDir tmp;
  {
    std::ofstream f(tmp / "spots.txt");
    f << "# x y z I\n100 50 0 1\n-200 0 100 1\n0 -150 0 2\n";
  }
  const Run r = run({"solve", "--spots", tmp / "spots.txt", "--alg", "rs", "--seed", "1", "--side",
                     "64", "--out", ""});
  REQUIRE(r.code == 0);
  const holo::Pupil p = holo::build_pupil(64, holo::kDefaultPitch, holo::kDefaultWavelength,
                                          holo::kDefaultFocalLength,
                                          holo::Illumination::gaussian(holo::kDefaultWaist), 0);
  CHECK(field_of(r.out, "ops") == static_cast<long>(p.active_count() * 3));
  CHECK(field_of(r.out, "iters") == 1);
}

TEST_CASE("operation budgets plan the iteration count") {
  const holo::Pupil p = holo::build_pupil(64, holo::kDefaultPitch, holo::kDefaultWavelength,
                                          holo::kDefaultFocalLength,
                                          holo::Illumination::gaussian(holo::kDefaultWaist), 0);
  const auto full = p.active_count() * 36;
  const Run r = run({"solve", "--scenario", "grid36", "--side", "64", "--out", "", "--budget-ops",
                     std::to_string(3 * full)});
  REQUIRE(r.code == 0);
  CHECK(field_of(r.out, "iters") == 3);
  CHECK(field_of(r.out, "ops") == static_cast<long>(3 * full));

  const Run over = run({"solve", "--scenario", "grid36", "--side", "64", "--out", "", "--alg",
                        "cswgs", "--budget-ops", std::to_string(full)});
  REQUIRE(over.code == 0);
  CHECK(over.err.find("exceeds the budget") != std::string::npos);
}

TEST_CASE("solve input errors exit nonzero") {
  TempDir tmp;
  CHECK(run({"solve", "--spots", tmp / "missing.txt", "--out", ""}).code != 0);
  CHECK(run({"solve", "--out", ""}).code != 0);
  CHECK(run({"solve", "--scenario", "grid36", "--alg", "gs"}).code != 0);
  CHECK(run({"solve", "--scenario", "grid36", "--c", "0", "--out", ""}).code != 0);
  CHECK(run({"solve", "--scenario", "grid36", "--alg", "cswgs", "--iters", "1", "--out", ""}).code !=
        0);
  {
    std::ofstream f(tmp / "far.txt");
    f << "50000 0 0 1\n";
  }
  CHECK(run({"solve", "--spots", tmp / "far.txt", "--side", "32", "--out", ""}).code != 0);
  {
    std::ofstream f(tmp / "wide.cfg");
    f << "spacing_um = 5000\n";
  }
  const Run wide = run({"solve", "--scenario-file", tmp / "wide.cfg", "--side", "32", "--out", ""});
  CHECK(wide.code != 0);
  CHECK(wide.err.find("error:") == 0);
  CHECK(run({"solve", "--scenario", "grid36", "--spots", tmp / "far.txt"}).code != 0);
  CHECK(run({}).code != 0);
}

TEST_CASE("render finds a single solved spot and squares for two-photon") {
  TempDir tmp;
  {
    std::ofstream f(tmp / "one.txt");
    f << "300 -200 0 1\n";
  }
  REQUIRE(run({"solve", "--spots", tmp / "one.txt", "--alg", "wgs", "--iters", "2", "--side", "64",
               "--illumination", "uniform", "--out", tmp / "one.pgm", "--raw", tmp / "one.raw"})
              .code == 0);
  const std::vector<std::string> common{"render", "--side", "64", "--illumination", "uniform",
                                        "--center", "300,-200", "--extent", "1200", "--res", "25"};
  auto lin_args = common, two_args = common, pgm_args = common;
  lin_args.insert(lin_args.end(), {"--hologram", tmp / "one.raw", "--out", tmp / "lin.pgm",
                                   "--raw-out", tmp / "lin.raw"});
  two_args.insert(two_args.end(), {"--hologram", tmp / "one.raw", "--exposure", "two-photon",
                                   "--out", "", "--raw-out", tmp / "two.raw"});
  pgm_args.insert(pgm_args.end(), {"--hologram", tmp / "one.pgm", "--out", ""});
  const Run lin = run(lin_args), two = run(two_args), pgm = run(pgm_args);
  REQUIRE(lin.code == 0);
  REQUIRE(two.code == 0);
  REQUIRE(pgm.code == 0);
  CHECK(value_of(lin.out, "x_um") == doctest::Approx(300.0));
  CHECK(value_of(lin.out, "y_um") == doctest::Approx(-200.0));
  CHECK(value_of(pgm.out, "x_um") == doctest::Approx(300.0));
  CHECK(value_of(lin.out, "peak") == doctest::Approx(1.0).epsilon(1e-6));

  const auto l = holo::read_field_raw(tmp / "lin.raw");
  const auto t = holo::read_field_raw(tmp / "two.raw");
  REQUIRE(l.values.size() == 625);
  for (std::size_t i = 0; i < l.values.size(); ++i) {
    const double v = l.values[i];
    CHECK(std::abs(t.values[i] - v * v) <= 1e-6 * std::max(1e-30, v * v) + 1e-38);
  }
  CHECK(holo::read_pgm(tmp / "lin.pgm").width == 25);

  // Geometry mismatch between hologram file and pupil flags.
  auto bad = common;
  bad[2] = "128";
  bad.insert(bad.end(), {"--hologram", tmp / "one.raw", "--out", ""});
  CHECK(run(bad).code != 0);
}

TEST_CASE("z-plane renders localize the cube corners") {
  TempDir tmp;
  // Axis-aligned cubes at different depths put the 16 corners on three z-planes.
  {
    std::ofstream f(tmp / "cubes.cfg");
    f << "base = cubes\nrotation_deg = 0\ncenter1_um = -1200,0,-300\ncenter2_um = 1200,0,300\n";
  }
  const std::string side = "128";
  REQUIRE(run({"solve", "--scenario-file", tmp / "cubes.cfg", "--side", side, "--illumination",
               "uniform", "--iters", "15", "--out", "", "--raw", tmp / "cubes.raw"})
              .code == 0);
  std::ifstream cfg(tmp / "cubes.cfg");
  const holo::SpotSet spots = holo::generate(holo::parse_scenario_config(cfg));
  std::set<long> planes;
  for (const auto& s : spots) planes.insert(std::lround(s.z * 1e6));
  REQUIRE(planes.size() == 3);

  // Probe spacing 40 um; the diffraction spot here is about 136 um wide.
  for (const auto& s : spots) {
    const Run r = run({"render", "--side", side, "--illumination", "uniform", "--hologram",
                       tmp / "cubes.raw", "--center",
                       std::to_string(s.x * 1e6) + "," + std::to_string(s.y * 1e6), "--extent",
                       "360", "--res", "9", "--z", std::to_string(s.z * 1e6), "--out", ""});
    REQUIRE(r.code == 0);
    CHECK(std::abs(value_of(r.out, "x_um") - s.x * 1e6) <= 40.0 + 1e-6);
    CHECK(std::abs(value_of(r.out, "y_um") - s.y * 1e6) <= 40.0 + 1e-6);
  }
}

TEST_CASE("bench writes the CSV and rejects an empty seed list") {
  TempDir tmp;
  const Run r = run({"bench", "--scenario", "grid36", "--side", "48", "--alg", "rs,wgs,cswgs",
                     "--c-sweep", "1,0.5", "--budget-wgs-iters", "2", "--seeds", "2", "--out",
                     tmp / "b.csv", "--summary", tmp / "s.csv"});
  REQUIRE(r.code == 0);
  std::ifstream in(tmp / "b.csv");
  std::string line;
  std::getline(in, line);
  CHECK(line == "scenario,algorithm,c,iterations,ops,wall_ms,efficiency,uniformity,seed,flags");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 3 * 2 * 2);
  CHECK(slurp(tmp / "s.csv").rfind("scenario,algorithm,c,", 0) == 0);

  const Run empty = run({"bench", "--scenario", "grid36", "--side", "48", "--seed-list"});
  CHECK(empty.code != 0);
  CHECK(run({"bench", "--scenario", "grid36", "--seeds", "0"}).code != 0);
  CHECK(run({"bench", "--scenario", "nope", "--side", "48", "--budget-wgs-iters", "1"}).code != 0);
}

TEST_CASE("bench compare and calibrate") {
  const Run r = run({"bench", "--scenario", "grid36", "--side", "48", "--compare", "--c-sweep",
                     "0.5,0.25", "--budget-wgs-iters", "5", "--seeds", "2", "--summary", "-"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("grid36,wgs,1,5,") != std::string::npos);
  const Run c = run({"calibrate", "--side", "48"});
  REQUIRE(c.code == 0);
  CHECK(value_of(c.out, "ops_per_ms") > 0.0);
}
