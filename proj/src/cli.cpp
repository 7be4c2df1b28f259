#include "holo/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "holo/bench.hpp"
#include "holo/error.hpp"
#include "holo/io.hpp"
#include "holo/metrics.hpp"
#include "holo/scenarios.hpp"
#include "holo/simulate.hpp"
#include "holo/solvers.hpp"

namespace holo::cli {
namespace {

struct PupilOptions {
  int side = kDefaultSidePx;
  double pitch_um = kDefaultPitch * 1e6;
  double wavelength_nm = kDefaultWavelength * 1e9;
  double focal_mm = kDefaultFocalLength * 1e3;
  std::string illumination = "gaussian";
  double waist_mm = kDefaultWaist * 1e3;
  std::uint64_t seed = 0;
  int threads = 1;
  std::size_t chunk = kDefaultChunk;

  void attach(CLI::App* app) {
    app->add_option("--side", side, "Pupil grid side, pixels (circular aperture of this diameter)")
        ->capture_default_str();
    app->add_option("--pitch", pitch_um, "SLM pixel pitch, micrometers")->capture_default_str();
    app->add_option("--wavelength", wavelength_nm, "Wavelength, nanometers")->capture_default_str();
    app->add_option("--f", focal_mm, "Effective focal length, millimeters")->capture_default_str();
    app->add_option("--illumination", illumination, "uniform | gaussian")
        ->check(CLI::IsMember({"uniform", "gaussian"}))
        ->capture_default_str();
    app->add_option("--waist", waist_mm, "Gaussian beam waist radius, millimeters")
        ->capture_default_str();
    app->add_option("--pupil-seed", seed, "Seed of the random pixel order")->capture_default_str();
    app->add_option("--threads", threads, "Worker threads (results do not depend on it)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app->add_option("--chunk", chunk, "Reduction chunk size")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
  }

  PupilParams params() const {
    PupilParams p;
    p.side_px = side;
    p.pitch = pitch_um * 1e-6;
    p.wavelength = wavelength_nm * 1e-9;
    p.focal_length = focal_mm * 1e-3;
    p.illumination = illumination == "uniform" ? Illumination::uniform()
                                               : Illumination::gaussian(waist_mm * 1e-3);
    p.seed = seed;
    return p;
  }

  ExecPolicy exec() const { return {threads, chunk}; }
};

struct SpotSource {
  std::string spots_file;
  std::string scenario;
  std::string scenario_file;
  int frame = 0;

  void attach(CLI::App* app, bool required) {
    auto* a = app->add_option("--spots", spots_file, "Spot list: x_um y_um z_um intensity per line");
    auto* b = app->add_option("--scenario", scenario, "Named scenario: grid100 | grid36 | cubes");
    auto* c = app->add_option("--scenario-file", scenario_file, "Scenario config (key = value)");
    a->excludes(b)->excludes(c);
    b->excludes(c);
    app->add_option("--frame", frame, "Orientation frame of the scenario's rotation sweep")
        ->capture_default_str();
    if (required) {
      app->callback([app] {
        if (app->count("--spots") + app->count("--scenario") + app->count("--scenario-file") == 0)
          throw CLI::RequiredError("one of --spots, --scenario, --scenario-file");
      });
    }
  }

  bool given() const { return !spots_file.empty() || !scenario.empty() || !scenario_file.empty(); }

  SpotSet load(const PupilParams& pupil) const {
    const FieldOfView field =
        FieldOfView::for_pupil(pupil.side_px, pupil.pitch, pupil.wavelength, pupil.focal_length);
    if (!spots_file.empty()) {
      SpotSet spots = load_spot_list(spots_file);
      for (const auto& sp : spots) {
        if (std::abs(sp.x) > field.lateral || std::abs(sp.y) > field.lateral ||
            std::abs(sp.z) > field.axial)
          throw OutOfField("spot list entry lies outside the addressable field of view");
      }
      return spots;
    }
    Scenario s = scenario_file.empty() ? named_scenario(scenario) : load_scenario_config(scenario_file);
    s.field = field;
    return generate(s, {s.sweep_axis, frame * s.sweep_step});
  }
};

// "12345" (operations) or "auto64ms" (milliseconds through calibration).
std::optional<Budget> parse_budget(const std::string& text) {
  if (text.empty()) return std::nullopt;
  if (text.rfind("auto", 0) == 0) {
    std::string rest = text.substr(4);
    if (rest.size() < 3 || rest.substr(rest.size() - 2) != "ms")
      throw InvalidParameter("budget must be an operation count or autoNNms");
    rest.resize(rest.size() - 2);
    std::size_t used = 0;
    const double ms = std::stod(rest, &used);
    if (used != rest.size() || !(ms > 0.0)) throw InvalidParameter("bad millisecond budget");
    return Budget::milliseconds(ms);
  }
  std::size_t used = 0;
  double ops = 0.0;
  try {
    ops = std::stod(text, &used);
  } catch (const std::exception&) {
    throw InvalidParameter("budget must be an operation count or autoNNms");
  }
  if (used != text.size() || !(ops > 0.0)) throw InvalidParameter("bad operation budget");
  return Budget::operations(ops);
}

std::string fmt9(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

bool has_magic(const std::string& path, const char* magic) {
  std::ifstream in(path, std::ios::binary);
  char m[4] = {};
  in.read(m, 4);
  return in.gcount() == 4 && std::equal(m, m + 4, magic);
}

PhaseLut load_lut(const std::string& path) {
  return path.empty() ? PhaseLut::linear() : PhaseLut::load(path);
}

struct SolveOptions {
  PupilOptions pupil;
  SpotSource source;
  std::string alg = "wgs";
  int iters = 10;
  double c = 1.0 / 16.0;
  std::uint64_t seed = 0;
  std::string budget;
  std::string out = "hologram.pgm";
  std::string raw;
  std::string lut;
};

int cmd_solve(const SolveOptions& o, std::ostream& out, std::ostream& err) {
  const PupilParams pp = o.pupil.params();
  const ExecPolicy exec = o.pupil.exec();
  const Pupil pupil = build_pupil(pp);
  const SpotSet spots = o.source.load(pp);

  SolverConfig cfg;
  cfg.algorithm = parse_algorithm(o.alg);
  cfg.iterations = o.iters;
  cfg.compression = o.c;
  cfg.seed = o.seed;
  cfg.budget = parse_budget(o.budget);
  if (cfg.algorithm == Algorithm::cswgs && !cfg.budget && o.iters < 2)
    throw InvalidParameter("cswgs needs --iters >= 2");
  if (cfg.algorithm == Algorithm::wgs && !cfg.budget && o.iters < 1)
    throw InvalidParameter("wgs needs --iters >= 1");
  if (!(o.c > 0.0 && o.c <= 1.0)) throw InvalidParameter("--c must lie in (0, 1]");

  double ops_per_ms = 0.0;
  if (cfg.budget && cfg.budget->unit == Budget::Unit::milliseconds)
    ops_per_ms = calibrate_ops_per_ms(pupil, spots, exec);

  const auto t0 = std::chrono::steady_clock::now();
  const SolveResult result = solve(pupil, spots, cfg, exec, ops_per_ms);
  const auto t1 = std::chrono::steady_clock::now();
  const double wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();

  if (result.trace.underdetermined)
    err << "warning: compressed subset is smaller than the spot count\n";
  if (result.trace.degenerate) err << "warning: zero spot field met during weighting\n";
  if (result.trace.over_budget) err << "warning: minimum iteration count exceeds the budget\n";

  const PhaseLut lut = load_lut(o.lut);
  if (!o.out.empty()) write_hologram_pgm(o.out, pupil, result.hologram, lut);
  if (!o.raw.empty()) write_hologram_raw(o.raw, pupil, result.hologram);

  const QualityReport q = evaluate(pupil, result.hologram, spots, exec);
  const int iters = cfg.algorithm == Algorithm::rs ? 1 : static_cast<int>(result.trace.iterations.size());
  out << "e=" << fmt9(q.efficiency) << " u=" << fmt9(q.uniformity)
      << " ops=" << result.trace.operations << " iters=" << iters << " wall_ms=" << wall_ms << "\n";
  return 0;
}

struct RenderOptions {
  PupilOptions pupil;
  SpotSource source;
  std::string hologram;
  std::string lut;
  std::vector<double> center_um{0.0, 0.0};
  std::vector<double> extent_um;
  double z_um = 0.0;
  std::vector<int> res{64};
  std::string exposure = "linear";
  std::string out = "field.pgm";
  std::string raw_out;
};

int cmd_render(const RenderOptions& o, std::ostream& out, std::ostream&) {
  const PupilParams pp = o.pupil.params();
  const ExecPolicy exec = o.pupil.exec();
  const Pupil pupil = build_pupil(pp);
  const Hologram holo = has_magic(o.hologram, "HPHS") ? read_hologram_raw(o.hologram, pupil)
                                                      : read_hologram_pgm(o.hologram, pupil, load_lut(o.lut));
  if (o.center_um.size() != 2) throw InvalidParameter("--center expects x,y");
  if (o.extent_um.empty() || o.extent_um.size() > 2) throw InvalidParameter("--extent expects w[,h]");
  if (o.res.empty() || o.res.size() > 2) throw InvalidParameter("--res expects W[,H]");
  const Window window{o.center_um[0] * 1e-6, o.center_um[1] * 1e-6, o.extent_um[0] * 1e-6,
                      o.extent_um.back() * 1e-6};
  const Exposure exposure = o.exposure == "two-photon" ? Exposure::two_photon : Exposure::linear;
  const FieldImage img =
      render_plane(pupil, holo, window, o.z_um * 1e-6, o.res[0], o.res.back(), exposure, exec);
  if (!o.out.empty()) write_field_pgm(o.out, img);
  if (!o.raw_out.empty()) write_field_raw(o.raw_out, img);

  std::size_t peak = 0;
  for (std::size_t i = 1; i < img.intensity.size(); ++i) {
    if (img.intensity[i] > img.intensity[peak]) peak = i;
  }
  const int pc = static_cast<int>(peak % static_cast<std::size_t>(img.width));
  const int pr = static_cast<int>(peak / static_cast<std::size_t>(img.width));
  out << "peak=" << fmt9(img.intensity[peak]) << " x_um=" << fmt9(img.probe_x(pc) * 1e6)
      << " y_um=" << fmt9(img.probe_y(pr) * 1e6) << "\n";
  return 0;
}

struct BenchOptions {
  PupilOptions pupil;
  std::vector<std::string> scenarios;
  std::vector<std::string> scenario_files;
  std::vector<std::string> algs{"rs", "wgs", "cswgs"};
  std::vector<double> c_sweep;
  std::string budget_ops = "auto64ms";
  double budget_wgs_iters = 0.0;
  int seeds = 10;
  std::vector<std::string> seed_list;
  bool seed_list_given = false;
  int reference_iters = 30;
  std::string out;
  std::string summary;
  bool compare = false;
};

int cmd_bench(const BenchOptions& o, std::ostream& out, std::ostream& err) {
  const PupilParams pp = o.pupil.params();
  const ExecPolicy exec = o.pupil.exec();

  SweepConfig cfg;
  cfg.pupil = pp;
  cfg.reference_iterations = o.reference_iters;
  const FieldOfView field =
      FieldOfView::for_pupil(pp.side_px, pp.pitch, pp.wavelength, pp.focal_length);
  for (const auto& name : o.scenarios) cfg.scenarios.push_back(named_scenario(name));
  for (const auto& path : o.scenario_files) cfg.scenarios.push_back(load_scenario_config(path));
  if (cfg.scenarios.empty()) {
    for (const auto& name : scenario_names()) cfg.scenarios.push_back(named_scenario(name));
  }
  for (auto& s : cfg.scenarios) s.field = field;

  cfg.algorithms.clear();
  for (const auto& a : o.algs) cfg.algorithms.push_back(parse_bench_algorithm(a));
  cfg.compressions = o.c_sweep.empty() ? default_compressions() : o.c_sweep;
  for (double c : cfg.compressions) {
    if (!(c > 0.0 && c <= 1.0)) throw InvalidParameter("--c-sweep values must lie in (0, 1]");
  }

  if (o.seed_list_given) {
    for (const auto& item : o.seed_list) {
      if (item.empty()) continue;
      std::size_t used = 0;
      unsigned long long v = 0;
      try {
        v = std::stoull(item, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != item.size()) throw CLI::ValidationError("--seed-list", "bad seed '" + item + "'");
      cfg.seeds.push_back(v);
    }
  } else {
    for (int k = 1; k <= o.seeds; ++k) cfg.seeds.push_back(static_cast<std::uint64_t>(k));
  }
  if (cfg.seeds.empty()) throw CLI::ValidationError("--seeds", "seed list is empty");

  if (o.budget_wgs_iters > 0.0) {
    cfg.budget = {BenchBudget::Kind::wgs_iterations, o.budget_wgs_iters};
  } else {
    const auto b = parse_budget(o.budget_ops);
    if (!b) throw InvalidParameter("missing budget");
    if (b->unit == Budget::Unit::milliseconds) {
      cfg.budget = {BenchBudget::Kind::milliseconds, b->value};
      const Pupil pupil = build_pupil(pp);
      cfg.ops_per_ms = calibrate_ops_per_ms(pupil, generate(cfg.scenarios.front()), exec);
      err << "calibrated " << fmt9(cfg.ops_per_ms) << " ops/ms; budget "
          << fmt9(b->value * cfg.ops_per_ms) << " ops\n";
    } else {
      cfg.budget = {BenchBudget::Kind::operations, b->value};
    }
  }

  std::vector<BenchRecord> records;
  std::vector<CellStats> cells;
  if (o.compare) {
    for (const auto& s : cfg.scenarios) {
      CompareSummary cs = compare_at_budget(s, cfg.budget, cfg.seeds, cfg.compressions, pp, exec,
                                            cfg.ops_per_ms);
      cells.push_back(cs.rs);
      cells.push_back(cs.wgs);
      cells.push_back(cs.cswgs);
      records.insert(records.end(), cs.records.begin(), cs.records.end());
    }
  } else {
    SweepResult r = sweep(cfg, exec);
    records = std::move(r.records);
    cells = std::move(r.cells);
  }

  if (o.out.empty() || o.out == "-") {
    write_csv(out, records);
  } else {
    std::ofstream f(o.out, std::ios::binary);
    if (!f) throw IoError("cannot write " + o.out);
    write_csv(f, records);
  }
  if (!o.summary.empty()) {
    if (o.summary == "-") {
      write_summary(out, cells);
    } else {
      std::ofstream f(o.summary, std::ios::binary);
      if (!f) throw IoError("cannot write " + o.summary);
      write_summary(f, cells);
    }
  }
  return 0;
}

int cmd_calibrate(const PupilOptions& po, const SpotSource& source, std::ostream& out) {
  const PupilParams pp = po.params();
  const Pupil pupil = build_pupil(pp);
  SpotSet spots = source.given() ? source.load(pp) : [&] {
    Scenario s = named_scenario("grid36");
    s.field = FieldOfView::for_pupil(pupil);
    return generate(s);
  }();
  const double rate = calibrate_ops_per_ms(pupil, spots, po.exec());
  out << "ops_per_ms=" << fmt9(rate) << " budget_64ms_ops=" << fmt9(64.0 * rate)
      << " M=" << pupil.active_count() << " N=" << spots.size() << "\n";
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"holo: multi-spot phase hologram engine (RS, WGS, CS-WGS)"};
  app.require_subcommand(1);

  SolveOptions solve_o;
  auto* solve_cmd = app.add_subcommand("solve", "Compute a hologram and report its quality");
  solve_o.pupil.attach(solve_cmd);
  solve_o.source.attach(solve_cmd, true);
  solve_cmd->add_option("--alg", solve_o.alg, "rs | wgs | cswgs")
      ->check(CLI::IsMember({"rs", "wgs", "cswgs"}))
      ->capture_default_str();
  solve_cmd->add_option("--iters", solve_o.iters, "Iterations (ignored by rs)")->capture_default_str();
  solve_cmd->add_option("--c", solve_o.c, "Compression ratio for cswgs, in (0, 1]")->capture_default_str();
  solve_cmd->add_option("--seed", solve_o.seed, "Seed of the initial random phases")->capture_default_str();
  solve_cmd->add_option("--budget-ops", solve_o.budget,
                        "Plan iterations from a budget: operation count or autoNNms");
  solve_cmd->add_option("--out", solve_o.out, "Hologram PGM path (empty to skip)")->capture_default_str();
  solve_cmd->add_option("--raw", solve_o.raw, "Raw float64 phase dump path (HPHS)");
  solve_cmd->add_option("--lut", solve_o.lut, "Custom 256-entry phase LUT file");

  RenderOptions render_o;
  auto* render_cmd = app.add_subcommand("render", "Simulate the focal-plane intensity of a hologram");
  render_o.pupil.attach(render_cmd);
  render_cmd->add_option("--hologram", render_o.hologram, "Hologram PGM or HPHS dump")->required();
  render_cmd->add_option("--lut", render_o.lut, "Custom 256-entry phase LUT file");
  render_cmd->add_option("--center", render_o.center_um, "Window center x,y, micrometers")
      ->delimiter(',')
      ->expected(2);
  render_cmd->add_option("--extent", render_o.extent_um, "Window size w[,h], micrometers")
      ->delimiter(',')
      ->required();
  render_cmd->add_option("--z", render_o.z_um, "Focal plane z, micrometers")->capture_default_str();
  render_cmd->add_option("--res", render_o.res, "Image resolution W[,H]")->delimiter(',');
  render_cmd->add_option("--exposure", render_o.exposure, "linear | two-photon")
      ->check(CLI::IsMember({"linear", "two-photon"}))
      ->capture_default_str();
  render_cmd->add_option("--out", render_o.out, "Output PGM (empty to skip)")->capture_default_str();
  render_cmd->add_option("--raw-out", render_o.raw_out, "Raw float32 intensity dump (HFIM)");

  BenchOptions bench_o;
  auto* bench_cmd = app.add_subcommand("bench", "Budgeted algorithm comparison and compression sweep");
  bench_o.pupil.attach(bench_cmd);
  bench_cmd->add_option("--scenario", bench_o.scenarios, "Named scenario (repeatable); default all");
  bench_cmd->add_option("--scenario-file", bench_o.scenario_files, "Scenario config (repeatable)");
  bench_cmd->add_option("--alg", bench_o.algs, "Algorithms: rs,wgs,cswgs,wgs_full")->delimiter(',');
  bench_cmd->add_option("--c-sweep", bench_o.c_sweep, "Compression values, default 1,0.5,...,2^-8")
      ->delimiter(',');
  bench_cmd->add_option("--budget-ops", bench_o.budget_ops, "Operation count or autoNNms")
      ->capture_default_str();
  bench_cmd->add_option("--budget-wgs-iters", bench_o.budget_wgs_iters,
                        "Budget as a number of full WGS iterations of each scenario");
  bench_cmd->add_option("--seeds", bench_o.seeds, "Number of seeds (1..N)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  auto* seed_list_opt = bench_cmd->add_option("--seed-list", bench_o.seed_list, "Explicit seeds")
                            ->delimiter(',')
                            ->allow_extra_args(false)
                            ->expected(0, 1 << 20);
  bench_cmd->add_option("--reference-iters", bench_o.reference_iters,
                        "Iterations of the unconstrained wgs_full reference")
      ->capture_default_str();
  bench_cmd->add_option("--out", bench_o.out, "CSV path, default standard output");
  bench_cmd->add_option("--summary", bench_o.summary, "Per-cell mean/std CSV path ('-' for stdout)");
  bench_cmd->add_flag("--compare", bench_o.compare, "RS / WGS / best-c CS-WGS summary only");

  PupilOptions cal_pupil;
  SpotSource cal_source;
  auto* cal_cmd = app.add_subcommand("calibrate", "Measure pixel-spot operations per millisecond");
  cal_pupil.attach(cal_cmd);
  cal_source.attach(cal_cmd, false);

  try {
    app.parse(argc, argv);
    bench_o.seed_list_given = seed_list_opt->count() > 0;
    if (*solve_cmd) return cmd_solve(solve_o, out, err);
    if (*render_cmd) return cmd_render(render_o, out, err);
    if (*bench_cmd) return cmd_bench(bench_o, out, err);
    if (*cal_cmd) return cmd_calibrate(cal_pupil, cal_source, out);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace holo::cli
