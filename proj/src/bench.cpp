#include "holo/bench.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <ostream>
#include <tuple>

#include "holo/error.hpp"
#include "holo/metrics.hpp"

namespace holo {

Budget BenchBudget::resolve(std::size_t active_count, std::size_t spot_count) const {
  if (!(value > 0.0)) throw InvalidParameter("benchmark budget must be positive");
  switch (kind) {
    case Kind::operations:
      return Budget::operations(value);
    case Kind::milliseconds:
      return Budget::milliseconds(value);
    case Kind::wgs_iterations:
      return Budget::operations(value * static_cast<double>(active_count) *
                                static_cast<double>(spot_count));
  }
  return {};
}

std::string_view to_string(BenchAlgorithm alg) {
  switch (alg) {
    case BenchAlgorithm::rs:
      return "rs";
    case BenchAlgorithm::wgs:
      return "wgs";
    case BenchAlgorithm::cswgs:
      return "cswgs";
    case BenchAlgorithm::wgs_full:
      return "wgs_full";
  }
  return "?";
}

BenchAlgorithm parse_bench_algorithm(std::string_view name) {
  if (name == "wgs_full" || name == "wgs-full") return BenchAlgorithm::wgs_full;
  switch (parse_algorithm(name)) {
    case Algorithm::rs:
      return BenchAlgorithm::rs;
    case Algorithm::wgs:
      return BenchAlgorithm::wgs;
    case Algorithm::cswgs:
      return BenchAlgorithm::cswgs;
  }
  return BenchAlgorithm::rs;
}

std::vector<double> default_compressions() {
  std::vector<double> c;
  for (int k = 0; k <= 8; ++k) c.push_back(std::ldexp(1.0, -k));
  return c;
}

namespace {

BenchRecord failed_record(const std::string& scenario, BenchAlgorithm alg, double c,
                          std::uint64_t seed, std::string msg) {
  BenchRecord rec;
  rec.scenario = scenario;
  rec.algorithm = alg;
  rec.compression = c;
  rec.seed = seed;
  rec.failed = true;
  rec.efficiency = rec.uniformity = NAN;
  // Keep the CSV row well formed.
  for (char& ch : msg) {
    if (ch == ',' || ch == '\n' || ch == '\r' || ch == '|') ch = ' ';
  }
  rec.flags.push_back("failed:" + msg);
  return rec;
}

BenchRecord run_cell(const Pupil& pupil, const SpotSet& spots, const std::string& scenario,
                     BenchAlgorithm alg, double c, const Budget& budget, std::uint64_t seed,
                     int reference_iterations, double ops_per_ms, const ExecPolicy& exec) {
  BenchRecord rec;
  rec.scenario = scenario;
  rec.algorithm = alg;
  rec.compression = c;
  rec.seed = seed;
  try {
    SolverConfig cfg;
    cfg.seed = seed;
    cfg.compression = c;
    switch (alg) {
      case BenchAlgorithm::rs:
        cfg.algorithm = Algorithm::rs;
        cfg.budget = budget;
        break;
      case BenchAlgorithm::wgs:
        cfg.algorithm = Algorithm::wgs;
        cfg.budget = budget;
        break;
      case BenchAlgorithm::cswgs:
        cfg.algorithm = Algorithm::cswgs;
        cfg.budget = budget;
        break;
      case BenchAlgorithm::wgs_full:
        cfg.algorithm = Algorithm::wgs;
        cfg.iterations = reference_iterations;
        break;
    }
    const auto t0 = std::chrono::steady_clock::now();
    SolveResult result = solve(pupil, spots, cfg, exec, ops_per_ms);
    const auto t1 = std::chrono::steady_clock::now();
    rec.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    const QualityReport q = evaluate(pupil, result.hologram, spots, exec);
    rec.iterations = alg == BenchAlgorithm::rs ? 1 : static_cast<int>(result.trace.iterations.size());
    rec.operations = result.trace.operations;
    rec.efficiency = q.efficiency;
    rec.uniformity = q.uniformity;
    if (result.trace.over_budget) rec.flags.emplace_back("over_budget");
    if (result.trace.degenerate) rec.flags.emplace_back("degenerate");
    if (result.trace.underdetermined) rec.flags.emplace_back("underdetermined");
  } catch (const std::exception& e) {
    rec = failed_record(scenario, alg, c, seed, e.what());
  }
  return rec;
}

void mean_std(const std::vector<double>& v, double& mean, double& sd) {
  mean = 0.0;
  sd = 0.0;
  if (v.empty()) {
    mean = sd = NAN;
    return;
  }
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  if (v.size() < 2) return;
  for (double x : v) sd += (x - mean) * (x - mean);
  sd = std::sqrt(sd / static_cast<double>(v.size() - 1));
}

}  // namespace

SweepResult sweep(const SweepConfig& config, const ExecPolicy& exec) {
  if (config.scenarios.empty() || config.algorithms.empty() || config.compressions.empty() ||
      config.seeds.empty())
    throw InvalidParameter("every sweep axis needs at least one value");
  if (!(config.budget.value > 0.0)) throw InvalidParameter("benchmark budget must be positive");

  const Pupil pupil = build_pupil(config.pupil);
  SweepResult out;
  for (const Scenario& scenario : config.scenarios) {
    // A frame that cannot be generated fails its own cells only.
    std::vector<std::optional<SpotSet>> frames(config.seeds.size());
    std::vector<std::string> frame_errors(config.seeds.size());
    for (std::size_t k = 0; k < config.seeds.size(); ++k) {
      try {
        frames[k] = generate(scenario, {scenario.sweep_axis,
                                        static_cast<double>(k) * scenario.sweep_step});
      } catch (const std::exception& e) {
        frame_errors[k] = e.what();
      }
    }
    const Budget budget = config.budget.resolve(pupil.active_count(), scenario.spot_count());
    for (BenchAlgorithm alg : config.algorithms) {
      for (double c : config.compressions) {
        for (std::size_t k = 0; k < config.seeds.size(); ++k) {
          if (!frames[k]) {
            out.records.push_back(failed_record(scenario.name, alg, c, config.seeds[k],
                                                frame_errors[k]));
            continue;
          }
          out.records.push_back(run_cell(pupil, *frames[k], scenario.name, alg, c, budget,
                                         config.seeds[k], config.reference_iterations,
                                         config.ops_per_ms, exec));
        }
      }
    }
  }
  out.cells = summarize(out.records);
  return out;
}

std::vector<CellStats> summarize(const std::vector<BenchRecord>& records) {
  using Key = std::tuple<std::string, int, double>;
  std::map<Key, std::size_t> index;
  std::vector<CellStats> cells;
  std::vector<std::vector<double>> es, us;
  for (const auto& r : records) {
    const Key key{r.scenario, static_cast<int>(r.algorithm), r.compression};
    auto it = index.find(key);
    if (it == index.end()) {
      it = index.emplace(key, cells.size()).first;
      CellStats c;
      c.scenario = r.scenario;
      c.algorithm = r.algorithm;
      c.compression = r.compression;
      cells.push_back(c);
      es.emplace_back();
      us.emplace_back();
    }
    CellStats& c = cells[it->second];
    ++c.runs;
    if (r.failed) {
      ++c.failures;
      continue;
    }
    c.iterations = std::max(c.iterations, r.iterations);
    c.operations = std::max(c.operations, r.operations);
    for (const auto& f : r.flags) c.over_budget = c.over_budget || f == "over_budget";
    es[it->second].push_back(r.efficiency);
    us[it->second].push_back(r.uniformity);
  }
  for (std::size_t i = 0; i < cells.size(); ++i) {
    mean_std(es[i], cells[i].mean_efficiency, cells[i].std_efficiency);
    mean_std(us[i], cells[i].mean_uniformity, cells[i].std_uniformity);
  }
  return cells;
}

CompareSummary compare_at_budget(const Scenario& scenario, const BenchBudget& budget,
                                 const std::vector<std::uint64_t>& seeds,
                                 const std::vector<double>& compressions,
                                 const PupilParams& pupil, const ExecPolicy& exec,
                                 double ops_per_ms) {
  if (compressions.empty()) throw InvalidParameter("compare needs at least one compression");
  SweepConfig cfg;
  cfg.scenarios = {scenario};
  cfg.algorithms = {BenchAlgorithm::rs, BenchAlgorithm::wgs};
  cfg.compressions = {1.0};
  cfg.budget = budget;
  cfg.seeds = seeds;
  cfg.pupil = pupil;
  cfg.ops_per_ms = ops_per_ms;
  SweepResult base = sweep(cfg, exec);

  cfg.algorithms = {BenchAlgorithm::cswgs};
  cfg.compressions = compressions;
  SweepResult cs = sweep(cfg, exec);

  CompareSummary s;
  s.rs = base.cells.at(0);
  s.wgs = base.cells.at(1);
  s.cswgs_by_compression = cs.cells;
  std::size_t best = 0;
  for (std::size_t i = 1; i < cs.cells.size(); ++i) {
    if (cs.cells[i].mean_uniformity > cs.cells[best].mean_uniformity) best = i;
  }
  s.cswgs = cs.cells.at(best);
  s.records = std::move(base.records);
  s.records.insert(s.records.end(), cs.records.begin(), cs.records.end());
  return s;
}

double calibrate_ops_per_ms(const Pupil& pupil, const SpotSet& spots, const ExecPolicy& exec,
                            int repeats) {
  WgsState state = initial_state(pupil, spots, 0, exec);
  double best_ms = INFINITY;
  for (int r = 0; r < std::max(repeats, 1); ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    wgs_step(pupil, spots, state, pupil.full_range(), exec);
    const auto t1 = std::chrono::steady_clock::now();
    best_ms = std::min(best_ms, std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  const double ops = static_cast<double>(pupil.active_count()) * static_cast<double>(spots.size());
  return ops / std::max(best_ms, 1e-6);
}

namespace {

std::string fmt9(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string join_flags(const std::vector<std::string>& flags) {
  std::string s;
  for (const auto& f : flags) {
    if (!s.empty()) s += '|';
    s += f;
  }
  return s;
}

}  // namespace

void write_csv(std::ostream& out, const std::vector<BenchRecord>& records) {
  out << kCsvHeader << '\n';
  for (const auto& r : records) {
    out << r.scenario << ',' << to_string(r.algorithm) << ',' << fmt9(r.compression) << ','
        << r.iterations << ',' << r.operations << ',' << fmt9(r.wall_ms) << ','
        << fmt9(r.efficiency) << ',' << fmt9(r.uniformity) << ',' << r.seed << ','
        << join_flags(r.flags) << '\n';
  }
}

void write_summary(std::ostream& out, const std::vector<CellStats>& cells) {
  out << "scenario,algorithm,c,iterations,ops,runs,failures,mean_e,std_e,mean_u,std_u,over_budget\n";
  for (const auto& c : cells) {
    out << c.scenario << ',' << to_string(c.algorithm) << ',' << fmt9(c.compression) << ','
        << c.iterations << ',' << c.operations << ',' << c.runs << ',' << c.failures << ','
        << fmt9(c.mean_efficiency) << ',' << fmt9(c.std_efficiency) << ','
        << fmt9(c.mean_uniformity) << ',' << fmt9(c.std_uniformity) << ','
        << (c.over_budget ? 1 : 0) << '\n';
  }
}

}  // namespace holo
