#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "holo/exec.hpp"
#include "holo/optics.hpp"
#include "holo/scenarios.hpp"
#include "holo/solvers.hpp"

namespace holo {

// Frame budget for one hologram. `wgs_iterations` scales with each
// scenario's own M*N, so one value covers scenarios of different sizes.
struct BenchBudget {
  enum class Kind { operations, milliseconds, wgs_iterations };

  Kind kind = Kind::wgs_iterations;
  double value = 1.0;

  Budget resolve(std::size_t active_count, std::size_t spot_count) const;
};

// Bench-level algorithm: the three solvers plus the unconstrained WGS
// reference, which ignores the budget.
enum class BenchAlgorithm { rs, wgs, cswgs, wgs_full };

std::string_view to_string(BenchAlgorithm alg);
BenchAlgorithm parse_bench_algorithm(std::string_view name);

struct BenchRecord {
  std::string scenario;
  BenchAlgorithm algorithm = BenchAlgorithm::rs;
  double compression = 1.0;
  int iterations = 0;
  std::uint64_t operations = 0;
  double wall_ms = 0.0;
  double efficiency = 0.0;
  double uniformity = 0.0;
  std::uint64_t seed = 0;
  std::vector<std::string> flags;
  bool failed = false;
};

struct SweepConfig {
  std::vector<Scenario> scenarios;
  std::vector<BenchAlgorithm> algorithms{BenchAlgorithm::rs, BenchAlgorithm::wgs,
                                         BenchAlgorithm::cswgs};
  std::vector<double> compressions{1.0};
  BenchBudget budget;
  std::vector<std::uint64_t> seeds;
  PupilParams pupil;
  int reference_iterations = 30;
  double ops_per_ms = 0.0;  // required for millisecond budgets
};

// Mean and sample standard deviation across the seeds of one
// (scenario, algorithm, c) cell.
struct CellStats {
  std::string scenario;
  BenchAlgorithm algorithm = BenchAlgorithm::rs;
  double compression = 1.0;
  int iterations = 0;
  std::uint64_t operations = 0;
  std::size_t runs = 0;
  std::size_t failures = 0;
  double mean_efficiency = 0.0;
  double std_efficiency = 0.0;
  double mean_uniformity = 0.0;
  double std_uniformity = 0.0;
  bool over_budget = false;
};

struct SweepResult {
  std::vector<BenchRecord> records;
  std::vector<CellStats> cells;
};

/// Runs every scenario x algorithm x c x seed combination, in that nesting
/// order. Seed index k also selects orientation frame k of the scenario's
/// rotation sweep. A failing run is recorded with a `failed:` flag and the
/// sweep continues.
SweepResult sweep(const SweepConfig& config, const ExecPolicy& exec = {});

std::vector<CellStats> summarize(const std::vector<BenchRecord>& records);

struct CompareSummary {
  CellStats rs;
  CellStats wgs;
  CellStats cswgs;  // the compression with the best mean uniformity
  std::vector<CellStats> cswgs_by_compression;
  std::vector<BenchRecord> records;
};

/// RS, WGS and best-c CS-WGS side by side at one budget.
CompareSummary compare_at_budget(const Scenario& scenario, const BenchBudget& budget,
                                 const std::vector<std::uint64_t>& seeds,
                                 const std::vector<double>& compressions,
                                 const PupilParams& pupil, const ExecPolicy& exec = {},
                                 double ops_per_ms = 0.0);

/// c = 2^0 .. 2^-8.
std::vector<double> default_compressions();

/// Pixel-spot operations per millisecond of this machine, timed on full WGS
/// iterations.
double calibrate_ops_per_ms(const Pupil& pupil, const SpotSet& spots, const ExecPolicy& exec = {},
                            int repeats = 3);

inline constexpr const char* kCsvHeader =
    "scenario,algorithm,c,iterations,ops,wall_ms,efficiency,uniformity,seed,flags";

void write_csv(std::ostream& out, const std::vector<BenchRecord>& records);
void write_summary(std::ostream& out, const std::vector<CellStats>& cells);

}  // namespace holo
