#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "holo/exec.hpp"
#include "holo/kernels.hpp"
#include "holo/optics.hpp"

namespace holo {

enum class Algorithm { rs, wgs, cswgs };

std::string_view to_string(Algorithm alg);
Algorithm parse_algorithm(std::string_view name);

// Compute allowance per hologram. Operations are pixel-spot products; the
// millisecond form needs a measured operations-per-millisecond rate.
struct Budget {
  enum class Unit { operations, milliseconds };

  Unit unit = Unit::operations;
  double value = 0.0;

  static Budget operations(double ops) { return {Unit::operations, ops}; }
  static Budget milliseconds(double ms) { return {Unit::milliseconds, ms}; }
};

struct SolverConfig {
  Algorithm algorithm = Algorithm::wgs;
  int iterations = 1;
  double compression = 1.0;
  std::uint64_t seed = 0;
  std::optional<Budget> budget;
};

struct CostModel {
  std::size_t active_count = 0;  // M
  std::size_t spot_count = 0;    // N
  double ops_per_ms = 0.0;       // needed for millisecond budgets only
};

/// Closed-form operation count of a run: M*N per full iteration,
/// ceil(c*M)*N per compressed one. RS costs a single M*N pass.
std::uint64_t predicted_operations(Algorithm alg, int iterations, double compression,
                                   std::size_t active_count, std::size_t spot_count);

struct BudgetPlan {
  int iterations = 1;
  std::uint64_t operations = 0;
  bool over_budget = false;
};

/// Largest iteration count whose predicted cost fits the budget. WGS never
/// drops below 1 and CS-WGS below 2; those floors set `over_budget`.
BudgetPlan plan_iterations(Algorithm alg, double compression, const CostModel& cost,
                           const Budget& budget);

struct IterationRecord {
  std::vector<double> weights;     // w_n after the update
  std::vector<double> magnitudes;  // |E_n| that drove the update
  std::size_t subset_size = 0;
  std::uint64_t cumulative_ops = 0;
  bool degenerate = false;
};

struct SolverTrace {
  std::vector<IterationRecord> iterations;
  std::uint64_t operations = 0;
  int full_iterations = 0;
  int compressed_iterations = 0;
  bool degenerate = false;
  bool underdetermined = false;  // compressed subset smaller than N
  bool over_budget = false;
};

struct SolveResult {
  Hologram hologram;
  SolverTrace trace;
};

// Mutable state carried between weighted GS iterations.
struct WgsState {
  std::vector<double> weights;
  SpotCoefficients coeffs;
  std::vector<double> hologram;  // storage order, whole pupil
  std::optional<SpotPhasors> phasors;  // built once per run
};

/// Weight update w_n *= mean|E| / |E_n| in place. Zero magnitudes are
/// replaced by 1e-6 times the smallest positive one (all ones if none is
/// positive) before averaging; returns true when that happened. Weights that
/// leave [2^-256, 2^256] are rescaled together by a power of two.
bool reweight(std::span<double> weights, std::span<double> magnitudes);

/// Random superposition: theta_n drawn uniformly on [0, 2pi) from `seed`.
SolveResult rs(const Pupil& pupil, const SpotSet& spots, std::uint64_t seed,
               const ExecPolicy& exec = {});

/// RS start state for the weighted solvers (weights 1, amplitudes a_n^0).
/// The RS hologram is superposed on `range` only (default: whole pupil).
WgsState initial_state(const Pupil& pupil, const SpotSet& spots, std::uint64_t seed,
                       const ExecPolicy& exec = {});
WgsState initial_state(const Pupil& pupil, const SpotSet& spots, std::uint64_t seed,
                       PixelRange range, const ExecPolicy& exec = {});

/// One weighted GS iteration over `range`: project the current hologram onto
/// the spots, reweight each spot by mean|E| / |E_n|, adopt arg(E_n) as the new
/// phase delay and superpose the next hologram on the same pixels. Pixels
/// outside `range` keep their previous phase.
IterationRecord wgs_step(const Pupil& pupil, const SpotSet& spots, WgsState& state,
                         PixelRange range, const ExecPolicy& exec = {});
/// As above, but the next hologram is superposed on `update` instead.
IterationRecord wgs_step(const Pupil& pupil, const SpotSet& spots, WgsState& state,
                         PixelRange range, PixelRange update, const ExecPolicy& exec = {});

SolveResult wgs(const Pupil& pupil, const SpotSet& spots, int iterations, std::uint64_t seed,
                const ExecPolicy& exec = {});

/// Compressed WGS: iterations - 2 steps on the first ceil(c*M) storage-order
/// pixels, then two steps over the whole pupil. The last compressed step
/// writes the hologram on every pixel, so the full steps never read phases
/// left over from the RS start.
SolveResult cswgs(const Pupil& pupil, const SpotSet& spots, int iterations, double compression,
                  std::uint64_t seed, const ExecPolicy& exec = {});

/// Dispatches on the config. When a budget is set the iteration count comes
/// from plan_iterations and `config.iterations` is ignored.
SolveResult solve(const Pupil& pupil, const SpotSet& spots, const SolverConfig& config,
                  const ExecPolicy& exec = {}, double ops_per_ms = 0.0);

}  // namespace holo
