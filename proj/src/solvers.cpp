#include "holo/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "holo/error.hpp"
#include "holo/rng.hpp"

namespace holo {

std::string_view to_string(Algorithm alg) {
  switch (alg) {
    case Algorithm::rs:
      return "rs";
    case Algorithm::wgs:
      return "wgs";
    case Algorithm::cswgs:
      return "cswgs";
  }
  return "?";
}

Algorithm parse_algorithm(std::string_view name) {
  if (name == "rs") return Algorithm::rs;
  if (name == "wgs") return Algorithm::wgs;
  if (name == "cswgs" || name == "cs-wgs") return Algorithm::cswgs;
  throw InvalidParameter("unknown algorithm '" + std::string(name) + "'");
}

std::uint64_t predicted_operations(Algorithm alg, int iterations, double compression,
                                   std::size_t active_count, std::size_t spot_count) {
  const std::uint64_t full = static_cast<std::uint64_t>(active_count) * spot_count;
  switch (alg) {
    case Algorithm::rs:
      return full;
    case Algorithm::wgs:
      return full * static_cast<std::uint64_t>(std::max(iterations, 0));
    case Algorithm::cswgs: {
      const std::uint64_t sub =
          static_cast<std::uint64_t>(compressed_size(active_count, compression)) * spot_count;
      return 2 * full + sub * static_cast<std::uint64_t>(std::max(iterations - 2, 0));
    }
  }
  return 0;
}

BudgetPlan plan_iterations(Algorithm alg, double compression, const CostModel& cost,
                           const Budget& budget) {
  double ops = budget.value;
  if (budget.unit == Budget::Unit::milliseconds) {
    if (!(cost.ops_per_ms > 0.0))
      throw InvalidParameter("millisecond budgets need a calibrated operations-per-ms rate");
    ops = budget.value * cost.ops_per_ms;
  }
  if (!(ops >= 0.0)) throw InvalidParameter("budget must be non-negative");
  const double full = static_cast<double>(cost.active_count) * static_cast<double>(cost.spot_count);

  BudgetPlan plan;
  switch (alg) {
    case Algorithm::rs:
      plan.iterations = 1;
      break;
    case Algorithm::wgs: {
      const double fit = std::floor(ops / full);
      plan.iterations = std::max(1, static_cast<int>(std::min(fit, 1e9)));
      break;
    }
    case Algorithm::cswgs: {
      const double sub =
          static_cast<double>(compressed_size(cost.active_count, compression)) * cost.spot_count;
      const double rest = ops - 2.0 * full;
      const double fit = rest < 0.0 ? 0.0 : std::floor(rest / sub);
      plan.iterations = 2 + static_cast<int>(std::min(fit, 1e9));
      break;
    }
  }
  plan.operations = predicted_operations(alg, plan.iterations, compression, cost.active_count,
                                         cost.spot_count);
  plan.over_budget = static_cast<double>(plan.operations) > ops;
  return plan;
}

namespace {

std::vector<double> target_amplitudes(const SpotSet& spots) {
  std::vector<double> a;
  a.reserve(spots.size());
  for (const auto& s : spots) a.push_back(s.amplitude);
  return a;
}

std::vector<double> random_phases(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<double> theta(n);
  for (auto& t : theta) t = kTwoPi * detail::uniform_unit(rng);
  return theta;
}

std::uint64_t full_ops(const Pupil& pupil, const SpotSet& spots) {
  return static_cast<std::uint64_t>(pupil.active_count()) * spots.size();
}

SolveResult run_weighted(const Pupil& pupil, const SpotSet& spots, int iterations,
                         std::size_t subset, std::uint64_t seed, const ExecPolicy& exec) {
  const int compressed = subset < pupil.active_count() ? iterations - 2 : 0;
  // Range of the forward projection of iteration j; each iteration superposes
  // the hologram exactly where the next one will read it.
  auto range_of = [&](int j) {
    return j < compressed ? PixelRange{0, subset} : pupil.full_range();
  };
  WgsState state = initial_state(pupil, spots, seed, range_of(0), exec);
  SolverTrace trace;
  trace.underdetermined = compressed > 0 && subset < spots.size();
  for (int j = 0; j < iterations; ++j) {
    const PixelRange range = range_of(j);
    const bool full = range.size() == pupil.active_count();
    IterationRecord rec = wgs_step(pupil, spots, state, range, range_of(j + 1), exec);
    trace.operations += static_cast<std::uint64_t>(range.size()) * spots.size();
    rec.cumulative_ops = trace.operations;
    trace.degenerate = trace.degenerate || rec.degenerate;
    if (full)
      ++trace.full_iterations;
    else
      ++trace.compressed_iterations;
    trace.iterations.push_back(std::move(rec));
  }
  return {Hologram(pupil, std::move(state.hologram)), std::move(trace)};
}

}  // namespace

bool reweight(std::span<double> weights, std::span<double> magnitudes) {
  if (weights.size() != magnitudes.size() || weights.empty())
    throw InvalidParameter("weights and magnitudes must have the same non-zero length");
  double smallest = std::numeric_limits<double>::infinity();
  for (double m : magnitudes) {
    if (m > 0.0) smallest = std::min(smallest, m);
  }
  bool degenerate = false;
  for (auto& m : magnitudes) {
    if (m > 0.0) continue;
    degenerate = true;
    m = std::isfinite(smallest) ? smallest * 1e-6 : 1.0;
  }
  double mean = 0.0;
  for (double m : magnitudes) mean += m;
  mean /= static_cast<double>(magnitudes.size());
  for (std::size_t n = 0; n < weights.size(); ++n) weights[n] *= mean / magnitudes[n];
  // Long runs on tiny subsets can drift the weights toward overflow. Only the
  // ratios matter, and a power-of-two rescale leaves every phase bit unchanged.
  const double top = *std::max_element(weights.begin(), weights.end());
  if (top > 0x1p256 || (top > 0.0 && top < 0x1p-256)) {
    const int shift = std::ilogb(top);
    for (double& w : weights) w = std::ldexp(w, -shift);
  }
  return degenerate;
}

SolveResult rs(const Pupil& pupil, const SpotSet& spots, std::uint64_t seed,
               const ExecPolicy& exec) {
  SpotCoefficients coeffs{target_amplitudes(spots), random_phases(spots.size(), seed)};
  std::vector<double> phase(pupil.active_count(), 0.0);
  superpose(pupil, spots, coeffs, pupil.full_range(), phase, exec);
  SolverTrace trace;
  trace.operations = full_ops(pupil, spots);
  return {Hologram(pupil, std::move(phase)), std::move(trace)};
}

WgsState initial_state(const Pupil& pupil, const SpotSet& spots, std::uint64_t seed,
                       const ExecPolicy& exec) {
  return initial_state(pupil, spots, seed, pupil.full_range(), exec);
}

WgsState initial_state(const Pupil& pupil, const SpotSet& spots, std::uint64_t seed,
                       PixelRange range, const ExecPolicy& exec) {
  WgsState state;
  state.weights.assign(spots.size(), 1.0);
  state.coeffs = {target_amplitudes(spots), random_phases(spots.size(), seed)};
  state.hologram.assign(pupil.active_count(), 0.0);
  state.phasors.emplace(pupil, spots);
  superpose(pupil, *state.phasors, state.coeffs, range, state.hologram, exec);
  return state;
}

IterationRecord wgs_step(const Pupil& pupil, const SpotSet& spots, WgsState& state,
                         PixelRange range, const ExecPolicy& exec) {
  return wgs_step(pupil, spots, state, range, range, exec);
}

IterationRecord wgs_step(const Pupil& pupil, const SpotSet& spots, WgsState& state,
                         PixelRange range, PixelRange update, const ExecPolicy& exec) {
  const std::size_t n = spots.size();
  if (state.weights.size() != n) throw InvalidParameter("solver state does not match spot count");
  state.coeffs.validate(n);
  if (!state.phasors || state.phasors->spot_count() != n) state.phasors.emplace(pupil, spots);

  const SpotFields fields = forward_project(pupil, state.hologram, *state.phasors, range, exec);

  IterationRecord rec;
  rec.subset_size = range.size();
  rec.magnitudes.resize(n);
  for (std::size_t s = 0; s < n; ++s) rec.magnitudes[s] = std::abs(fields[s]);
  rec.degenerate = reweight(state.weights, rec.magnitudes);

  for (std::size_t s = 0; s < n; ++s) {
    state.coeffs.amplitude[s] = state.weights[s] * spots[s].amplitude;
    const Complex e = fields[s];
    state.coeffs.phase[s] = (e.real() == 0.0 && e.imag() == 0.0) ? 0.0 : std::arg(e);
  }
  superpose(pupil, *state.phasors, state.coeffs, update, state.hologram, exec);
  rec.weights = state.weights;
  return rec;
}

SolveResult wgs(const Pupil& pupil, const SpotSet& spots, int iterations, std::uint64_t seed,
                const ExecPolicy& exec) {
  if (iterations < 1) throw InvalidParameter("WGS needs at least one iteration");
  return run_weighted(pupil, spots, iterations, pupil.active_count(), seed, exec);
}

SolveResult cswgs(const Pupil& pupil, const SpotSet& spots, int iterations, double compression,
                  std::uint64_t seed, const ExecPolicy& exec) {
  if (iterations < 2) throw InvalidParameter("CS-WGS needs at least two iterations");
  const std::size_t subset = compressed_size(pupil.active_count(), compression);
  return run_weighted(pupil, spots, iterations, subset, seed, exec);
}

SolveResult solve(const Pupil& pupil, const SpotSet& spots, const SolverConfig& config,
                  const ExecPolicy& exec, double ops_per_ms) {
  int iterations = config.iterations;
  bool over_budget = false;
  if (config.budget) {
    const BudgetPlan plan =
        plan_iterations(config.algorithm, config.compression,
                        {pupil.active_count(), spots.size(), ops_per_ms}, *config.budget);
    iterations = plan.iterations;
    over_budget = plan.over_budget;
  }
  SolveResult result = [&] {
    switch (config.algorithm) {
      case Algorithm::rs:
        return rs(pupil, spots, config.seed, exec);
      case Algorithm::wgs:
        return wgs(pupil, spots, iterations, config.seed, exec);
      case Algorithm::cswgs:
        return cswgs(pupil, spots, iterations, config.compression, config.seed, exec);
    }
    throw InvalidParameter("unknown algorithm");
  }();
  result.trace.over_budget = over_budget;
  return result;
}

}  // namespace holo
