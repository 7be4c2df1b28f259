#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "holo/exec.hpp"
#include "holo/optics.hpp"

namespace holo {

struct QualityReport {
  double efficiency = 0.0;
  double uniformity = 0.0;
  std::vector<double> intensities;           // I_n = |E_n|^2 / (sum A)^2
  std::vector<double> relative_intensities;  // I_n / |a_n^0|^2
  int iterations = 0;
  std::uint64_t operations = 0;
  double wall_ms = 0.0;
};

/// Normalized spot intensities from a full-pupil forward projection. A
/// conjugate single-spot hologram scores exactly 1.
std::vector<double> spot_intensities(const Pupil& pupil, const Hologram& hologram,
                                     const SpotSet& spots, const ExecPolicy& exec = {});

double efficiency(std::span<const double> intensities);

/// 1 - (max - min) / (max + min). Throws UndefinedUniformity when all zero.
double uniformity(std::span<const double> intensities);

std::vector<double> relative_intensities(std::span<const double> intensities, const SpotSet& spots);

QualityReport evaluate(const Pupil& pupil, const Hologram& hologram, const SpotSet& spots,
                       const ExecPolicy& exec = {});

}  // namespace holo
