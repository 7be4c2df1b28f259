#include "holo/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "holo/error.hpp"
#include "holo/kernels.hpp"

namespace holo {

std::vector<double> spot_intensities(const Pupil& pupil, const Hologram& hologram,
                                     const SpotSet& spots, const ExecPolicy& exec) {
  hologram.require_matches(pupil);
  const double total = pupil.amplitude_sum();
  if (!(total > 0.0)) throw InvalidPupil("pupil illumination sums to zero");
  const SpotFields fields = forward_project(pupil, hologram, spots, pupil.full_range(), exec);
  std::vector<double> out(fields.size());
  const double norm = total * total;
  for (std::size_t n = 0; n < fields.size(); ++n) out[n] = std::norm(fields[n]) / norm;
  return out;
}

double efficiency(std::span<const double> intensities) {
  if (intensities.empty()) throw InvalidParameter("efficiency of an empty intensity list");
  double e = 0.0;
  for (double v : intensities) e += v;
  return e;
}

double uniformity(std::span<const double> intensities) {
  if (intensities.empty()) throw InvalidParameter("uniformity of an empty intensity list");
  const auto [lo, hi] = std::minmax_element(intensities.begin(), intensities.end());
  if (*lo < 0.0) throw InvalidParameter("intensities must be non-negative");
  if (*hi == 0.0) throw UndefinedUniformity("uniformity is undefined for all-zero intensities");
  if (*hi == *lo) return 1.0;
  return 1.0 - (*hi - *lo) / (*hi + *lo);
}

std::vector<double> relative_intensities(std::span<const double> intensities,
                                         const SpotSet& spots) {
  if (intensities.size() != spots.size())
    throw InvalidParameter("intensity count does not match spot count");
  std::vector<double> out(intensities.size());
  for (std::size_t n = 0; n < out.size(); ++n)
    out[n] = intensities[n] / (spots[n].amplitude * spots[n].amplitude);
  return out;
}

QualityReport evaluate(const Pupil& pupil, const Hologram& hologram, const SpotSet& spots,
                       const ExecPolicy& exec) {
  QualityReport r;
  r.intensities = spot_intensities(pupil, hologram, spots, exec);
  r.relative_intensities = relative_intensities(r.intensities, spots);
  r.efficiency = efficiency(r.intensities);
  r.uniformity = uniformity(r.relative_intensities);
  return r;
}

}  // namespace holo
