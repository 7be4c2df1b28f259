#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "holo/exec.hpp"
#include "holo/optics.hpp"

namespace holo {

using Complex = std::complex<double>;

// Per-spot amplitude a_n and phase delay theta_n driving the superposition.
struct SpotCoefficients {
  std::vector<double> amplitude;
  std::vector<double> phase;

  void validate(std::size_t spot_count) const;
};

// Complex field E_n at each spot, in units of summed illumination amplitude.
using SpotFields = std::vector<Complex>;

/// exp(i phi_n) for every spot, factored into a column term X_n(col) and a row
/// term Y_n(row) so that phi_n is rebuilt per pixel from O(N * side) values
/// instead of an O(N * M) table. Planes are [pixel index][spot], real and
/// imaginary parts separate.
class SpotPhasors {
 public:
  SpotPhasors(const Pupil& pupil, const SpotSet& spots);

  std::size_t spot_count() const { return spots_; }
  const GeometryKey& geometry() const { return geometry_; }

  std::vector<double> x_re, x_im, y_re, y_im;

 private:
  std::size_t spots_ = 0;
  GeometryKey geometry_;
};

/// Hologram phase as the argument of the coefficient-weighted sum of spot
/// phasors, for every storage index in `range`. Writes `phase[s]` for s in
/// range; `phase` spans the whole pupil. A sum no larger than its rounding
/// bound, N * eps * sum(a_n), counts as zero and yields 0.
///
/// Spot phases are evaluated on the fly from per-spot separable row and
/// column factors, never stored per pixel.
void superpose(const Pupil& pupil, const SpotSet& spots, const SpotCoefficients& coeffs,
               PixelRange range, std::span<double> phase, const ExecPolicy& exec = {});

void superpose(const Pupil& pupil, const SpotPhasors& phasors, const SpotCoefficients& coeffs,
               PixelRange range, std::span<double> phase, const ExecPolicy& exec = {});

/// Same as above, returning only the values for `range`.
std::vector<double> superpose(const Pupil& pupil, const SpotSet& spots,
                              const SpotCoefficients& coeffs, PixelRange range,
                              const ExecPolicy& exec = {});

/// Field at every spot, E_n = sum over range of A exp(-i (phase - phi_n)),
/// summed with the chunked tree of reduce_complex. `phase` must cover the
/// whole pupil in storage order.
SpotFields forward_project(const Pupil& pupil, std::span<const double> phase,
                           const SpotSet& spots, PixelRange range, const ExecPolicy& exec = {});
SpotFields forward_project(const Pupil& pupil, const Hologram& hologram, const SpotSet& spots,
                           PixelRange range, const ExecPolicy& exec = {});
SpotFields forward_project(const Pupil& pupil, std::span<const double> phase,
                           const SpotPhasors& phasors, PixelRange range,
                           const ExecPolicy& exec = {});

/// Fixed-shape tree sum. Each pass splits the sequence into contiguous chunks,
/// sums every chunk left to right starting from +0, and repeats on the
/// partial sums until one value is left. The shape depends only on the
/// length and `chunk`, so the result is bit-identical for any thread count.
/// A chunk of 1 reduces pairwise.
Complex reduce_complex(std::span<const Complex> values, std::size_t chunk, int threads = 1);

}  // namespace holo
