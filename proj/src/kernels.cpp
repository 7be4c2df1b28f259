#include "holo/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "holo/error.hpp"

namespace holo {

void SpotCoefficients::validate(std::size_t spot_count) const {
  if (amplitude.size() != spot_count || phase.size() != spot_count)
    throw InvalidParameter("spot coefficient count does not match spot count");
  for (double a : amplitude) {
    if (!(a >= 0.0)) throw InvalidParameter("spot amplitudes must be non-negative");
  }
}

SpotPhasors::SpotPhasors(const Pupil& pupil, const SpotSet& spots)
    : spots_(spots.size()), geometry_(pupil.geometry()) {
  const std::size_t n = spots.size();
  const auto side = static_cast<std::size_t>(pupil.side_px());
  const double k_prism = kTwoPi / (pupil.wavelength() * pupil.focal_length());
  const double k_lens = k_prism / pupil.focal_length();
  x_re.resize(side * n);
  x_im.resize(side * n);
  y_re.resize(side * n);
  y_im.resize(side * n);
  const auto coords = pupil.coordinates();
  for (std::size_t i = 0; i < side; ++i) {
    const double c = coords[i];
    for (std::size_t s = 0; s < n; ++s) {
      const Spot& spot = spots[s];
      const double px = k_prism * (spot.x * c) + k_lens * (c * c) * spot.z;
      const double py = k_prism * (spot.y * c) + k_lens * (c * c) * spot.z;
      x_re[i * n + s] = std::cos(px);
      x_im[i * n + s] = std::sin(px);
      y_re[i * n + s] = std::cos(py);
      y_im[i * n + s] = std::sin(py);
    }
  }
}

namespace {

void check_range(const Pupil& pupil, PixelRange range) {
  if (range.begin > range.end || range.end > pupil.active_count())
    throw InvalidParameter("pixel range outside the pupil");
}

void check_phasors(const Pupil& pupil, const SpotPhasors& phasors) {
  if (!(phasors.geometry() == pupil.geometry()))
    throw GeometryMismatch("spot phasors were built for a different pupil");
}

}  // namespace

void superpose(const Pupil& pupil, const SpotSet& spots, const SpotCoefficients& coeffs,
               PixelRange range, std::span<double> phase, const ExecPolicy& exec) {
  superpose(pupil, SpotPhasors(pupil, spots), coeffs, range, phase, exec);
}

void superpose(const Pupil& pupil, const SpotPhasors& phasors, const SpotCoefficients& coeffs,
               PixelRange range, std::span<double> phase, const ExecPolicy& exec) {
  const std::size_t n = phasors.spot_count();
  coeffs.validate(n);
  check_phasors(pupil, phasors);
  check_range(pupil, range);
  if (phase.size() != pupil.active_count())
    throw GeometryMismatch("phase buffer does not match the pupil");

  std::vector<double> c_re(n), c_im(n);
  double amp_total = 0.0;
  for (double a : coeffs.amplitude) amp_total += a;
  // Sums below their own rounding bound are zero: phase 0.
  const double zero_bound = static_cast<double>(n) * std::numeric_limits<double>::epsilon() * amp_total;
  const double zero_bound2 = zero_bound * zero_bound;
  for (std::size_t s = 0; s < n; ++s) {
    // Exact reduction, so theta and theta + 2pi give the same phasor whenever
    // the caller's addition was exact.
    const double theta = std::remainder(coeffs.phase[s], kTwoPi);
    c_re[s] = coeffs.amplitude[s] * std::cos(theta);
    c_im[s] = coeffs.amplitude[s] * std::sin(theta);
  }
  // Fold a_n exp(i theta_n) into the column factors.
  const std::size_t side = static_cast<std::size_t>(pupil.side_px());
  std::vector<double> xr_s(side * n), xi_s(side * n);
  for (std::size_t i = 0; i < side; ++i) {
    for (std::size_t s = 0; s < n; ++s) {
      const double xr = phasors.x_re[i * n + s], xi = phasors.x_im[i * n + s];
      xr_s[i * n + s] = c_re[s] * xr - c_im[s] * xi;
      xi_s[i * n + s] = c_re[s] * xi + c_im[s] * xr;
    }
  }
  const auto cols = pupil.cols();
  const auto rows = pupil.rows();
  const auto begin = static_cast<std::ptrdiff_t>(range.begin);
  const auto end = static_cast<std::ptrdiff_t>(range.end);

#pragma omp parallel for schedule(static) num_threads(exec.threads) if (exec.threads > 1)
  for (std::ptrdiff_t p = begin; p < end; ++p) {
    const double* xr = &xr_s[cols[p] * n];
    const double* xi = &xi_s[cols[p] * n];
    const double* yr = &phasors.y_re[rows[p] * n];
    const double* yi = &phasors.y_im[rows[p] * n];
    double sr = 0.0, si = 0.0;
    for (std::size_t s = 0; s < n; ++s) {
      sr += xr[s] * yr[s] - xi[s] * yi[s];
      si += xr[s] * yi[s] + xi[s] * yr[s];
    }
    double arg = (sr * sr + si * si <= zero_bound2) ? 0.0 : std::atan2(si, sr);
    if (arg >= kPi) arg = -kPi;
    phase[static_cast<std::size_t>(p)] = arg;
  }
}

std::vector<double> superpose(const Pupil& pupil, const SpotSet& spots,
                              const SpotCoefficients& coeffs, PixelRange range,
                              const ExecPolicy& exec) {
  check_range(pupil, range);
  std::vector<double> full(pupil.active_count(), 0.0);
  superpose(pupil, spots, coeffs, range, full, exec);
  return {full.begin() + static_cast<std::ptrdiff_t>(range.begin),
          full.begin() + static_cast<std::ptrdiff_t>(range.end)};
}

Complex reduce_complex(std::span<const Complex> values, std::size_t chunk, int threads) {
  if (chunk == 0) throw InvalidParameter("reduction chunk must be at least 1");
  if (values.empty()) return {0.0, 0.0};
  std::vector<Complex> level(values.begin(), values.end());
  // Chunks of one would never shrink the tree; those passes go pairwise.
  chunk = std::max<std::size_t>(chunk, 2);
  while (level.size() > 1) {
    const std::size_t groups = (level.size() + chunk - 1) / chunk;
    std::vector<Complex> next(groups);
    const auto g_end = static_cast<std::ptrdiff_t>(groups);
#pragma omp parallel for schedule(static) num_threads(threads) if (threads > 1)
    for (std::ptrdiff_t g = 0; g < g_end; ++g) {
      const std::size_t lo = static_cast<std::size_t>(g) * chunk;
      const std::size_t hi = std::min(level.size(), lo + chunk);
      double re = 0.0, im = 0.0;
      for (std::size_t i = lo; i < hi; ++i) {
        re += level[i].real();
        im += level[i].imag();
      }
      next[static_cast<std::size_t>(g)] = {re, im};
    }
    level = std::move(next);
  }
  // A single input still passes through one chunk sum, matching the kernels.
  if (values.size() == 1) return {0.0 + values[0].real(), 0.0 + values[0].imag()};
  return level[0];
}

SpotFields forward_project(const Pupil& pupil, std::span<const double> phase,
                           const SpotSet& spots, PixelRange range, const ExecPolicy& exec) {
  return forward_project(pupil, phase, SpotPhasors(pupil, spots), range, exec);
}

SpotFields forward_project(const Pupil& pupil, std::span<const double> phase,
                           const SpotPhasors& t, PixelRange range, const ExecPolicy& exec) {
  check_phasors(pupil, t);
  if (phase.size() != pupil.active_count())
    throw GeometryMismatch("hologram length does not match the pupil");
  check_range(pupil, range);
  if (exec.chunk == 0) throw InvalidParameter("reduction chunk must be at least 1");

  const std::size_t n = t.spot_count();
  if (range.empty()) return SpotFields(n, Complex{0.0, 0.0});

  const auto cols = pupil.cols();
  const auto rows = pupil.rows();
  const auto amp = pupil.amplitudes();
  const std::size_t chunk = exec.chunk;
  const std::size_t groups = (range.size() + chunk - 1) / chunk;
  std::vector<double> part_re(groups * n), part_im(groups * n);
  const auto g_end = static_cast<std::ptrdiff_t>(groups);

#pragma omp parallel num_threads(exec.threads) if (exec.threads > 1)
  {
    std::vector<double> acc_re(n), acc_im(n);
#pragma omp for schedule(static)
    for (std::ptrdiff_t g = 0; g < g_end; ++g) {
      std::fill(acc_re.begin(), acc_re.end(), 0.0);
      std::fill(acc_im.begin(), acc_im.end(), 0.0);
      const std::size_t lo = range.begin + static_cast<std::size_t>(g) * chunk;
      const std::size_t hi = std::min(range.end, lo + chunk);
      for (std::size_t p = lo; p < hi; ++p) {
        const double ur = amp[p] * std::cos(phase[p]);
        const double ui = -amp[p] * std::sin(phase[p]);
        const double* xr = &t.x_re[cols[p] * n];
        const double* xi = &t.x_im[cols[p] * n];
        const double* yr = &t.y_re[rows[p] * n];
        const double* yi = &t.y_im[rows[p] * n];
        double* ar = acc_re.data();
        double* ai = acc_im.data();
        for (std::size_t s = 0; s < n; ++s) {
          const double wr = ur * xr[s] - ui * xi[s];
          const double wi = ur * xi[s] + ui * xr[s];
          ar[s] += wr * yr[s] - wi * yi[s];
          ai[s] += wr * yi[s] + wi * yr[s];
        }
      }
      std::copy(acc_re.begin(), acc_re.end(), part_re.begin() + g * static_cast<std::ptrdiff_t>(n));
      std::copy(acc_im.begin(), acc_im.end(), part_im.begin() + g * static_cast<std::ptrdiff_t>(n));
    }
  }

  SpotFields fields(n);
  if (groups == 1) {
    for (std::size_t s = 0; s < n; ++s) fields[s] = {part_re[s], part_im[s]};
    return fields;
  }
  std::vector<Complex> partials(groups);
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t g = 0; g < groups; ++g) partials[g] = {part_re[g * n + s], part_im[g * n + s]};
    fields[s] = reduce_complex(partials, chunk, 1);
  }
  return fields;
}

SpotFields forward_project(const Pupil& pupil, const Hologram& hologram, const SpotSet& spots,
                           PixelRange range, const ExecPolicy& exec) {
  hologram.require_matches(pupil);
  return forward_project(pupil, hologram.phase(), spots, range, exec);
}

}  // namespace holo
