#include "nvdac/spectra.hpp"

#include <cmath>
#include <random>

#include "nvdac/error.hpp"

namespace nvdac {

void LineshapeParams::validate() const {
  if (!(linewidth_fwhm_mhz > 0.0) || !std::isfinite(linewidth_fwhm_mhz))
    throw InvalidInput("linewidth_fwhm must be positive");
  if (!(std::abs(contrast_lower) < 1.0) || !(std::abs(contrast_upper) < 1.0))
    throw InvalidInput("|contrast| must be below 1");
  if (!std::isfinite(baseline)) throw InvalidInput("baseline must be finite");
}

void FrequencyGrid::validate() const {
  if (!std::isfinite(start_mhz) || !std::isfinite(stop_mhz) || !(step_mhz > 0.0))
    throw InvalidInput("grid needs finite bounds and a positive step");
  if (!(stop_mhz > start_mhz)) throw InvalidInput("grid stop must exceed start");
}

std::vector<double> FrequencyGrid::points() const {
  validate();
  // Index-based so the grid is reproducible without accumulated round-off.
  const auto n = static_cast<std::size_t>(std::floor((stop_mhz - start_mhz) / step_mhz + 1e-9)) + 1;
  std::vector<double> f(n);
  for (std::size_t i = 0; i < n; ++i) f[i] = start_mhz + static_cast<double>(i) * step_mhz;
  return f;
}

void ODMRSpectrum::validate() const {
  if (frequencies_mhz.size() != pl.size())
    throw InvalidInput("spectrum frequency and pl lengths differ");
  if (frequencies_mhz.size() < 2) throw InvalidInput("spectrum needs at least two points");
  for (std::size_t i = 1; i < frequencies_mhz.size(); ++i)
    if (!(frequencies_mhz[i] > frequencies_mhz[i - 1]))
      throw InvalidInput("spectrum frequencies must be strictly increasing");
}

void ODMRMap::validate() const {
  if (field_values_mt.size() != spectra.size())
    throw InvalidInput("map needs one spectrum per field value");
  for (std::size_t i = 1; i < field_values_mt.size(); ++i)
    if (field_values_mt[i] < field_values_mt[i - 1])
      throw InvalidInput("map field values must be ascending");
  for (const auto& s : spectra) {
    s.validate();
    if (s.frequencies_mhz != spectra.front().frequencies_mhz)
      throw InvalidInput("map spectra must share one frequency grid");
  }
}

std::array<TransitionPair, 4> orientation_transitions(const ZfsParams& params,
                                                      const StressCouplings& couplings,
                                                      const StressTensor& stress,
                                                      const LabField& field) {
  std::array<TransitionPair, 4> pairs;
  const auto& frames = nv_orientations();
  for (std::size_t k = 0; k < frames.size(); ++k)
    pairs[k] = nv_transitions(params, couplings, to_nv_frame(frames[k], stress, field));
  return pairs;
}

ODMRSpectrum synthesize_spectrum(std::span<const TransitionPair> pairs,
                                 const LineshapeParams& shape,
                                 std::span<const double> grid_mhz) {
  shape.validate();
  ODMRSpectrum out;
  out.frequencies_mhz.assign(grid_mhz.begin(), grid_mhz.end());
  out.pl.assign(grid_mhz.size(), shape.baseline);
  if (grid_mhz.size() < 2) throw InvalidInput("grid needs at least two points");
  for (std::size_t i = 1; i < grid_mhz.size(); ++i)
    if (!(grid_mhz[i] > grid_mhz[i - 1])) throw InvalidInput("grid must be ascending");

  const double w = 0.5 * shape.linewidth_fwhm_mhz;
  const double w2 = w * w;
  for (const auto& p : pairs) {
    for (std::size_t i = 0; i < grid_mhz.size(); ++i) {
      const double dl = grid_mhz[i] - p.nu_minus;
      const double du = grid_mhz[i] - p.nu_plus;
      out.pl[i] += shape.contrast_lower * w2 / (dl * dl + w2)
                 + shape.contrast_upper * w2 / (du * du + w2);
    }
  }
  return out;
}

ODMRMap synthesize_map(double alpha, double pressure_gpa, std::span<const double> field_sweep_mt,
                       const LineshapeParams& shape, const FrequencyGrid& grid,
                       const ZfsParams& params, const StressCouplings& couplings,
                       const Vec3& field_direction) {
  shape.validate();
  const StressTensor stress = anvil_stress({alpha, pressure_gpa});
  const std::vector<double> freqs = grid.points();

  LineshapeParams per_orientation = shape;
  per_orientation.contrast_lower /= 4.0;
  per_orientation.contrast_upper /= 4.0;

  ODMRMap map;
  map.metadata = {alpha, pressure_gpa, shape};
  map.field_values_mt.assign(field_sweep_mt.begin(), field_sweep_mt.end());
  for (std::size_t i = 1; i < map.field_values_mt.size(); ++i)
    if (map.field_values_mt[i] < map.field_values_mt[i - 1])
      throw InvalidInput("field sweep must be ascending");

  map.spectra.reserve(field_sweep_mt.size());
  for (double b : field_sweep_mt) {
    const LabField field{b, field_direction};
    const auto pairs = orientation_transitions(params, couplings, stress, field);
    map.spectra.push_back(synthesize_spectrum(pairs, per_orientation, freqs));
  }
  return map;
}

ODMRSpectrum add_noise(const ODMRSpectrum& spectrum, double sigma, std::uint64_t seed) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw InvalidInput("sigma must be >= 0");
  ODMRSpectrum out = spectrum;
  if (sigma == 0.0) return out;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, sigma);
  for (double& v : out.pl) v += noise(rng);
  return out;
}

}  // namespace nvdac
