#pragma once

// Forward model: cw-ODMR spectra and field-sweep maps built from transition
// frequencies with Lorentzian lines and signed contrast.

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "nvdac/frames.hpp"
#include "nvdac/spin_model.hpp"

namespace nvdac {

/// Contrast is signed: negative is a PL dip, positive a PL increase.
/// The lower and upper branches of each pair may carry different contrast.
struct LineshapeParams {
  double linewidth_fwhm_mhz = 10.0;
  double contrast_lower = -0.05;
  double contrast_upper = -0.05;
  double baseline = 1.0;

  static LineshapeParams uniform(double fwhm_mhz, double contrast, double baseline = 1.0) {
    return {fwhm_mhz, contrast, contrast, baseline};
  }
  void validate() const;
};

struct FrequencyGrid {
  double start_mhz = 2600.0;
  double stop_mhz = 5200.0;
  double step_mhz = 1.0;

  void validate() const;
  std::vector<double> points() const;
};

struct ODMRSpectrum {
  std::vector<double> frequencies_mhz;
  std::vector<double> pl;

  /// Equal lengths, >= 2 points, strictly increasing frequencies.
  void validate() const;
  std::size_t size() const { return pl.size(); }
};

struct MapMetadata {
  double alpha = 1.0;
  double pressure_gpa = 0.0;
  LineshapeParams lineshape;
};

struct ODMRMap {
  std::vector<double> field_values_mt;
  std::vector<ODMRSpectrum> spectra;
  MapMetadata metadata;

  void validate() const;
};

/// Transition pairs of the four NV orientations under a common stress and field.
std::array<TransitionPair, 4> orientation_transitions(const ZfsParams& params,
                                                      const StressCouplings& couplings,
                                                      const StressTensor& stress,
                                                      const LabField& field);

/// pl(f) = baseline + sum_i contrast_i w^2 / ((f - f_i)^2 + w^2), w = fwhm/2,
/// summed over both branches of every pair.
ODMRSpectrum synthesize_spectrum(std::span<const TransitionPair> pairs,
                                 const LineshapeParams& shape,
                                 std::span<const double> grid_mhz);

/// Field sweep along field_direction at anvil stress (alpha, P). The four
/// orientations are equally populated, so each contributes a quarter of the
/// configured ensemble contrast.
ODMRMap synthesize_map(double alpha, double pressure_gpa, std::span<const double> field_sweep_mt,
                       const LineshapeParams& shape, const FrequencyGrid& grid,
                       const ZfsParams& params, const StressCouplings& couplings,
                       const Vec3& field_direction = anvil_axis());

/// I.i.d. Gaussian noise on pl. Same seed, same output.
ODMRSpectrum add_noise(const ODMRSpectrum& spectrum, double sigma, std::uint64_t seed);

}  // namespace nvdac
