#pragma once

// Inverse problems: resonance extraction from spectra, (alpha, P) from a
// field sweep, and field magnitude from a single pair at known stress.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nvdac/frames.hpp"
#include "nvdac/least_squares.hpp"
#include "nvdac/spectra.hpp"
#include "nvdac/spin_model.hpp"

namespace nvdac {

struct PeakSet {
  std::vector<double> centers_mhz;  // ascending
  std::vector<double> depths;       // signed contrast
  std::vector<double> widths_mhz;   // FWHM
  double baseline = 1.0;
  double residual_rms = 0.0;
  bool converged = false;
};

struct PeakExtractionOptions {
  LeastSquaresOptions lsq;
  // A non-converged fit is rejected when its rms residual exceeds this
  // fraction of the largest fitted |depth|.
  double max_residual_fraction = 0.5;
};

/// Multi-Lorentzian fit of 1 or 2 lines on a common baseline.
/// Throws NoConvergence (best-effort parameters attached) on divergence.
PeakSet extract_peaks(const ODMRSpectrum& spectrum, int expected_count,
                      const PeakExtractionOptions& options = {});

/// Measured pair at one applied field magnitude.
struct FieldPoint {
  double field_mt = 0.0;
  TransitionPair pair;
};

struct StressFitOptions {
  std::optional<double> alpha0;     // default 0.8
  std::optional<double> pressure0;  // default from the lowest-field centre shift
  Vec3 field_direction = anvil_axis();
  LeastSquaresOptions lsq;
};

struct StressFitResult {
  double alpha = 0.0;
  double pressure_gpa = 0.0;
  double alpha_sigma = 0.0;      // +inf when unidentifiable
  double pressure_sigma = 0.0;
  double residual_rms_mhz = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> cost_history;
  std::vector<TransitionPair> model_pairs;
};

/// Model pair for anvil stress (alpha, P) and field B along direction,
/// evaluated on the [111] frame.
TransitionPair model_pair(double alpha, double pressure_gpa, double field_mt,
                          const ZfsParams& params, const StressCouplings& couplings,
                          const Vec3& direction = anvil_axis());

/// Least squares over (alpha, P) driven by the full diagonalization.
/// Needs at least two distinct field values.
StressFitResult fit_stress(std::span<const FieldPoint> points, const ZfsParams& params,
                           const StressCouplings& couplings, const StressFitOptions& options = {});

struct FieldFitOptions {
  // Splittings this far below the zero-field stress splitting are rejected.
  double consistency_tol_mhz = 1.0;
  Vec3 direction = anvil_axis();
  LeastSquaresOptions lsq;
};

struct FieldFitResult {
  double b_magnitude_mt = 0.0;
  double uncertainty_mt = 0.0;
  double residual_rms_mhz = 0.0;
  bool converged = false;
  TransitionPair model;
};

/// One-dimensional least squares over B >= 0 at known (alpha, P).
/// Throws InconsistentInput when the measured splitting is below the
/// zero-field stress splitting by more than the tolerance.
FieldFitResult fit_field(const TransitionPair& measured, double alpha, double pressure_gpa,
                         const ZfsParams& params, const StressCouplings& couplings,
                         const FieldFitOptions& options = {});

/// Shot-noise cw-ODMR sensitivity
///   eta = kSensitivityPrefactor * fwhm / (|C| sqrt(R) dDelta/dB)
/// with C the mean branch contrast magnitude. The prefactor 8/(3 sqrt3) is
/// the inverse steepest slope of a unit Lorentzian in units of its FWHM,
/// times 2 because each line moves by half the splitting change.
inline constexpr double kSensitivityPrefactor = 1.5396007178390020;  // 8 / (3 sqrt 3)

struct SensitivityEstimate {
  double eta_mt_per_sqrt_hz = 0.0;
  bool finite = true;
  std::string note;
};

SensitivityEstimate sensitivity_estimate(const LineshapeParams& shape, double photon_rate,
                                         double d_splitting_d_b);

/// dDelta/dB of the full model at (alpha, P, B), MHz/mT, central difference.
double splitting_slope(double alpha, double pressure_gpa, double field_mt,
                       const ZfsParams& params, const StressCouplings& couplings,
                       const Vec3& direction = anvil_axis());

}  // namespace nvdac
