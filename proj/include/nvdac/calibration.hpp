#pragma once

// Pressure-measurement chain for diamond: Raman edge gauge, equation of
// state, hydrostatic Grueneisen shift, NV zero-phonon-line vs volume, and
// calibration of the axial stress coupling against measured slopes.

#include <string>
#include <string_view>

#include "nvdac/spin_model.hpp"

namespace nvdac {

/// Second-order edge scale P = K0 x (1 + (K0' - 1) x / 2), x = dnu / nu0.
struct RamanGaugeParams {
  double k0_gpa = 547.0;
  double k0_prime = 3.75;
  double nu0_cm = 1333.0;

  void validate() const;
};

double raman_edge_to_pressure(double delta_nu_cm, const RamanGaugeParams& gauge);
double pressure_to_raman_edge(double pressure_gpa, const RamanGaugeParams& gauge);

enum class EosForm { Vinet, BirchMurnaghan3 };

std::string_view to_string(EosForm form);
EosForm eos_form_from_string(std::string_view name);

/// Diamond defaults; volumes in cm^3/mol.
struct EosParams {
  double v0 = 3.417;
  double bulk_modulus = 446.0;
  double bulk_modulus_derivative = 3.0;
  EosForm form = EosForm::Vinet;

  void validate() const;
};

double eos_volume_to_pressure(double volume, const EosParams& eos);
/// Inverts the EOS by bracketed Newton iteration. Throws DomainError when
/// no compression down to 5% of V0 reaches the requested pressure.
double eos_pressure_to_volume(double pressure_gpa, const EosParams& eos);

struct GruneisenParams {
  double gamma = 0.97;
  double nu0_cm = 1333.0;

  void validate() const;
};

/// nu0 ((V/V0)^-gamma - 1), cm^-1.
double gruneisen_shift(double v_over_v0, const GruneisenParams& g);

/// E(V) = intercept + slope (V - V0), meV with V in cm^3/mol.
struct ZplLine {
  double slope_mev_per_cm3mol = -769.0;
  double intercept_mev = 1945.0;
  double v0 = 3.417;

  static ZplLine micropillar() { return {-769.0, 1945.0, 3.417}; }
  static ZplLine standard_anvil() { return {-434.0, 1945.0, 3.417}; }
  static ZplLine preset(std::string_view name);
  void validate() const;
};

double zpl_energy(double volume, const ZplLine& line);

/// a1 from a centre-shift slope: the zero-field centre moves by
/// a1 (1 + 2 alpha) per GPa for the diagonal anvil stress.
double calibrate_a1(double center_shift_slope_mhz_per_gpa, double alpha);

/// b from a zero-field splitting slope: Delta_sigma = 4 |b| |1 - alpha| P
/// for the diagonal anvil stress, c drops out. The sign of reference_b is kept.
double calibrate_b(double splitting_slope_mhz_per_gpa, double alpha, double reference_b = -2.3);

/// Micropillar centre-shift slope and its alpha.
inline constexpr double kPillarCenterSlope = 13.42;
inline constexpr double kPillarAlpha = 0.95;
/// Standard-anvil zero-field splitting slope and its alpha.
inline constexpr double kAnvilSplittingSlope = 3.89;
inline constexpr double kAnvilAlpha = 0.56;

/// Literature couplings with a1 refit to the micropillar centre shift and b
/// refit to the standard-anvil splitting slope.
StressCouplings slope_calibrated_couplings();

/// Couplings preset by name: "literature" or "slope-calibrated".
StressCouplings couplings_preset(std::string_view name);

}  // namespace nvdac
