#include "nvdac/calibration.hpp"

#include <cmath>
#include <string>

#include "nvdac/error.hpp"

namespace nvdac {

void RamanGaugeParams::validate() const {
  if (!(k0_gpa > 0.0) || !(nu0_cm > 0.0) || !std::isfinite(k0_prime))
    throw InvalidInput("Raman gauge needs k0 > 0, nu0 > 0 and finite k0'");
}

double raman_edge_to_pressure(double delta_nu_cm, const RamanGaugeParams& gauge) {
  gauge.validate();
  if (!(delta_nu_cm >= 0.0)) throw InvalidInput("Raman edge shift must be >= 0");
  const double x = delta_nu_cm / gauge.nu0_cm;
  return gauge.k0_gpa * x * (1.0 + 0.5 * (gauge.k0_prime - 1.0) * x);
}

double pressure_to_raman_edge(double pressure_gpa, const RamanGaugeParams& gauge) {
  gauge.validate();
  if (!(pressure_gpa >= 0.0)) throw InvalidInput("pressure must be >= 0");
  // Root of K0 x + K0 (K0'-1) x^2 / 2 = P, written without cancellation.
  const double k = gauge.k0_gpa;
  const double q = std::sqrt(k * k + 2.0 * k * (gauge.k0_prime - 1.0) * pressure_gpa);
  return gauge.nu0_cm * 2.0 * pressure_gpa / (k + q);
}

std::string_view to_string(EosForm form) {
  return form == EosForm::Vinet ? "vinet" : "birch-murnaghan-3";
}

EosForm eos_form_from_string(std::string_view name) {
  if (name == "vinet") return EosForm::Vinet;
  if (name == "birch-murnaghan-3") return EosForm::BirchMurnaghan3;
  throw InvalidInput("unsupported EOS form '" + std::string(name) + "'");
}

void EosParams::validate() const {
  if (!(v0 > 0.0) || !(bulk_modulus > 0.0) || !(bulk_modulus_derivative > 0.0))
    throw InvalidInput("EOS parameters must be positive");
}

namespace {

// Pressure and dP/dx at linear strain ratio x = (V/V0)^(1/3).
struct PressureSlope {
  double p;
  double dp_dx;
};

PressureSlope eos_at(double x, const EosParams& eos) {
  const double k = eos.bulk_modulus;
  const double kp = eos.bulk_modulus_derivative;
  if (eos.form == EosForm::Vinet) {
    const double eta = 1.5 * (kp - 1.0);
    const double ex = std::exp(eta * (1.0 - x));
    const double p = 3.0 * k * (1.0 - x) / (x * x) * ex;
    const double dp = 3.0 * k * ex *
                      (-1.0 / (x * x) - 2.0 * (1.0 - x) / (x * x * x) - eta * (1.0 - x) / (x * x));
    return {p, dp};
  }
  const double xi = 0.75 * (kp - 4.0);
  const double x2 = 1.0 / (x * x);
  const double x5 = std::pow(x, -5.0);
  const double x7 = std::pow(x, -7.0);
  const double bracket = 1.0 + xi * (x2 - 1.0);
  const double p = 1.5 * k * (x7 - x5) * bracket;
  const double dp = 1.5 * k * ((-7.0 * x7 / x + 5.0 * x5 / x) * bracket + (x7 - x5) * (-2.0 * xi * x2 / x));
  return {p, dp};
}

}  // namespace

double eos_volume_to_pressure(double volume, const EosParams& eos) {
  eos.validate();
  if (!(volume > 0.0)) throw InvalidInput("volume must be positive");
  return eos_at(std::cbrt(volume / eos.v0), eos).p;
}

double eos_pressure_to_volume(double pressure_gpa, const EosParams& eos) {
  eos.validate();
  if (!(pressure_gpa >= 0.0) || !std::isfinite(pressure_gpa))
    throw InvalidInput("pressure must be finite and >= 0");
  if (pressure_gpa == 0.0) return eos.v0;

  // Bracket in x: P(1) = 0 < p; shrink lo until P(lo) > p.
  double hi = 1.0;
  double lo = 0.9;
  while (eos_at(lo, eos).p <= pressure_gpa) {
    hi = lo;
    lo *= 0.9;
    if (lo < std::cbrt(0.05)) throw DomainError("EOS bracket failed: pressure out of range");
  }

  double x = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const PressureSlope ps = eos_at(x, eos);
    const double g = ps.p - pressure_gpa;
    if (g > 0.0) lo = x; else hi = x;
    double next = x - g / ps.dp_dx;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= 1e-16 * x) {
      x = next;
      break;
    }
    x = next;
  }
  return eos.v0 * x * x * x;
}

void GruneisenParams::validate() const {
  if (!(gamma > 0.0) || !(nu0_cm > 0.0)) throw InvalidInput("Grueneisen needs gamma > 0, nu0 > 0");
}

double gruneisen_shift(double v_over_v0, const GruneisenParams& g) {
  g.validate();
  if (!(v_over_v0 > 0.0 && v_over_v0 <= 1.0)) throw InvalidInput("V/V0 must lie in (0, 1]");
  return g.nu0_cm * (std::pow(v_over_v0, -g.gamma) - 1.0);
}

ZplLine ZplLine::preset(std::string_view name) {
  if (name == "micropillar") return micropillar();
  if (name == "standard") return standard_anvil();
  throw InvalidInput("unknown ZPL preset '" + std::string(name) + "'");
}

void ZplLine::validate() const {
  if (!std::isfinite(slope_mev_per_cm3mol) || !std::isfinite(intercept_mev) || !(v0 > 0.0))
    throw InvalidInput("ZPL line needs finite slope/intercept and v0 > 0");
}

double zpl_energy(double volume, const ZplLine& line) {
  line.validate();
  if (!(volume > 0.0)) throw InvalidInput("volume must be positive");
  return line.intercept_mev + line.slope_mev_per_cm3mol * (volume - line.v0);
}

double calibrate_a1(double center_shift_slope_mhz_per_gpa, double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.5)) throw InvalidInput("alpha must lie in (0, 1.5]");
  if (!(center_shift_slope_mhz_per_gpa > 0.0)) throw InvalidInput("slope must be positive");
  return center_shift_slope_mhz_per_gpa / (1.0 + 2.0 * alpha);
}

double calibrate_b(double splitting_slope_mhz_per_gpa, double alpha, double reference_b) {
  if (!(alpha > 0.0 && alpha <= 1.5) || alpha == 1.0)
    throw InvalidInput("alpha must lie in (0, 1.5] and differ from 1");
  if (!(splitting_slope_mhz_per_gpa >= 0.0)) throw InvalidInput("slope must be >= 0");
  const double magnitude = splitting_slope_mhz_per_gpa / (4.0 * std::abs(1.0 - alpha));
  return std::copysign(magnitude, reference_b);
}

StressCouplings slope_calibrated_couplings() {
  StressCouplings k;
  k.a1 = calibrate_a1(kPillarCenterSlope, kPillarAlpha);
  k.b = calibrate_b(kAnvilSplittingSlope, kAnvilAlpha, k.b);
  return k;
}

StressCouplings couplings_preset(std::string_view name) {
  if (name == "literature") return StressCouplings{};
  if (name == "slope-calibrated") return slope_calibrated_couplings();
  throw InvalidInput("unknown couplings preset '" + std::string(name) + "'");
}

}  // namespace nvdac
