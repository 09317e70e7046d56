#include "nvdac/inversion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "nvdac/error.hpp"

namespace nvdac {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double median(std::vector<double> v) {
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  return *mid;
}

std::vector<double> moving_average(const std::vector<double>& y, int half) {
  const auto n = static_cast<int>(y.size());
  std::vector<double> prefix(y.size() + 1, 0.0);
  for (int i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + y[i];
  std::vector<double> out(y.size());
  for (int i = 0; i < n; ++i) {
    const int lo = std::max(0, i - half);
    const int hi = std::min(n - 1, i + half);
    out[i] = (prefix[hi + 1] - prefix[lo]) / static_cast<double>(hi - lo + 1);
  }
  return out;
}

// Local maxima of y from sign changes of its smoothed central derivative.
std::vector<int> derivative_maxima(const std::vector<double>& y) {
  std::vector<int> out;
  const auto n = static_cast<int>(y.size());
  double prev = 0.0;
  for (int i = 1; i + 1 < n; ++i) {
    const double d = y[i + 1] - y[i - 1];
    if (prev > 0.0 && d <= 0.0) out.push_back(y[i] >= y[i - 1] ? i : i - 1);
    if (d != 0.0) prev = d;
  }
  return out;
}

// Full width at half maximum of the peak at index top, walking outward.
double half_max_width(const std::vector<double>& f, const std::vector<double>& y, int top) {
  const double half = 0.5 * y[top];
  int lo = top;
  while (lo > 0 && y[lo] > half) --lo;
  int hi = top;
  while (hi + 1 < static_cast<int>(y.size()) && y[hi] > half) ++hi;
  return std::max(f[hi] - f[lo], f[1] - f[0]);
}

double lorentz(double f, double centre, double fwhm) {
  const double w = 0.5 * fwhm;
  const double d = f - centre;
  return w * w / (d * d + w * w);
}

struct PeakLayout {
  int count = 1;
  bool shared_width = false;

  Eigen::Index size() const { return shared_width ? 2 + 2 * count : 1 + 3 * count; }
  Eigen::Index centre(int k) const { return shared_width ? 1 + 2 * k : 1 + 3 * k; }
  Eigen::Index depth(int k) const { return centre(k) + 1; }
  Eigen::Index width(int k) const { return shared_width ? 1 + 2 * count : centre(k) + 2; }
};

}  // namespace

PeakSet extract_peaks(const ODMRSpectrum& spectrum, int expected_count,
                      const PeakExtractionOptions& options) {
  spectrum.validate();
  if (expected_count != 1 && expected_count != 2)
    throw InvalidInput("expected_count must be 1 or 2");

  const std::vector<double>& f = spectrum.frequencies_mhz;
  const auto n = static_cast<int>(f.size());
  if (n <= 3 * expected_count + 1)
    throw InvalidInput("spectrum has too few points for " + std::to_string(expected_count) + " peaks");
  const double span = f.back() - f.front();
  const double df = span / static_cast<double>(n - 1);

  const double base0 = median(spectrum.pl);
  std::vector<double> dev(spectrum.pl.size());
  std::transform(spectrum.pl.begin(), spectrum.pl.end(), dev.begin(),
                 [base0](double v) { return v - base0; });

  // Coarse pass: sign of the dominant feature and its width.
  std::vector<double> smooth = moving_average(dev, 2);
  const auto extreme = std::max_element(smooth.begin(), smooth.end(),
                                        [](double a, double b) { return std::abs(a) < std::abs(b); });
  const double sign = *extreme < 0.0 ? -1.0 : 1.0;
  for (double& v : smooth) v *= sign;
  int top = static_cast<int>(std::max_element(smooth.begin(), smooth.end()) - smooth.begin());
  double width = half_max_width(f, smooth, top);

  // Fine pass: smooth over about a quarter linewidth.
  const int half = std::max(1, static_cast<int>(std::lround(0.25 * width / df)));
  smooth = moving_average(dev, half);
  for (double& v : smooth) v *= sign;
  top = static_cast<int>(std::max_element(smooth.begin(), smooth.end()) - smooth.begin());
  const double height = smooth[top];
  width = half_max_width(f, smooth, top);

  PeakLayout layout{expected_count, false};
  std::vector<double> seed_centres{f[top]};
  if (expected_count == 2) {
    int second = -1;
    for (int i : derivative_maxima(smooth)) {
      if (std::abs(f[i] - f[top]) < width || smooth[i] < 0.3 * height) continue;
      if (second < 0 || smooth[i] > smooth[second]) second = i;
    }
    if (second >= 0) {
      seed_centres.push_back(f[second]);
    } else {
      // Overlapping lines: symmetric seeds about the merged maximum.
      layout.shared_width = true;
      seed_centres = {f[top] - 0.25 * width, f[top] + 0.25 * width};
      width *= 0.5;
    }
  }

  Eigen::VectorXd x0(layout.size());
  Bounds bounds = Bounds::unbounded(layout.size());
  x0(0) = base0;
  for (int k = 0; k < expected_count; ++k) {
    x0(layout.centre(k)) = seed_centres[k];
    bounds.lower(layout.centre(k)) = f.front();
    bounds.upper(layout.centre(k)) = f.back();
    x0(layout.depth(k)) = sign * height / (layout.shared_width ? 1.5 : 1.0);
    x0(layout.width(k)) = width;
    bounds.lower(layout.width(k)) = 0.1 * df;
    bounds.upper(layout.width(k)) = span;
  }

  const std::vector<double>& pl = spectrum.pl;
  const ResidualFn residual = [&](const Eigen::VectorXd& x) {
    Eigen::VectorXd r(n);
    for (int i = 0; i < n; ++i) {
      double model = x(0);
      for (int k = 0; k < layout.count; ++k)
        model += x(layout.depth(k)) * lorentz(f[i], x(layout.centre(k)), x(layout.width(k)));
      r(i) = model - pl[i];
    }
    return r;
  };

  const LeastSquaresResult fit = levenberg_marquardt(residual, x0, bounds, options.lsq);

  std::vector<int> order(expected_count);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return fit.params(layout.centre(a)) < fit.params(layout.centre(b));
  });

  PeakSet out;
  out.baseline = fit.params(0);
  out.converged = fit.converged;
  out.residual_rms = std::sqrt(fit.residuals.squaredNorm() / n);
  double max_depth = 0.0;
  for (int k : order) {
    out.centers_mhz.push_back(fit.params(layout.centre(k)));
    out.depths.push_back(fit.params(layout.depth(k)));
    out.widths_mhz.push_back(fit.params(layout.width(k)));
    max_depth = std::max(max_depth, std::abs(out.depths.back()));
  }
  if (!fit.converged && out.residual_rms > options.max_residual_fraction * max_depth) {
    throw NoConvergence("peak fit did not converge (" + fit.stop_reason + ")",
                        std::vector<double>(fit.params.data(), fit.params.data() + fit.params.size()));
  }
  return out;
}

TransitionPair model_pair(double alpha, double pressure_gpa, double field_mt,
                          const ZfsParams& params, const StressCouplings& couplings,
                          const Vec3& direction) {
  const StressTensor stress = anvil_stress({alpha, pressure_gpa});
  const LabField field{field_mt, direction};
  return nv_transitions(params, couplings, to_nv_frame(nv_orientations()[0], stress, field));
}

StressFitResult fit_stress(std::span<const FieldPoint> points, const ZfsParams& params,
                           const StressCouplings& couplings, const StressFitOptions& options) {
  params.validate();
  couplings.validate();
  std::vector<double> fields;
  for (const auto& p : points) fields.push_back(p.field_mt);
  std::sort(fields.begin(), fields.end());
  fields.erase(std::unique(fields.begin(), fields.end()), fields.end());
  if (fields.size() < 2)
    throw InvalidInput("stress fit is under-determined: need at least two distinct field values");

  const auto lowest = std::min_element(points.begin(), points.end(),
                                       [](const FieldPoint& a, const FieldPoint& b) {
                                         return a.field_mt < b.field_mt;
                                       });
  const double alpha0 = options.alpha0.value_or(0.8);
  double pressure0 = 0.0;
  if (options.pressure0) {
    pressure0 = *options.pressure0;
  } else if (couplings.a1 > 0.0) {
    const double shift = lowest->pair.center() - params.d_zero_mhz;
    pressure0 = std::max(shift, 0.0) / (couplings.a1 * (1.0 + 2.0 * alpha0));
  } else {
    pressure0 = 10.0;
  }

  const ResidualFn residual = [&](const Eigen::VectorXd& x) {
    Eigen::VectorXd r(2 * static_cast<Eigen::Index>(points.size()));
    for (std::size_t i = 0; i < points.size(); ++i) {
      const TransitionPair m =
          model_pair(x(0), x(1), points[i].field_mt, params, couplings, options.field_direction);
      r(2 * i) = m.nu_minus - points[i].pair.nu_minus;
      r(2 * i + 1) = m.nu_plus - points[i].pair.nu_plus;
    }
    return r;
  };

  Bounds bounds{Eigen::Vector2d(1e-6, 0.0), Eigen::Vector2d(1.5, kInf)};
  const LeastSquaresResult fit =
      levenberg_marquardt(residual, Eigen::Vector2d(alpha0, pressure0), bounds, options.lsq);
  if (!fit.converged) {
    throw NoConvergence("stress fit did not converge (" + fit.stop_reason + ")",
                        {fit.params(0), fit.params(1)});
  }

  const Eigen::VectorXd sigma = parameter_uncertainties(fit);
  StressFitResult out;
  out.alpha = fit.params(0);
  out.pressure_gpa = fit.params(1);
  out.alpha_sigma = sigma(0);
  out.pressure_sigma = sigma(1);
  out.residual_rms_mhz = std::sqrt(fit.residuals.squaredNorm() / static_cast<double>(fit.residuals.size()));
  out.iterations = fit.iterations;
  out.converged = fit.converged;
  out.cost_history = fit.cost_history;
  for (const auto& p : points)
    out.model_pairs.push_back(model_pair(out.alpha, out.pressure_gpa, p.field_mt, params, couplings,
                                         options.field_direction));
  return out;
}

FieldFitResult fit_field(const TransitionPair& measured, double alpha, double pressure_gpa,
                         const ZfsParams& params, const StressCouplings& couplings,
                         const FieldFitOptions& options) {
  const double zero_field_split =
      model_pair(alpha, pressure_gpa, 0.0, params, couplings, options.direction).splitting();
  const double split = measured.splitting();
  if (split < zero_field_split - options.consistency_tol_mhz) {
    throw InconsistentInput("measured splitting " + std::to_string(split) +
                            " MHz is below the zero-field stress splitting " +
                            std::to_string(zero_field_split) + " MHz");
  }

  // First-order start: Delta_B = sqrt(Delta^2 - Delta_sigma^2) = 2 gamma B |cos theta|.
  const double cos_theta = std::abs(nv_orientations()[0].axis().dot(options.direction.normalized()));
  const double delta_b = std::sqrt(std::max(split * split - zero_field_split * zero_field_split, 0.0));
  const double b0 = cos_theta > 1e-6 ? delta_b / (2.0 * params.gamma_e_mhz_per_mt * cos_theta) : 1.0;

  const ResidualFn residual = [&](const Eigen::VectorXd& x) {
    const TransitionPair m = model_pair(alpha, pressure_gpa, x(0), params, couplings, options.direction);
    return Eigen::Vector2d(m.nu_minus - measured.nu_minus, m.nu_plus - measured.nu_plus).eval();
  };
  Bounds bounds{Eigen::VectorXd::Zero(1), Eigen::VectorXd::Constant(1, kInf)};
  const LeastSquaresResult fit =
      levenberg_marquardt(residual, Eigen::VectorXd::Constant(1, b0), bounds, options.lsq);
  if (!fit.converged)
    throw NoConvergence("field fit did not converge (" + fit.stop_reason + ")", {fit.params(0)});

  FieldFitResult out;
  out.b_magnitude_mt = fit.params(0);
  out.uncertainty_mt = parameter_uncertainties(fit)(0);
  out.residual_rms_mhz = std::sqrt(fit.residuals.squaredNorm() / 2.0);
  out.converged = true;
  out.model = model_pair(alpha, pressure_gpa, out.b_magnitude_mt, params, couplings, options.direction);
  return out;
}

SensitivityEstimate sensitivity_estimate(const LineshapeParams& shape, double photon_rate,
                                         double d_splitting_d_b) {
  shape.validate();
  if (!(photon_rate > 0.0)) throw InvalidInput("photon_rate must be positive");
  const double contrast = 0.5 * (std::abs(shape.contrast_lower) + std::abs(shape.contrast_upper));
  if (contrast == 0.0) throw InvalidInput("contrast must be non-zero");
  if (d_splitting_d_b < 0.0 || !std::isfinite(d_splitting_d_b))
    throw InvalidInput("dDelta/dB must be finite and non-negative");
  if (d_splitting_d_b == 0.0) {
    return {kInf, false,
            "splitting does not respond to the field here (stress-dominated flat regime); "
            "no finite sensitivity"};
  }
  const double eta = kSensitivityPrefactor * shape.linewidth_fwhm_mhz /
                     (contrast * std::sqrt(photon_rate) * d_splitting_d_b);
  return {eta, true, {}};
}

double splitting_slope(double alpha, double pressure_gpa, double field_mt,
                       const ZfsParams& params, const StressCouplings& couplings,
                       const Vec3& direction) {
  const double h = 1e-4;
  auto split = [&](double b) {
    return model_pair(alpha, pressure_gpa, b, params, couplings, direction).splitting();
  };
  if (field_mt < h) return (split(field_mt + h) - split(field_mt)) / h;
  return (split(field_mt + h) - split(field_mt - h)) / (2.0 * h);
}

}  // namespace nvdac
