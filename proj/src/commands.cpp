#include "nvdac/commands.hpp"

#include <cmath>

#include "nvdac/calibration.hpp"
#include "nvdac/error.hpp"
#include "nvdac/inversion.hpp"
#include "nvdac/spectra.hpp"
#include "nvdac/spectrum_io.hpp"

namespace nvdac {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json pair_json(const TransitionPair& p) { return json::array({p.nu_minus, p.nu_plus}); }

void write_json(const fs::path& path, const json& doc) { write_text_file(path, doc.dump(2) + "\n"); }

}  // namespace

int cmd_simulate(const RunConfig& cfg, const fs::path& out_dir, bool svg, std::ostream& err) {
  try {
    fs::create_directories(out_dir);
    const std::string hash = config_hash(cfg);
    ODMRMap map = synthesize_map(cfg.alpha, cfg.pressure_gpa, cfg.field_sweep_mt, cfg.lineshape,
                                 cfg.grid, cfg.zfs, cfg.couplings, cfg.field_direction);
    for (std::size_t k = 0; k < map.spectra.size(); ++k)
      map.spectra[k] = add_noise(map.spectra[k], cfg.noise_sigma, cfg.seed + k);

    const bool single = map.spectra.size() == 1;
    const SpectrumFile file = single ? SpectrumFile::from_spectrum(map.spectra.front(), hash)
                                     : SpectrumFile::from_map(map, hash);
    const std::string data_name = single ? "spectrum.csv" : "map.csv";
    write_text_file(out_dir / data_name, format_spectrum_csv(file));

    const StressTensor stress = anvil_stress({cfg.alpha, cfg.pressure_gpa});
    json transitions = json::array();
    for (double b : cfg.field_sweep_mt) {
      json orient = json::array();
      for (const auto& p : orientation_transitions(cfg.zfs, cfg.couplings, stress,
                                                   {b, cfg.field_direction}))
        orient.push_back(pair_json(p));
      transitions.push_back({{"field_mt", b}, {"orientations_mhz", orient}});
    }

    json meta;
    meta["format"] = "nvdac-spectrum/1";
    meta["kind"] = single ? "spectrum" : "map";
    meta["data_file"] = data_name;
    meta["config_hash"] = hash;
    meta["config"] = config_to_json(cfg);
    meta["units"] = {{"frequency", "MHz"}, {"field", "mT"}, {"pressure", "GPa"}, {"pl", "normalized"}};
    meta["transitions"] = transitions;
    if (svg) {
      write_text_file(out_dir / (single ? "spectrum.svg" : "map.svg"), render_svg(file));
      meta["plot_file"] = single ? "spectrum.svg" : "map.svg";
    }
    write_json(out_dir / "metadata.json", meta);
    return exit_code::kOk;
  } catch (const std::exception& e) {
    err << "simulate: " << e.what() << "\n";
    return exit_code::kInputError;
  }
}

int cmd_fit(const fs::path& data_file, FitMode mode, const RunConfig& cfg, const fs::path& out_dir,
            std::ostream& out, std::ostream& err) {
  SpectrumFile file;
  try {
    file = parse_spectrum_csv(read_text_file(data_file));
  } catch (const std::exception& e) {
    err << "fit: " << data_file.string() << ": " << e.what() << "\n";
    return exit_code::kInputError;
  }

  json report;
  report["mode"] = mode == FitMode::Stress ? "stress" : "field";
  report["source_file"] = data_file.filename().string();
  report["source_config_hash"] = file.config_hash;
  report["config_hash"] = config_hash(cfg);
  int code = exit_code::kOk;

  try {
    fs::create_directories(out_dir);
    std::vector<FieldPoint> points;
    std::vector<double> peak_rms;
    for (std::size_t k = 0; k < file.spectra.size(); ++k) {
      const PeakSet peaks = extract_peaks(file.spectra[k], 2);
      const double b = file.has_field_column ? file.field_values_mt[k] : std::nan("");
      points.push_back({b, {peaks.centers_mhz[0], peaks.centers_mhz[1], false}});
      peak_rms.push_back(peaks.residual_rms);
    }

    if (mode == FitMode::Stress) {
      if (!file.has_field_column)
        throw InvalidInput("stress fit needs a map file with a field_mt column");
      StressFitOptions opt;
      opt.alpha0 = cfg.fit_alpha0;
      opt.pressure0 = cfg.fit_pressure0;
      opt.field_direction = cfg.field_direction;
      try {
        const StressFitResult fit = fit_stress(points, cfg.zfs, cfg.couplings, opt);
        report["converged"] = true;
        report["parameters"] = {{"alpha", fit.alpha}, {"pressure_gpa", fit.pressure_gpa}};
        report["uncertainties"] = {{"alpha", fit.alpha_sigma}, {"pressure_gpa", fit.pressure_sigma}};
        report["alpha_identifiable"] = std::isfinite(fit.alpha_sigma);
        report["residual_rms_mhz"] = fit.residual_rms_mhz;
        report["iterations"] = fit.iterations;
        json rows = json::array();
        for (std::size_t i = 0; i < points.size(); ++i)
          rows.push_back({{"field_mt", points[i].field_mt},
                          {"measured_mhz", pair_json(points[i].pair)},
                          {"model_mhz", pair_json(fit.model_pairs[i])},
                          {"peak_fit_rms", peak_rms[i]}});
        report["points"] = rows;
      } catch (const NoConvergence& e) {
        report["converged"] = false;
        report["diagnostic"] = e.what();
        report["parameters"] = {{"alpha", e.best_effort().at(0)},
                                {"pressure_gpa", e.best_effort().at(1)}};
        code = exit_code::kNoConvergence;
      }
    } else {
      json rows = json::array();
      bool all_converged = true;
      for (std::size_t i = 0; i < points.size(); ++i) {
        json row = {{"measured_mhz", pair_json(points[i].pair)}, {"peak_fit_rms", peak_rms[i]}};
        if (file.has_field_column) row["nominal_field_mt"] = points[i].field_mt;
        FieldFitOptions opt;
        opt.consistency_tol_mhz = cfg.field_fit_tolerance_mhz;
        opt.direction = cfg.field_direction;
        try {
          const FieldFitResult fit =
              fit_field(points[i].pair, cfg.alpha, cfg.pressure_gpa, cfg.zfs, cfg.couplings, opt);
          row["converged"] = true;
          row["b_magnitude_mt"] = fit.b_magnitude_mt;
          row["uncertainty_mt"] = fit.uncertainty_mt;
          row["residual_rms_mhz"] = fit.residual_rms_mhz;
          row["model_mhz"] = pair_json(fit.model);
        } catch (const NoConvergence& e) {
          row["converged"] = false;
          row["diagnostic"] = e.what();
          row["b_magnitude_mt"] = e.best_effort().at(0);
          all_converged = false;
        }
        rows.push_back(row);
      }
      report["known_stress"] = {{"alpha", cfg.alpha}, {"pressure_gpa", cfg.pressure_gpa}};
      report["converged"] = all_converged;
      report["points"] = rows;
      if (!all_converged) code = exit_code::kNoConvergence;
    }
  } catch (const InconsistentInput& e) {
    err << "fit: inconsistent data: " << e.what() << "\n";
    report["converged"] = false;
    report["diagnostic"] = e.what();
    code = exit_code::kInconsistentData;
  } catch (const NoConvergence& e) {
    err << "fit: " << e.what() << "\n";
    report["converged"] = false;
    report["diagnostic"] = e.what();
    code = exit_code::kNoConvergence;
  } catch (const std::exception& e) {
    err << "fit: " << e.what() << "\n";
    return exit_code::kInputError;
  }

  try {
    write_json(out_dir / "fit_report.json", report);
  } catch (const std::exception& e) {
    err << "fit: " << e.what() << "\n";
    return exit_code::kInputError;
  }
  out << report.dump(2) << "\n";
  return code;
}

json calibrate_report(const std::string& sub, const CalibrateInputs& in, const RunConfig& cfg) {
  auto need = [&](const std::optional<double>& v, const char* name) {
    if (!v) throw InvalidInput(sub + ": missing --" + std::string(name));
    return *v;
  };
  json r;
  r["subcommand"] = sub;
  if (sub == "raman") {
    r["parameters"] = {{"k0_gpa", cfg.raman.k0_gpa}, {"k0_prime", cfg.raman.k0_prime},
                       {"nu0_cm", cfg.raman.nu0_cm}};
    if (in.raman_shift_cm) {
      r["raman_shift_cm"] = *in.raman_shift_cm;
      r["pressure_gpa"] = raman_edge_to_pressure(*in.raman_shift_cm, cfg.raman);
    } else {
      const double p = need(in.pressure_gpa, "shift or --pressure");
      r["pressure_gpa"] = p;
      r["raman_shift_cm"] = pressure_to_raman_edge(p, cfg.raman);
    }
  } else if (sub == "eos") {
    r["parameters"] = {{"form", std::string(to_string(cfg.eos.form))},
                       {"v0_cm3_per_mol", cfg.eos.v0},
                       {"bulk_modulus_gpa", cfg.eos.bulk_modulus},
                       {"bulk_modulus_derivative", cfg.eos.bulk_modulus_derivative}};
    double v = 0.0;
    if (in.volume) {
      v = *in.volume;
      r["pressure_gpa"] = eos_volume_to_pressure(v, cfg.eos);
    } else {
      const double p = need(in.pressure_gpa, "pressure or --volume");
      v = eos_pressure_to_volume(p, cfg.eos);
      r["pressure_gpa"] = p;
    }
    r["volume_cm3_per_mol"] = v;
    r["v_over_v0"] = v / cfg.eos.v0;
  } else if (sub == "zpl") {
    ZplLine line = cfg.zpl;
    if (in.zpl_preset) line = ZplLine::preset(*in.zpl_preset);
    r["parameters"] = {{"slope_mev_per_cm3mol", line.slope_mev_per_cm3mol},
                       {"intercept_mev", line.intercept_mev},
                       {"v0_cm3_per_mol", line.v0}};
    double v = 0.0;
    if (in.volume) v = *in.volume;
    else if (in.delta_volume) v = line.v0 + *in.delta_volume;
    else v = eos_pressure_to_volume(need(in.pressure_gpa, "delta-volume, --volume or --pressure"), cfg.eos);
    const double e = zpl_energy(v, line);
    r["volume_cm3_per_mol"] = v;
    r["zpl_mev"] = e;
    r["zpl_shift_mev"] = e - line.intercept_mev;
  } else if (sub == "a1") {
    const double slope = need(in.slope, "slope");
    const double alpha = need(in.alpha, "alpha");
    r["slope_mhz_per_gpa"] = slope;
    r["alpha"] = alpha;
    r["a1_mhz_per_gpa"] = calibrate_a1(slope, alpha);
  } else if (sub == "gruneisen") {
    r["parameters"] = {{"gamma", cfg.gruneisen.gamma}, {"nu0_cm", cfg.gruneisen.nu0_cm}};
    double ratio = 0.0;
    if (in.v_ratio) {
      ratio = *in.v_ratio;
    } else {
      const double p = need(in.pressure_gpa, "v-ratio or --pressure");
      ratio = eos_pressure_to_volume(p, cfg.eos) / cfg.eos.v0;
      r["pressure_gpa"] = p;
    }
    r["v_over_v0"] = ratio;
    r["raman_shift_cm"] = gruneisen_shift(ratio, cfg.gruneisen);
  } else {
    throw InvalidInput("unknown calibrate subcommand '" + sub + "'");
  }
  return r;
}

int cmd_calibrate(const std::string& sub, const CalibrateInputs& in, const RunConfig& cfg,
                  const std::optional<fs::path>& out_dir, std::ostream& out, std::ostream& err) {
  try {
    const json r = calibrate_report(sub, in, cfg);
    if (out_dir) {
      fs::create_directories(*out_dir);
      write_json(*out_dir / ("calibrate_" + sub + ".json"), r);
    }
    out << r.dump(2) << "\n";
    return exit_code::kOk;
  } catch (const std::exception& e) {
    err << "calibrate " << sub << ": " << e.what() << "\n";
    return exit_code::kInputError;
  }
}

}  // namespace nvdac
