// nvdac: simulate, fit and calibrate NV-center ODMR under anvil stress.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "nvdac/commands.hpp"
#include "nvdac/config.hpp"

namespace {

nvdac::RunConfig resolve_config(const std::string& path, const std::optional<std::uint64_t>& seed) {
  nvdac::RunConfig cfg = path.empty() ? nvdac::RunConfig{} : nvdac::load_config(path);
  if (seed) cfg.seed = *seed;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"NV-center ODMR under diamond-anvil stress: forward model, fits and pressure calibration"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed;

  auto* sim = app.add_subcommand("simulate", "synthesize a spectrum or field-sweep map");
  sim->add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
  sim->add_option("--seed", seed, "noise seed (overrides the config)");
  sim->add_option("--out", out_dir, "output directory");
  bool svg = false;
  sim->add_flag("--svg", svg, "also write an SVG plot");

  auto* fit = app.add_subcommand("fit", "fit (alpha, P) from a map or B from spectra");
  std::string data_file;
  std::string mode = "stress";
  fit->add_option("file", data_file, "spectrum or map CSV")->required();
  fit->add_option("--mode", mode, "stress | field")->check(CLI::IsMember({"stress", "field"}));
  fit->add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
  fit->add_option("--seed", seed, "unused by fitting; recorded in the config hash");
  fit->add_option("--out", out_dir, "output directory");

  auto* cal = app.add_subcommand("calibrate", "pressure-calibration chain");
  cal->require_subcommand(1);
  cal->add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
  std::optional<std::string> cal_out;
  cal->add_option("--out", cal_out, "also write the report into this directory");
  nvdac::CalibrateInputs in;

  auto* raman = cal->add_subcommand("raman", "Raman edge shift <-> pressure");
  raman->add_option("--shift", in.raman_shift_cm, "edge shift from nu0, cm^-1");
  raman->add_option("--pressure", in.pressure_gpa, "pressure, GPa (inverse)");
  auto* eos = cal->add_subcommand("eos", "pressure <-> molar volume");
  eos->add_option("--pressure", in.pressure_gpa, "pressure, GPa");
  eos->add_option("--volume", in.volume, "molar volume, cm^3/mol");
  auto* zpl = cal->add_subcommand("zpl", "NV zero-phonon line from volume");
  zpl->add_option("--delta-volume", in.delta_volume, "V - V0, cm^3/mol");
  zpl->add_option("--volume", in.volume, "molar volume, cm^3/mol");
  zpl->add_option("--pressure", in.pressure_gpa, "pressure, GPa (through the EOS)");
  zpl->add_option("--preset", in.zpl_preset, "micropillar | standard")
      ->check(CLI::IsMember({"micropillar", "standard"}));
  auto* a1 = cal->add_subcommand("a1", "axial coupling a1 from a centre-shift slope");
  a1->add_option("--slope", in.slope, "centre shift slope, MHz/GPa")->required();
  a1->add_option("--alpha", in.alpha, "anisotropy alpha")->required();
  auto* gru = cal->add_subcommand("gruneisen", "hydrostatic Raman shift from volume");
  gru->add_option("--v-ratio", in.v_ratio, "V/V0");
  gru->add_option("--pressure", in.pressure_gpa, "pressure, GPa (through the EOS)");

  CLI11_PARSE(app, argc, argv);

  nvdac::RunConfig cfg;
  try {
    cfg = resolve_config(config_path, seed);
  } catch (const std::exception& e) {
    std::cerr << "config: " << e.what() << "\n";
    return nvdac::exit_code::kInputError;
  }

  if (*sim) return nvdac::cmd_simulate(cfg, out_dir, svg, std::cerr);
  if (*fit) {
    const auto m = mode == "field" ? nvdac::FitMode::Field : nvdac::FitMode::Stress;
    return nvdac::cmd_fit(data_file, m, cfg, out_dir, std::cout, std::cerr);
  }
  for (auto* sub : cal->get_subcommands()) {
    std::optional<std::filesystem::path> dir;
    if (cal_out) dir = *cal_out;
    return nvdac::cmd_calibrate(sub->get_name(), in, cfg, dir, std::cout, std::cerr);
  }
  return nvdac::exit_code::kInputError;
}
