#pragma once

// Run configuration: every physical constant and scenario parameter needed
// to reproduce a simulate / fit / calibrate run, stored as JSON.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nvdac/calibration.hpp"
#include "nvdac/error.hpp"
#include "nvdac/frames.hpp"
#include "nvdac/spectra.hpp"
#include "nvdac/spin_model.hpp"

namespace nvdac {

/// Invalid configuration; field() is the dotted path of the offending key.
class ConfigError : public InvalidInput {
 public:
  ConfigError(const std::string& field, const std::string& what)
      : InvalidInput(field + ": " + what), field_(field) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

struct RunConfig {
  ZfsParams zfs;
  std::string couplings_preset = "literature";
  StressCouplings couplings;

  RamanGaugeParams raman;
  EosParams eos;
  GruneisenParams gruneisen;
  std::string zpl_preset = "micropillar";
  ZplLine zpl = ZplLine::micropillar();

  double alpha = 1.0;
  double pressure_gpa = 0.0;
  std::vector<double> field_sweep_mt{0.0};
  Vec3 field_direction = anvil_axis();
  // Sweeps above 10 mT are refused unless this is set.
  bool allow_extended_field = false;

  LineshapeParams lineshape;
  FrequencyGrid grid;
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;

  std::optional<double> fit_alpha0;
  std::optional<double> fit_pressure0;
  double field_fit_tolerance_mhz = 1.0;
};

/// Missing keys take defaults; unknown keys and bad values throw ConfigError.
RunConfig config_from_json(const nlohmann::json& doc);
nlohmann::json config_to_json(const RunConfig& cfg);

RunConfig load_config(const std::filesystem::path& path);

/// "fnv1a64:<16 hex digits>" over the canonical JSON of the config.
std::string config_hash(const RunConfig& cfg);

std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace nvdac
