#pragma once

// simulate / fit / calibrate workflows behind the command-line tool.
// Each returns a process exit code and writes its artifacts under out_dir.

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

#include <json.hpp>

#include "nvdac/config.hpp"

namespace nvdac {

namespace exit_code {
inline constexpr int kOk = 0;
inline constexpr int kInputError = 1;
inline constexpr int kNoConvergence = 3;
inline constexpr int kInconsistentData = 4;
}  // namespace exit_code

/// Writes spectrum.csv (single field value) or map.csv, metadata.json and,
/// when requested, an SVG plot of the same data.
int cmd_simulate(const RunConfig& cfg, const std::filesystem::path& out_dir, bool svg,
                 std::ostream& err);

enum class FitMode { Stress, Field };

/// Reads a spectrum or map file, extracts resonances and fits either
/// (alpha, P) or B per spectrum. Writes fit_report.json.
int cmd_fit(const std::filesystem::path& data_file, FitMode mode, const RunConfig& cfg,
            const std::filesystem::path& out_dir, std::ostream& out, std::ostream& err);

struct CalibrateInputs {
  std::optional<double> raman_shift_cm;
  std::optional<double> pressure_gpa;
  std::optional<double> volume;
  std::optional<double> delta_volume;
  std::optional<double> v_ratio;
  std::optional<double> slope;
  std::optional<double> alpha;
  std::optional<std::string> zpl_preset;
};

/// Subcommands: raman, eos, zpl, a1, gruneisen. Throws InvalidInput on
/// missing or out-of-domain inputs.
nlohmann::json calibrate_report(const std::string& subcommand, const CalibrateInputs& in,
                                const RunConfig& cfg);

int cmd_calibrate(const std::string& subcommand, const CalibrateInputs& in, const RunConfig& cfg,
                  const std::optional<std::filesystem::path>& out_dir, std::ostream& out,
                  std::ostream& err);

}  // namespace nvdac
