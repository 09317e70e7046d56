#pragma once

// CSV spectrum / map files and derived SVG plots.
//
// Layout:
//   # units: field_mt=mT, frequency_mhz=MHz, pl_normalized=1
//   # config_hash: fnv1a64:0123456789abcdef
//   field_mt,frequency_mhz,pl_normalized
//   0,2600,1
//   ...
// Single spectra omit the field_mt column (in both the units row and the
// column row). Values are written with 9 significant digits.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "nvdac/spectra.hpp"

namespace nvdac {

struct SpectrumFile {
  std::string config_hash;
  bool has_field_column = false;
  std::vector<double> field_values_mt;  // one per spectrum when has_field_column
  std::vector<ODMRSpectrum> spectra;

  static SpectrumFile from_spectrum(const ODMRSpectrum& s, std::string hash);
  static SpectrumFile from_map(const ODMRMap& m, std::string hash);
};

std::string format_number(double v);

std::string format_spectrum_csv(const SpectrumFile& file);
/// Throws ParseError naming the 1-based line of the first problem.
SpectrumFile parse_spectrum_csv(std::string_view text);

/// Stacked line plot, one trace per spectrum, offset by field value.
std::string render_svg(const SpectrumFile& file);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace nvdac
