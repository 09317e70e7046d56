#include "nvdac/spectrum_io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "nvdac/error.hpp"

namespace nvdac {

namespace {

constexpr std::string_view kUnitsMap = "# units: field_mt=mT, frequency_mhz=MHz, pl_normalized=1";
constexpr std::string_view kUnitsSpectrum = "# units: frequency_mhz=MHz, pl_normalized=1";
constexpr std::string_view kHashPrefix = "# config_hash: ";
constexpr std::string_view kColumnsMap = "field_mt,frequency_mhz,pl_normalized";
constexpr std::string_view kColumnsSpectrum = "frequency_mhz,pl_normalized";

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    pos = end + 1;
  }
  return lines;
}

double parse_double(std::string_view field, std::size_t line) {
  double v = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last)
    throw ParseError("invalid number '" + std::string(field) + "'", line);
  return v;
}

}  // namespace

SpectrumFile SpectrumFile::from_spectrum(const ODMRSpectrum& s, std::string hash) {
  SpectrumFile f;
  f.config_hash = std::move(hash);
  f.spectra = {s};
  return f;
}

SpectrumFile SpectrumFile::from_map(const ODMRMap& m, std::string hash) {
  SpectrumFile f;
  f.config_hash = std::move(hash);
  f.has_field_column = true;
  f.field_values_mt = m.field_values_mt;
  f.spectra = m.spectra;
  return f;
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string format_spectrum_csv(const SpectrumFile& file) {
  if (file.has_field_column && file.field_values_mt.size() != file.spectra.size())
    throw InvalidInput("one field value per spectrum required");
  if (!file.has_field_column && file.spectra.size() != 1)
    throw InvalidInput("a file without field column holds exactly one spectrum");

  std::string out;
  out += file.has_field_column ? kUnitsMap : kUnitsSpectrum;
  out += '\n';
  out += kHashPrefix;
  out += file.config_hash;
  out += '\n';
  out += file.has_field_column ? kColumnsMap : kColumnsSpectrum;
  out += '\n';
  for (std::size_t s = 0; s < file.spectra.size(); ++s) {
    const ODMRSpectrum& spec = file.spectra[s];
    spec.validate();
    const std::string field = file.has_field_column ? format_number(file.field_values_mt[s]) + "," : "";
    for (std::size_t i = 0; i < spec.size(); ++i) {
      out += field;
      out += format_number(spec.frequencies_mhz[i]);
      out += ',';
      out += format_number(spec.pl[i]);
      out += '\n';
    }
  }
  return out;
}

SpectrumFile parse_spectrum_csv(std::string_view text) {
  const std::vector<std::string_view> lines = split_lines(text);
  if (lines.size() < 1 || !lines[0].starts_with("# units:"))
    throw ParseError("missing units header", 1);
  if (lines.size() < 2 || !lines[1].starts_with(kHashPrefix))
    throw ParseError("missing config_hash header", 2);
  if (lines.size() < 3) throw ParseError("missing column header", 3);

  SpectrumFile file;
  file.config_hash = std::string(lines[1].substr(kHashPrefix.size()));
  if (lines[2] == kColumnsMap) {
    file.has_field_column = true;
    if (lines[0] != kUnitsMap) throw ParseError("units row does not match columns", 1);
  } else if (lines[2] == kColumnsSpectrum) {
    if (lines[0] != kUnitsSpectrum) throw ParseError("units row does not match columns", 1);
  } else {
    throw ParseError("unrecognised column header", 3);
  }
  const std::size_t ncols = file.has_field_column ? 3 : 2;

  for (std::size_t li = 3; li < lines.size(); ++li) {
    const std::size_t line_no = li + 1;
    const std::string_view line = lines[li];
    if (line.empty()) {
      if (li + 1 == lines.size()) break;
      throw ParseError("empty line", line_no);
    }
    std::vector<std::string_view> cells;
    std::size_t pos = 0;
    while (true) {
      const std::size_t comma = line.find(',', pos);
      cells.push_back(line.substr(pos, comma == std::string_view::npos ? comma : comma - pos));
      if (comma == std::string_view::npos) break;
      pos = comma + 1;
    }
    if (cells.size() != ncols)
      throw ParseError("expected " + std::to_string(ncols) + " columns, found " +
                           std::to_string(cells.size()),
                       line_no);

    std::size_t c = 0;
    if (file.has_field_column) {
      const double b = parse_double(cells[c++], line_no);
      if (file.field_values_mt.empty() || b != file.field_values_mt.back()) {
        if (!file.field_values_mt.empty() && b < file.field_values_mt.back())
          throw ParseError("field values must be ascending", line_no);
        file.field_values_mt.push_back(b);
        file.spectra.emplace_back();
      }
    } else if (file.spectra.empty()) {
      file.spectra.emplace_back();
    }
    ODMRSpectrum& spec = file.spectra.back();
    const double f = parse_double(cells[c++], line_no);
    const double pl = parse_double(cells[c], line_no);
    if (!spec.frequencies_mhz.empty() && !(f > spec.frequencies_mhz.back()))
      throw ParseError("frequencies must be strictly increasing", line_no);
    if (file.spectra.size() > 1) {
      const ODMRSpectrum& first = file.spectra.front();
      const std::size_t idx = spec.frequencies_mhz.size();
      if (idx >= first.size() || first.frequencies_mhz[idx] != f)
        throw ParseError("spectrum grid differs from the first spectrum", line_no);
    }
    spec.frequencies_mhz.push_back(f);
    spec.pl.push_back(pl);
  }

  if (file.spectra.empty()) throw ParseError("no data rows", lines.size());
  for (const auto& spec : file.spectra) {
    if (spec.size() < 2 || spec.size() != file.spectra.front().size())
      throw ParseError("truncated spectrum block", lines.back().empty() ? lines.size() - 1 : lines.size());
  }
  return file;
}

std::string render_svg(const SpectrumFile& file) {
  constexpr double width = 800.0;
  constexpr double height = 600.0;
  constexpr double margin = 50.0;
  if (file.spectra.empty()) throw InvalidInput("nothing to plot");

  const auto& f = file.spectra.front().frequencies_mhz;
  const double fmin = f.front();
  const double fmax = f.back();
  double lo = 1e300;
  double hi = -1e300;
  for (const auto& s : file.spectra)
    for (double v : s.pl) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  const double span = std::max(hi - lo, 1e-12);
  const std::size_t n = file.spectra.size();
  const double lane = (height - 2 * margin) / static_cast<double>(n);

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << width / 2 << "\" y=\"" << height - 10
      << "\" text-anchor=\"middle\" font-size=\"14\">frequency (MHz) " << format_number(fmin)
      << " to " << format_number(fmax) << "</text>\n";
  for (std::size_t k = 0; k < n; ++k) {
    const auto& s = file.spectra[k];
    const double y0 = height - margin - lane * static_cast<double>(k);
    svg << "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"1\" points=\"";
    for (std::size_t i = 0; i < s.size(); ++i) {
      const double x = margin + (s.frequencies_mhz[i] - fmin) / (fmax - fmin) * (width - 2 * margin);
      const double y = y0 - (s.pl[i] - lo) / span * lane * 0.9;
      svg << format_number(x) << ',' << format_number(y) << ' ';
    }
    svg << "\"/>\n";
    if (file.has_field_column)
      svg << "<text x=\"5\" y=\"" << y0 - 0.5 * lane << "\" font-size=\"10\">"
          << format_number(file.field_values_mt[k]) << " mT</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
}

}  // namespace nvdac
