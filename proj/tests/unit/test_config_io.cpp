#include <doctest.h>

#include <random>
#include <string>

#include "nvdac/config.hpp"
#include "nvdac/error.hpp"
#include "nvdac/spectrum_io.hpp"

using namespace nvdac;
using nlohmann::json;

namespace {

std::string error_field(const json& doc) {
  try {
    config_from_json(doc);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "<no error>";
}

}  // namespace

TEST_CASE("default config round-trips through JSON with a stable hash") {
  const RunConfig cfg;
  const json doc = config_to_json(cfg);
  const RunConfig back = config_from_json(doc);
  CHECK(config_to_json(back) == doc);
  CHECK(config_hash(back) == config_hash(cfg));
  CHECK(config_hash(cfg).rfind("fnv1a64:", 0) == 0);
  CHECK(config_hash(cfg).size() == 8 + 16);
}

TEST_CASE("FNV-1a reference vectors") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);
}

TEST_CASE("any change in the config changes the hash") {
  RunConfig a;
  RunConfig b;
  b.seed = 1;
  CHECK(config_hash(a) != config_hash(b));
  b = a;
  b.pressure_gpa = 1e-9;
  CHECK(config_hash(a) != config_hash(b));
}

TEST_CASE("config errors name the offending field") {
  CHECK(error_field({{"scenario", {{"alpah", 0.5}}}}) == "scenario.alpah");
  CHECK(error_field({{"scenaro", json::object()}}) == "scenaro");
  CHECK(error_field({{"scenario", {{"alpha", 2.0}}}}) == "scenario.alpha");
  CHECK(error_field({{"scenario", {{"alpha", "x"}}}}) == "scenario.alpha");
  CHECK(error_field({{"scenario", {{"pressure_gpa", -3}}}}) == "scenario.pressure_gpa");
  CHECK(error_field({{"scenario", {{"field_sweep_mt", {0, 20}}}}}) == "scenario.field_sweep_mt");
  CHECK(error_field({{"scenario", {{"field_sweep_mt", {2, 1}}}}}) == "scenario.field_sweep_mt");
  CHECK(error_field({{"lineshape", {{"fwhm_mhz", 0}}}}) == "lineshape");
  CHECK(error_field({{"couplings", {{"preset", "x"}}}}) == "couplings.preset");
  CHECK(error_field({{"eos", {{"form", "x"}}}}) == "eos.form");
  CHECK(error_field({{"seed", -1}}) == "seed");
  CHECK(error_field({{"noise", {{"sigma", -0.1}}}}) == "noise.sigma");
}

TEST_CASE("config sections parse") {
  const json doc = {
      {"couplings", {{"preset", "slope-calibrated"}}},
      {"scenario",
       {{"alpha", 0.56},
        {"pressure_gpa", 40},
        {"field_sweep_mt", {{"start", 0}, {"stop", 10}, {"count", 5}}},
        {"field_direction", {0, 0, 2}}}},
      {"lineshape", {{"contrast", -0.03}}},
      {"seed", 7},
      {"eos", {{"form", "birch-murnaghan-3"}}},
  };
  const RunConfig cfg = config_from_json(doc);
  CHECK(cfg.couplings.a1 == doctest::Approx(4.6276).epsilon(1e-4));
  CHECK(cfg.field_sweep_mt == std::vector<double>{0.0, 2.5, 5.0, 7.5, 10.0});
  CHECK(cfg.field_direction == Vec3::UnitZ());
  CHECK(cfg.lineshape.contrast_lower == -0.03);
  CHECK(cfg.lineshape.contrast_upper == -0.03);
  CHECK(cfg.seed == 7);
  CHECK(cfg.eos.form == EosForm::BirchMurnaghan3);
  CHECK(config_to_json(config_from_json(config_to_json(cfg))) == config_to_json(cfg));
}

TEST_CASE("extended field range needs the explicit flag") {
  const json doc = {{"scenario", {{"field_sweep_mt", {0, 25}}, {"allow_extended_field", true}}}};
  CHECK(config_from_json(doc).field_sweep_mt.back() == 25.0);
}

TEST_CASE("spectrum CSV round-trips exactly at nine significant digits") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(0.9, 1.1);
  for (bool with_field : {false, true}) {
    SpectrumFile f;
    f.config_hash = "fnv1a64:0123456789abcdef";
    f.has_field_column = with_field;
    const int blocks = with_field ? 3 : 1;
    for (int b = 0; b < blocks; ++b) {
      ODMRSpectrum s;
      for (int i = 0; i < 50; ++i) {
        s.frequencies_mhz.push_back(2800.0 + 1.5 * i);
        s.pl.push_back(u(rng));
      }
      f.spectra.push_back(s);
      if (with_field) f.field_values_mt.push_back(2.5 * b);
    }
    const std::string text = format_spectrum_csv(f);
    const SpectrumFile back = parse_spectrum_csv(text);
    CHECK(format_spectrum_csv(back) == text);
    CHECK(back.config_hash == f.config_hash);
    CHECK(back.has_field_column == with_field);
    REQUIRE(back.spectra.size() == f.spectra.size());
    for (std::size_t b = 0; b < f.spectra.size(); ++b)
      for (std::size_t i = 0; i < 50; ++i)
        CHECK(back.spectra[b].pl[i] == doctest::Approx(f.spectra[b].pl[i]).epsilon(1e-8));
  }
}

TEST_CASE("spectrum CSV layout") {
  SpectrumFile f;
  f.config_hash = "h";
  f.spectra = {ODMRSpectrum{{2870.0, 2871.0}, {1.0, 0.95}}};
  CHECK(format_spectrum_csv(f) ==
        "# units: frequency_mhz=MHz, pl_normalized=1\n# config_hash: h\nfrequency_mhz,pl_normalized\n"
        "2870,1\n2871,0.95\n");
}

TEST_CASE("malformed CSV reports the line number") {
  const std::string head = "# units: field_mt=mT, frequency_mhz=MHz, pl_normalized=1\n# config_hash: h\n"
                           "field_mt,frequency_mhz,pl_normalized\n";
  auto line_of = [](const std::string& text) {
    try {
      parse_spectrum_csv(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return std::size_t{0};
  };
  CHECK(line_of("") == 1);
  CHECK(line_of(head + "0,1,1\n0,2,1\n1,1,1\n") == 6);        // truncated last block
  CHECK(line_of(head + "0,1,1\n0,2\n") == 5);                 // missing column
  CHECK(line_of(head + "0,1,1\n0,x,1\n") == 5);               // bad number
  CHECK(line_of(head + "0,1,1\n0,2,1\n1,1,1\n1,3,1\n") == 7); // grid mismatch
  CHECK(line_of(head + "0,2,1\n0,1,1\n") == 5);               // descending
  CHECK(line_of(head) > 0);                                   // no rows
}
