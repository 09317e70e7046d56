#include "nvdac/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace nvdac {

using nlohmann::json;

namespace {

// Reads one JSON object section, remembering which keys were consumed so
// that typos surface as errors instead of silently falling back to defaults.
class Section {
 public:
  Section(const json& doc, std::string path) : path_(std::move(path)) {
    if (doc.is_null()) return;
    if (!doc.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
    obj_ = &doc;
  }

  std::string key_path(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  bool has(const std::string& key) const { return obj_ && obj_->contains(key); }

  const json& raw(const std::string& key) {
    used_.insert(key);
    return obj_->at(key);
  }

  double number(const std::string& key, double fallback) {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_number()) throw ConfigError(key_path(key), "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ConfigError(key_path(key), "must be finite");
    return d;
  }

  bool boolean(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_boolean()) throw ConfigError(key_path(key), "expected true or false");
    return v.get<bool>();
  }

  std::string text(const std::string& key, const std::string& fallback) {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_string()) throw ConfigError(key_path(key), "expected a string");
    return v.get<std::string>();
  }

  const json& child(const std::string& key) {
    static const json null_section;
    return has(key) ? raw(key) : null_section;
  }

  void reject_unknown() const {
    if (!obj_) return;
    for (const auto& [key, value] : obj_->items())
      if (!used_.count(key)) throw ConfigError(key_path(key), "unknown key");
  }

 private:
  const json* obj_ = nullptr;
  std::string path_;
  std::set<std::string> used_;
};

template <typename F>
void check(const std::string& field, F&& validate) {
  try {
    validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(field, e.what());
  }
}

std::vector<double> read_sweep(const json& v, const std::string& path) {
  std::vector<double> out;
  if (v.is_array()) {
    for (const auto& e : v) {
      if (!e.is_number()) throw ConfigError(path, "sweep entries must be numbers");
      out.push_back(e.get<double>());
    }
  } else if (v.is_object()) {
    Section s(v, path);
    const double start = s.number("start", 0.0);
    const double stop = s.number("stop", 10.0);
    const double count_d = s.number("count", 11);
    s.reject_unknown();
    if (count_d < 1 || count_d != std::floor(count_d)) throw ConfigError(path + ".count", "must be a positive integer");
    const auto count = static_cast<int>(count_d);
    for (int i = 0; i < count; ++i)
      out.push_back(count == 1 ? start : start + (stop - start) * i / (count - 1));
  } else {
    throw ConfigError(path, "expected an array or {start, stop, count}");
  }
  if (out.empty()) throw ConfigError(path, "sweep is empty");
  return out;
}

}  // namespace

RunConfig config_from_json(const json& doc) {
  RunConfig cfg;
  Section root(doc, "");

  {
    Section s(root.child("zfs"), "zfs");
    cfg.zfs.d_zero_mhz = s.number("d_zero_mhz", cfg.zfs.d_zero_mhz);
    cfg.zfs.gamma_e_mhz_per_mt = s.number("gamma_e_mhz_per_mt", cfg.zfs.gamma_e_mhz_per_mt);
    s.reject_unknown();
    check("zfs", [&] { cfg.zfs.validate(); });
  }
  {
    Section s(root.child("couplings"), "couplings");
    cfg.couplings_preset = s.text("preset", cfg.couplings_preset);
    check("couplings.preset", [&] { cfg.couplings = couplings_preset(cfg.couplings_preset); });
    StressCouplings& k = cfg.couplings;
    k.a1 = s.number("a1", k.a1);
    k.a2 = s.number("a2", k.a2);
    k.b = s.number("b", k.b);
    k.c = s.number("c", k.c);
    k.d = s.number("d", k.d);
    k.e = s.number("e", k.e);
    k.include_spin_half_mixing = s.boolean("include_spin_half_mixing", k.include_spin_half_mixing);
    s.reject_unknown();
  }
  {
    Section s(root.child("raman"), "raman");
    cfg.raman.k0_gpa = s.number("k0_gpa", cfg.raman.k0_gpa);
    cfg.raman.k0_prime = s.number("k0_prime", cfg.raman.k0_prime);
    cfg.raman.nu0_cm = s.number("nu0_cm", cfg.raman.nu0_cm);
    s.reject_unknown();
    check("raman", [&] { cfg.raman.validate(); });
  }
  {
    Section s(root.child("eos"), "eos");
    check("eos.form", [&] {
      cfg.eos.form = eos_form_from_string(s.text("form", std::string(to_string(cfg.eos.form))));
    });
    cfg.eos.v0 = s.number("v0_cm3_per_mol", cfg.eos.v0);
    cfg.eos.bulk_modulus = s.number("bulk_modulus_gpa", cfg.eos.bulk_modulus);
    cfg.eos.bulk_modulus_derivative = s.number("bulk_modulus_derivative", cfg.eos.bulk_modulus_derivative);
    s.reject_unknown();
    check("eos", [&] { cfg.eos.validate(); });
  }
  {
    Section s(root.child("gruneisen"), "gruneisen");
    cfg.gruneisen.gamma = s.number("gamma", cfg.gruneisen.gamma);
    cfg.gruneisen.nu0_cm = s.number("nu0_cm", cfg.gruneisen.nu0_cm);
    s.reject_unknown();
    check("gruneisen", [&] { cfg.gruneisen.validate(); });
  }
  {
    Section s(root.child("zpl"), "zpl");
    cfg.zpl_preset = s.text("preset", cfg.zpl_preset);
    check("zpl.preset", [&] { cfg.zpl = ZplLine::preset(cfg.zpl_preset); });
    cfg.zpl.slope_mev_per_cm3mol = s.number("slope_mev_per_cm3mol", cfg.zpl.slope_mev_per_cm3mol);
    cfg.zpl.intercept_mev = s.number("intercept_mev", cfg.zpl.intercept_mev);
    cfg.zpl.v0 = s.number("v0_cm3_per_mol", cfg.zpl.v0);
    s.reject_unknown();
    check("zpl", [&] { cfg.zpl.validate(); });
  }
  {
    Section s(root.child("scenario"), "scenario");
    cfg.alpha = s.number("alpha", cfg.alpha);
    cfg.pressure_gpa = s.number("pressure_gpa", cfg.pressure_gpa);
    check("scenario.alpha", [&] { AnvilStressParams{cfg.alpha, 0.0}.validate(); });
    check("scenario.pressure_gpa", [&] { AnvilStressParams{1.0, cfg.pressure_gpa}.validate(); });
    cfg.allow_extended_field = s.boolean("allow_extended_field", cfg.allow_extended_field);
    if (s.has("field_sweep_mt"))
      cfg.field_sweep_mt = read_sweep(s.raw("field_sweep_mt"), "scenario.field_sweep_mt");
    for (std::size_t i = 0; i < cfg.field_sweep_mt.size(); ++i) {
      const double b = cfg.field_sweep_mt[i];
      if (b < 0.0) throw ConfigError("scenario.field_sweep_mt", "field values must be >= 0");
      if (i > 0 && b < cfg.field_sweep_mt[i - 1])
        throw ConfigError("scenario.field_sweep_mt", "field values must be ascending");
      if (b > 10.0 && !cfg.allow_extended_field)
        throw ConfigError("scenario.field_sweep_mt",
                          "field above 10 mT; set scenario.allow_extended_field to permit");
    }
    if (s.has("field_direction")) {
      const json& v = s.raw("field_direction");
      if (!v.is_array() || v.size() != 3)
        throw ConfigError("scenario.field_direction", "expected a 3-vector");
      for (int i = 0; i < 3; ++i) {
        if (!v[i].is_number()) throw ConfigError("scenario.field_direction", "expected numbers");
        cfg.field_direction(i) = v[i].get<double>();
      }
      if (!(cfg.field_direction.norm() > 0.0))
        throw ConfigError("scenario.field_direction", "must be non-zero");
      cfg.field_direction.normalize();
    }
    s.reject_unknown();
  }
  {
    Section s(root.child("lineshape"), "lineshape");
    LineshapeParams& l = cfg.lineshape;
    l.linewidth_fwhm_mhz = s.number("fwhm_mhz", l.linewidth_fwhm_mhz);
    const double both = s.number("contrast", l.contrast_lower);
    l.contrast_lower = s.number("contrast_lower", both);
    l.contrast_upper = s.number("contrast_upper", s.has("contrast") ? both : l.contrast_upper);
    l.baseline = s.number("baseline", l.baseline);
    s.reject_unknown();
    check("lineshape", [&] { l.validate(); });
  }
  {
    Section s(root.child("grid"), "grid");
    cfg.grid.start_mhz = s.number("start_mhz", cfg.grid.start_mhz);
    cfg.grid.stop_mhz = s.number("stop_mhz", cfg.grid.stop_mhz);
    cfg.grid.step_mhz = s.number("step_mhz", cfg.grid.step_mhz);
    s.reject_unknown();
    check("grid", [&] { cfg.grid.validate(); });
  }
  {
    Section s(root.child("noise"), "noise");
    cfg.noise_sigma = s.number("sigma", cfg.noise_sigma);
    s.reject_unknown();
    if (cfg.noise_sigma < 0.0) throw ConfigError("noise.sigma", "must be >= 0");
  }
  if (root.has("seed")) {
    const json& v = root.raw("seed");
    if (!v.is_number_integer() || v.get<long long>() < 0)
      throw ConfigError("seed", "expected a non-negative integer");
    cfg.seed = v.get<std::uint64_t>();
  }
  {
    Section s(root.child("fit"), "fit");
    if (s.has("alpha0")) cfg.fit_alpha0 = s.number("alpha0", 0.8);
    if (s.has("pressure0_gpa")) cfg.fit_pressure0 = s.number("pressure0_gpa", 0.0);
    cfg.field_fit_tolerance_mhz = s.number("field_tolerance_mhz", cfg.field_fit_tolerance_mhz);
    s.reject_unknown();
    if (cfg.fit_alpha0 && !(*cfg.fit_alpha0 > 0.0 && *cfg.fit_alpha0 <= 1.5))
      throw ConfigError("fit.alpha0", "must lie in (0, 1.5]");
    if (cfg.fit_pressure0 && *cfg.fit_pressure0 < 0.0)
      throw ConfigError("fit.pressure0_gpa", "must be >= 0");
    if (cfg.field_fit_tolerance_mhz < 0.0)
      throw ConfigError("fit.field_tolerance_mhz", "must be >= 0");
  }
  root.reject_unknown();
  return cfg;
}

json config_to_json(const RunConfig& cfg) {
  json doc;
  doc["zfs"] = {{"d_zero_mhz", cfg.zfs.d_zero_mhz},
                {"gamma_e_mhz_per_mt", cfg.zfs.gamma_e_mhz_per_mt}};
  const StressCouplings& k = cfg.couplings;
  doc["couplings"] = {{"preset", cfg.couplings_preset}, {"a1", k.a1}, {"a2", k.a2},
                      {"b", k.b}, {"c", k.c}, {"d", k.d}, {"e", k.e},
                      {"include_spin_half_mixing", k.include_spin_half_mixing}};
  doc["raman"] = {{"k0_gpa", cfg.raman.k0_gpa}, {"k0_prime", cfg.raman.k0_prime},
                  {"nu0_cm", cfg.raman.nu0_cm}};
  doc["eos"] = {{"form", std::string(to_string(cfg.eos.form))},
                {"v0_cm3_per_mol", cfg.eos.v0},
                {"bulk_modulus_gpa", cfg.eos.bulk_modulus},
                {"bulk_modulus_derivative", cfg.eos.bulk_modulus_derivative}};
  doc["gruneisen"] = {{"gamma", cfg.gruneisen.gamma}, {"nu0_cm", cfg.gruneisen.nu0_cm}};
  doc["zpl"] = {{"preset", cfg.zpl_preset},
                {"slope_mev_per_cm3mol", cfg.zpl.slope_mev_per_cm3mol},
                {"intercept_mev", cfg.zpl.intercept_mev},
                {"v0_cm3_per_mol", cfg.zpl.v0}};
  doc["scenario"] = {{"alpha", cfg.alpha},
                     {"pressure_gpa", cfg.pressure_gpa},
                     {"field_sweep_mt", cfg.field_sweep_mt},
                     {"field_direction", {cfg.field_direction.x(), cfg.field_direction.y(),
                                          cfg.field_direction.z()}},
                     {"allow_extended_field", cfg.allow_extended_field}};
  doc["lineshape"] = {{"fwhm_mhz", cfg.lineshape.linewidth_fwhm_mhz},
                      {"contrast_lower", cfg.lineshape.contrast_lower},
                      {"contrast_upper", cfg.lineshape.contrast_upper},
                      {"baseline", cfg.lineshape.baseline}};
  doc["grid"] = {{"start_mhz", cfg.grid.start_mhz}, {"stop_mhz", cfg.grid.stop_mhz},
                 {"step_mhz", cfg.grid.step_mhz}};
  doc["noise"] = {{"sigma", cfg.noise_sigma}};
  doc["seed"] = cfg.seed;
  json fit = {{"field_tolerance_mhz", cfg.field_fit_tolerance_mhz}};
  if (cfg.fit_alpha0) fit["alpha0"] = *cfg.fit_alpha0;
  if (cfg.fit_pressure0) fit["pressure0_gpa"] = *cfg.fit_pressure0;
  doc["fit"] = fit;
  return doc;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), "cannot open config file");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string(), e.what());
  }
  return config_from_json(doc);
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string config_hash(const RunConfig& cfg) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016llx",
                static_cast<unsigned long long>(fnv1a64(config_to_json(cfg).dump())));
  return buf;
}

}  // namespace nvdac
