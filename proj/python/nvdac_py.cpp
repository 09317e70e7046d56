// Python bindings for the nvdac core.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "nvdac/calibration.hpp"
#include "nvdac/config.hpp"
#include "nvdac/error.hpp"
#include "nvdac/frames.hpp"
#include "nvdac/inversion.hpp"
#include "nvdac/spectra.hpp"
#include "nvdac/spin_model.hpp"

namespace py = pybind11;
using namespace nvdac;

PYBIND11_MODULE(nvdac, m) {
  m.doc() = "NV-center ODMR under diamond-anvil stress: spin model, spectra, fits, calibration";

  static py::exception<Error> base(m, "Error");
  py::register_exception<InvalidInput>(m, "InvalidInput", base.ptr());
  py::register_exception<InconsistentInput>(m, "InconsistentInput", base.ptr());
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<NoConvergence>(m, "NoConvergence", base.ptr());
  py::register_exception<ParseError>(m, "ParseError", base.ptr());

  // spin model
  py::class_<ZfsParams>(m, "ZfsParams")
      .def(py::init<>())
      .def(py::init([](double d, double g) { return ZfsParams{d, g}; }), py::arg("d_zero_mhz"),
           py::arg("gamma_e_mhz_per_mt") = 28.024)
      .def_readwrite("d_zero_mhz", &ZfsParams::d_zero_mhz)
      .def_readwrite("gamma_e_mhz_per_mt", &ZfsParams::gamma_e_mhz_per_mt);

  py::class_<StressCouplings>(m, "StressCouplings")
      .def(py::init<>())
      .def_readwrite("a1", &StressCouplings::a1)
      .def_readwrite("a2", &StressCouplings::a2)
      .def_readwrite("b", &StressCouplings::b)
      .def_readwrite("c", &StressCouplings::c)
      .def_readwrite("d", &StressCouplings::d)
      .def_readwrite("e", &StressCouplings::e)
      .def_readwrite("include_spin_half_mixing", &StressCouplings::include_spin_half_mixing);

  py::class_<NvFrameInputs>(m, "NvFrameInputs")
      .def(py::init<>())
      .def(py::init([](const StressTensor& s, const Vec3& b) { return NvFrameInputs{s, b}; }),
           py::arg("stress_nv"), py::arg("field_nv"))
      .def_readwrite("stress_nv", &NvFrameInputs::stress_nv)
      .def_readwrite("field_nv", &NvFrameInputs::field_nv);

  py::class_<TransitionPair>(m, "TransitionPair")
      .def(py::init<>())
      .def(py::init([](double lo, double hi) { return TransitionPair{lo, hi, false}; }))
      .def_readwrite("nu_minus", &TransitionPair::nu_minus)
      .def_readwrite("nu_plus", &TransitionPair::nu_plus)
      .def_readonly("degenerate", &TransitionPair::degenerate)
      .def_property_readonly("center", &TransitionPair::center)
      .def_property_readonly("splitting", &TransitionPair::splitting)
      .def("__repr__", [](const TransitionPair& p) {
        return "TransitionPair(" + std::to_string(p.nu_minus) + ", " + std::to_string(p.nu_plus) + ")";
      });

  m.def("build_hamiltonian", &build_hamiltonian, py::arg("params"), py::arg("couplings"),
        py::arg("inputs"));
  m.def("transition_frequencies", &transition_frequencies, py::arg("h"));
  m.def("first_order_frequencies", &first_order_frequencies, py::arg("params"), py::arg("delta"),
        py::arg("delta_sigma"), py::arg("delta_b"));

  // stress and frames
  py::class_<NvOrientation>(m, "NvOrientation")
      .def_readonly("label", &NvOrientation::label)
      .def_readonly("rotation", &NvOrientation::rotation);
  py::class_<LabField>(m, "LabField")
      .def(py::init([](double b, const Vec3& d) { return LabField{b, d}; }), py::arg("magnitude_mt"),
           py::arg("direction") = Vec3(anvil_axis()))
      .def_readwrite("magnitude_mt", &LabField::magnitude_mt)
      .def_readwrite("direction", &LabField::direction);
  m.def("anvil_stress", [](double alpha, double p) { return anvil_stress({alpha, p}); },
        py::arg("alpha"), py::arg("pressure_gpa"));
  m.def("nv_orientations", [] {
    const auto& o = nv_orientations();
    return std::vector<NvOrientation>(o.begin(), o.end());
  });
  m.def("to_nv_frame", &to_nv_frame, py::arg("orientation"), py::arg("stress"), py::arg("field"));

  // spectra
  py::class_<LineshapeParams>(m, "LineshapeParams")
      .def(py::init([](double fwhm, double lower, std::optional<double> upper, double baseline) {
             return LineshapeParams{fwhm, lower, upper.value_or(lower), baseline};
           }),
           py::arg("fwhm_mhz") = 10.0, py::arg("contrast") = -0.05,
           py::arg("contrast_upper") = py::none(), py::arg("baseline") = 1.0)
      .def_readwrite("linewidth_fwhm_mhz", &LineshapeParams::linewidth_fwhm_mhz)
      .def_readwrite("contrast_lower", &LineshapeParams::contrast_lower)
      .def_readwrite("contrast_upper", &LineshapeParams::contrast_upper)
      .def_readwrite("baseline", &LineshapeParams::baseline);
  py::class_<FrequencyGrid>(m, "FrequencyGrid")
      .def(py::init([](double a, double b, double s) { return FrequencyGrid{a, b, s}; }),
           py::arg("start_mhz") = 2600.0, py::arg("stop_mhz") = 5200.0, py::arg("step_mhz") = 1.0)
      .def("points", &FrequencyGrid::points);
  py::class_<ODMRSpectrum>(m, "ODMRSpectrum")
      .def(py::init([](std::vector<double> f, std::vector<double> pl) {
             ODMRSpectrum s{std::move(f), std::move(pl)};
             s.validate();
             return s;
           }),
           py::arg("frequencies_mhz"), py::arg("pl"))
      .def_readonly("frequencies_mhz", &ODMRSpectrum::frequencies_mhz)
      .def_readonly("pl", &ODMRSpectrum::pl);
  py::class_<ODMRMap>(m, "ODMRMap")
      .def_readonly("field_values_mt", &ODMRMap::field_values_mt)
      .def_readonly("spectra", &ODMRMap::spectra);
  m.def("synthesize_spectrum",
        [](const std::vector<TransitionPair>& pairs, const LineshapeParams& shape,
           const std::vector<double>& grid) { return synthesize_spectrum(pairs, shape, grid); },
        py::arg("pairs"), py::arg("shape"), py::arg("grid"));
  m.def("synthesize_map",
        [](double alpha, double p, const std::vector<double>& sweep, const LineshapeParams& shape,
           const FrequencyGrid& grid, const ZfsParams& params, const StressCouplings& couplings) {
          return synthesize_map(alpha, p, sweep, shape, grid, params, couplings);
        },
        py::arg("alpha"), py::arg("pressure_gpa"), py::arg("field_sweep_mt"), py::arg("shape"),
        py::arg("grid") = FrequencyGrid{}, py::arg("params") = ZfsParams{},
        py::arg("couplings") = StressCouplings{});
  m.def("add_noise", &add_noise, py::arg("spectrum"), py::arg("sigma"), py::arg("seed"));

  // inversion
  py::class_<PeakSet>(m, "PeakSet")
      .def_readonly("centers_mhz", &PeakSet::centers_mhz)
      .def_readonly("depths", &PeakSet::depths)
      .def_readonly("widths_mhz", &PeakSet::widths_mhz)
      .def_readonly("baseline", &PeakSet::baseline)
      .def_readonly("residual_rms", &PeakSet::residual_rms);
  py::class_<FieldPoint>(m, "FieldPoint")
      .def(py::init([](double b, const TransitionPair& p) { return FieldPoint{b, p}; }))
      .def_readwrite("field_mt", &FieldPoint::field_mt)
      .def_readwrite("pair", &FieldPoint::pair);
  py::class_<StressFitResult>(m, "StressFitResult")
      .def_readonly("alpha", &StressFitResult::alpha)
      .def_readonly("pressure_gpa", &StressFitResult::pressure_gpa)
      .def_readonly("alpha_sigma", &StressFitResult::alpha_sigma)
      .def_readonly("pressure_sigma", &StressFitResult::pressure_sigma)
      .def_readonly("residual_rms_mhz", &StressFitResult::residual_rms_mhz)
      .def_readonly("iterations", &StressFitResult::iterations);
  py::class_<FieldFitResult>(m, "FieldFitResult")
      .def_readonly("b_magnitude_mt", &FieldFitResult::b_magnitude_mt)
      .def_readonly("uncertainty_mt", &FieldFitResult::uncertainty_mt)
      .def_readonly("residual_rms_mhz", &FieldFitResult::residual_rms_mhz);
  py::class_<SensitivityEstimate>(m, "SensitivityEstimate")
      .def_readonly("eta_mt_per_sqrt_hz", &SensitivityEstimate::eta_mt_per_sqrt_hz)
      .def_readonly("finite", &SensitivityEstimate::finite)
      .def_readonly("note", &SensitivityEstimate::note);

  m.def("extract_peaks", [](const ODMRSpectrum& s, int n) { return extract_peaks(s, n); },
        py::arg("spectrum"), py::arg("expected_count") = 2);
  m.def("model_pair",
        [](double alpha, double p, double b, const ZfsParams& params, const StressCouplings& k) {
          return model_pair(alpha, p, b, params, k);
        },
        py::arg("alpha"), py::arg("pressure_gpa"), py::arg("field_mt"),
        py::arg("params") = ZfsParams{}, py::arg("couplings") = StressCouplings{});
  m.def("fit_stress",
        [](const std::vector<FieldPoint>& pts, const ZfsParams& params, const StressCouplings& k) {
          return fit_stress(pts, params, k);
        },
        py::arg("points"), py::arg("params") = ZfsParams{}, py::arg("couplings") = StressCouplings{});
  m.def("fit_field",
        [](const TransitionPair& pair, double alpha, double p, const ZfsParams& params,
           const StressCouplings& k) { return fit_field(pair, alpha, p, params, k); },
        py::arg("pair"), py::arg("alpha"), py::arg("pressure_gpa"), py::arg("params") = ZfsParams{},
        py::arg("couplings") = StressCouplings{});
  m.def("sensitivity_estimate", &sensitivity_estimate, py::arg("shape"), py::arg("photon_rate"),
        py::arg("d_splitting_d_b"));

  // calibration
  m.def("raman_edge_to_pressure",
        [](double dnu) { return raman_edge_to_pressure(dnu, RamanGaugeParams{}); }, py::arg("delta_nu_cm"));
  m.def("pressure_to_raman_edge",
        [](double p) { return pressure_to_raman_edge(p, RamanGaugeParams{}); }, py::arg("pressure_gpa"));
  m.def("eos_pressure_to_volume", [](double p) { return eos_pressure_to_volume(p, EosParams{}); },
        py::arg("pressure_gpa"));
  m.def("eos_volume_to_pressure", [](double v) { return eos_volume_to_pressure(v, EosParams{}); },
        py::arg("volume"));
  m.def("gruneisen_shift",
        [](double r, double gamma, double nu0) { return gruneisen_shift(r, {gamma, nu0}); },
        py::arg("v_over_v0"), py::arg("gamma") = 0.97, py::arg("nu0_cm") = 1333.0);
  m.def("zpl_energy",
        [](double v, const std::string& preset) { return zpl_energy(v, ZplLine::preset(preset)); },
        py::arg("volume"), py::arg("preset") = "micropillar");
  m.def("calibrate_a1", &calibrate_a1, py::arg("center_shift_slope"), py::arg("alpha"));
  m.def("slope_calibrated_couplings", &slope_calibrated_couplings);
}
