#include "nvdac/spin_model.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numeric>
#include <string>

#include "nvdac/error.hpp"

namespace nvdac {

namespace {

constexpr double kSymmetryTolGpa = 1e-12;
constexpr double kDegenerateTolMhz = 1e-6;

using cd = std::complex<double>;

}  // namespace

namespace spin1 {

SpinMatrix sx() {
  const double r = 1.0 / std::sqrt(2.0);
  SpinMatrix m;
  m << 0, r, 0,
       r, 0, r,
       0, r, 0;
  return m;
}

SpinMatrix sy() {
  const cd r(0.0, 1.0 / std::sqrt(2.0));
  SpinMatrix m;
  m << 0, -r, 0,
       r, 0, -r,
       0, r, 0;
  return m;
}

SpinMatrix sz() {
  SpinMatrix m = SpinMatrix::Zero();
  m(0, 0) = 1.0;
  m(2, 2) = -1.0;
  return m;
}

}  // namespace spin1

void ZfsParams::validate() const {
  if (!(d_zero_mhz > 0.0) || !std::isfinite(d_zero_mhz))
    throw InvalidInput("d_zero_mhz must be positive and finite");
  if (!(gamma_e_mhz_per_mt > 0.0) || !std::isfinite(gamma_e_mhz_per_mt))
    throw InvalidInput("gamma_e_mhz_per_mt must be positive and finite");
}

void StressCouplings::validate() const {
  for (double v : {a1, a2, b, c, d, e})
    if (!std::isfinite(v)) throw InvalidInput("stress couplings must be finite");
}

StressTerms stress_terms(const StressCouplings& k, const StressTensor& s) {
  // The cubic-frame functionals rewritten on NV-frame components, for the
  // frame convention of nv_orientations() (x toward the in-plane projection
  // of a carbon neighbour, z along the NV axis).
  const double sqrt2 = std::sqrt(2.0);
  const double trace = s.trace();
  const double axial = 2.0 * s(2, 2) - s(0, 0) - s(1, 1);
  const double e1 = s(0, 0) - s(1, 1);
  const double e2 = -2.0 * s(0, 1);

  StressTerms t;
  t.mz = k.a1 * trace + k.a2 * axial;
  t.mx = (k.b + k.c) * e1 + sqrt2 * (2.0 * k.b - k.c) * s(0, 2);
  t.my = (k.b + k.c) * e2 + sqrt2 * (2.0 * k.b - k.c) * s(1, 2);
  if (k.include_spin_half_mixing) {
    t.nx = (k.d + k.e) * e1 + sqrt2 * (2.0 * k.d - k.e) * s(0, 2);
    t.ny = (k.d + k.e) * e2 + sqrt2 * (2.0 * k.d - k.e) * s(1, 2);
  }
  return t;
}

SpinMatrix build_hamiltonian(const ZfsParams& params, const StressCouplings& couplings,
                             const NvFrameInputs& inputs) {
  params.validate();
  couplings.validate();
  const StressTensor& s = inputs.stress_nv;
  if (!s.allFinite() || !inputs.field_nv.allFinite())
    throw InvalidInput("stress and field must be finite");
  if ((s - s.transpose()).cwiseAbs().maxCoeff() > kSymmetryTolGpa)
    throw InvalidInput("stress_nv is not symmetric");

  const SpinMatrix sx = spin1::sx();
  const SpinMatrix sy = spin1::sy();
  const SpinMatrix sz = spin1::sz();
  const StressTerms t = stress_terms(couplings, s);
  const Vec3& b = inputs.field_nv;
  const double g = params.gamma_e_mhz_per_mt;

  SpinMatrix h = (params.d_zero_mhz + t.mz) * sz * sz
               + t.mx * (sy * sy - sx * sx)
               + t.my * (sx * sy + sy * sx)
               + g * (b.x() * sx + b.y() * sy + b.z() * sz);
  if (couplings.include_spin_half_mixing)
    h += t.nx * (sx * sz + sz * sx) + t.ny * (sy * sz + sz * sy);
  // Symmetrize away round-off in the operator products.
  return 0.5 * (h + h.adjoint());
}

TransitionPair transition_frequencies(const SpinMatrix& h) {
  const Eigen::SelfAdjointEigenSolver<SpinMatrix> solver(h);
  if (solver.info() != Eigen::Success)
    throw InvalidInput("eigen decomposition failed");
  const Eigen::Vector3d& evals = solver.eigenvalues();  // ascending
  const SpinMatrix& evecs = solver.eigenvectors();

  int ref = 0;
  double best = -1.0;
  for (int i = 0; i < 3; ++i) {
    const double weight = std::norm(evecs(1, i));
    // Strict comparison keeps the lowest eigenvalue on ties.
    if (weight > best + 1e-12) {
      best = weight;
      ref = i;
    }
  }
  std::array<double, 2> f{};
  int k = 0;
  for (int i = 0; i < 3; ++i)
    if (i != ref) f[k++] = std::abs(evals(i) - evals(ref));
  std::sort(f.begin(), f.end());

  TransitionPair pair{f[0], f[1], false};
  pair.degenerate = (evals(2) - evals(0)) < kDegenerateTolMhz;
  return pair;
}

TransitionPair first_order_frequencies(const ZfsParams& params, double delta_mhz,
                                       double delta_sigma_mhz, double delta_b_mhz) {
  if (delta_sigma_mhz < 0.0 || delta_b_mhz < 0.0)
    throw InvalidInput("splittings must be non-negative");
  const double half = 0.5 * std::hypot(delta_sigma_mhz, delta_b_mhz);
  const double centre = params.d_zero_mhz + delta_mhz;
  return {centre - half, centre + half, false};
}

TransitionPair nv_transitions(const ZfsParams& params, const StressCouplings& couplings,
                              const NvFrameInputs& inputs) {
  return transition_frequencies(build_hamiltonian(params, couplings, inputs));
}

}  // namespace nvdac
