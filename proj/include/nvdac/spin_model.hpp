#pragma once

// Ground-state spin Hamiltonian of the NV center (S = 1) under stress and
// magnetic field, expressed in a single NV frame.
//
// Units are fixed throughout the library: frequencies in MHz, stress in GPa,
// magnetic field in mT. Matrix basis ordering is m_s = +1, 0, -1.

#include <Eigen/Dense>

namespace nvdac {

using SpinMatrix = Eigen::Matrix3cd;
using StressTensor = Eigen::Matrix3d;
using Vec3 = Eigen::Vector3d;

struct ZfsParams {
  double d_zero_mhz = 2870.0;
  double gamma_e_mhz_per_mt = 28.024;

  void validate() const;
};

/// Spin-stress coupling constants of the C3v parameterization, MHz/GPa.
///
/// In the cubic crystal frame of an NV along [111]:
///   Mz = a1 (sXX+sYY+sZZ) + 2 a2 (sYZ+sZX+sXY)
///   Mx = b (2sZZ-sXX-sYY) + c (2sXY-sYZ-sZX)
///   My = sqrt3 b (sXX-sYY) + sqrt3 c (sYZ-sZX)
/// and Nx, Ny take the Mx, My form with (d, e) in place of (b, c).
/// build_hamiltonian() evaluates the same functionals on NV-frame stress.
struct StressCouplings {
  double a1 = 4.86;
  double a2 = -3.7;
  double b = -2.3;
  double c = 3.5;
  // Axial-transverse couplings, only read when include_spin_half_mixing.
  double d = 0.0;
  double e = 0.0;
  bool include_spin_half_mixing = false;

  void validate() const;
};

struct NvFrameInputs {
  StressTensor stress_nv = StressTensor::Zero();
  Vec3 field_nv = Vec3::Zero();
};

/// Transition frequencies out of the m_s = 0-like eigenstate, ascending.
struct TransitionPair {
  double nu_minus = 0.0;
  double nu_plus = 0.0;
  // Set when all three levels coincide to within 1e-6 MHz.
  bool degenerate = false;

  double center() const { return 0.5 * (nu_minus + nu_plus); }
  double splitting() const { return nu_plus - nu_minus; }
};

/// Scalar stress terms multiplying the spin operators.
struct StressTerms {
  double mz = 0.0;
  double mx = 0.0;
  double my = 0.0;
  double nx = 0.0;
  double ny = 0.0;
};

StressTerms stress_terms(const StressCouplings& couplings, const StressTensor& stress_nv);

/// H = (D + Mz) Sz^2 + Mx (Sy^2 - Sx^2) + My {Sx,Sy} + Nx {Sx,Sz} + Ny {Sy,Sz}
///     + gamma_e B.S
/// Throws InvalidInput if stress_nv is not symmetric to 1e-12 GPa.
SpinMatrix build_hamiltonian(const ZfsParams& params, const StressCouplings& couplings,
                             const NvFrameInputs& inputs);

/// Exact diagonalization. The reference level is the eigenvector with the
/// largest |<0|psi>|^2 (ties go to the lowest eigenvalue).
TransitionPair transition_frequencies(const SpinMatrix& h);

/// First-order closed form: nu = D + delta -/+ Delta/2,
/// Delta = sqrt(delta_sigma^2 + delta_b^2).
TransitionPair first_order_frequencies(const ZfsParams& params, double delta_mhz,
                                       double delta_sigma_mhz, double delta_b_mhz);

/// Convenience: build_hamiltonian followed by transition_frequencies.
TransitionPair nv_transitions(const ZfsParams& params, const StressCouplings& couplings,
                              const NvFrameInputs& inputs);

namespace spin1 {
SpinMatrix sx();
SpinMatrix sy();
SpinMatrix sz();
}  // namespace spin1

}  // namespace nvdac
