#include "nvdac/frames.hpp"

#include <cmath>

#include "nvdac/error.hpp"

namespace nvdac {

void AnvilStressParams::validate() const {
  if (!(alpha > 0.0 && alpha <= 1.5))
    throw InvalidInput("alpha must lie in (0, 1.5]");
  if (!(pressure_gpa >= 0.0) || !std::isfinite(pressure_gpa))
    throw InvalidInput("pressure must be finite and non-negative");
}

void LabField::validate() const {
  if (!(magnitude_mt >= 0.0) || !std::isfinite(magnitude_mt))
    throw InvalidInput("field magnitude must be finite and non-negative");
  if (std::abs(direction.norm() - 1.0) > 1e-12)
    throw InvalidInput("field direction must be a unit vector");
}

StressTensor anvil_stress(const AnvilStressParams& params) {
  params.validate();
  const double tangential = params.alpha * params.pressure_gpa;
  return Vec3(tangential, tangential, params.pressure_gpa).asDiagonal();
}

namespace {

std::array<NvOrientation, 4> make_orientations() {
  Eigen::Matrix3d base;
  base.row(0) = Vec3(-1, -1, 2).normalized();
  base.row(1) = Vec3(1, -1, 0).normalized();
  base.row(2) = Vec3(1, 1, 1).normalized();

  const std::array<Eigen::Matrix3d, 4> ops = {
      Eigen::Matrix3d::Identity(),
      Vec3(1, -1, -1).asDiagonal().toDenseMatrix(),
      Vec3(-1, 1, -1).asDiagonal().toDenseMatrix(),
      Vec3(-1, -1, 1).asDiagonal().toDenseMatrix(),
  };
  const std::array<const char*, 4> labels = {"[111]", "[1-1-1]", "[-11-1]", "[-1-11]"};

  std::array<NvOrientation, 4> out;
  for (std::size_t k = 0; k < 4; ++k) {
    // Rows transform as vectors: x_k = C_k x_0, so R_k = R_0 C_k^T.
    out[k].label = labels[k];
    out[k].rotation = base * ops[k].transpose();
  }
  return out;
}

}  // namespace

const std::array<NvOrientation, 4>& nv_orientations() {
  static const std::array<NvOrientation, 4> orientations = make_orientations();
  return orientations;
}

NvFrameInputs to_nv_frame(const NvOrientation& orientation, const StressTensor& stress,
                          const LabField& field) {
  field.validate();
  const Eigen::Matrix3d& r = orientation.rotation;
  NvFrameInputs in;
  in.stress_nv = r * stress * r.transpose();
  in.stress_nv = 0.5 * (in.stress_nv + in.stress_nv.transpose()).eval();
  in.field_nv = r * field.vector();
  return in;
}

}  // namespace nvdac
