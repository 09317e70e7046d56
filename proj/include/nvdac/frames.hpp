#pragma once

// Anvil-tip stress model and the four NV frames of the diamond lattice.

#include <array>
#include <string>

#include "nvdac/spin_model.hpp"

namespace nvdac {

/// Tangential/normal stress ratio alpha and normal stress (chamber pressure).
struct AnvilStressParams {
  double alpha = 1.0;
  double pressure_gpa = 0.0;

  void validate() const;
};

/// Rotation taking cubic-frame vectors into one NV frame (rows are the NV
/// x, y, z axes written in cubic coordinates).
struct NvOrientation {
  std::string label;
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();

  /// NV axis in cubic coordinates.
  Vec3 axis() const { return rotation.row(2).transpose(); }
};

/// Applied field: magnitude in mT and a unit direction in the cubic frame.
struct LabField {
  double magnitude_mt = 0.0;
  Vec3 direction = Vec3::UnitZ();

  void validate() const;
  Vec3 vector() const { return magnitude_mt * direction; }
};

/// Cube axis carrying the anvil load and, in the measurement geometry, the
/// applied field. The anvil stress tensor is diagonal with this as third axis.
inline Vec3 anvil_axis() { return Vec3::UnitZ(); }

/// diag(alpha P, alpha P, P) in the cubic frame; off-diagonals exactly zero.
StressTensor anvil_stress(const AnvilStressParams& params);

/// The four NV frames, ordered [111], [1-1-1], [-11-1], [-1-11].
///
/// Frame 0 has z = [111]/sqrt3, x = [-1-12]/sqrt6, y = [1-10]/sqrt2, so x
/// lies in the (1-10) mirror plane pointing toward the in-plane projection
/// of the carbon neighbour at [-1-11]. Frames 1..3 are the images of frame
/// 0 under the twofold rotations about X, Y and Z, which keeps all four
/// related by lattice symmetry.
const std::array<NvOrientation, 4>& nv_orientations();

/// stress_nv = R sigma R^T, field_nv = R B.
NvFrameInputs to_nv_frame(const NvOrientation& orientation, const StressTensor& stress,
                          const LabField& field);

}  // namespace nvdac
