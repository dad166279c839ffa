#pragma once

#include <Eigen/Core>

namespace powerdyn {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Amplitude-invariant Park transform. The d axis sits at angle theta from
/// the phase-a axis and q leads d by 90 degrees, so a balanced set
/// cos(theta), cos(theta - 2pi/3), cos(theta + 2pi/3) maps to (1, 0, 0).
Vec3 abc_to_dq0(const Vec3& abc, double theta);
Vec3 dq0_to_abc(const Vec3& dq0, double theta);

/// Instantaneous magnitude of the space vector of a three-phase set.
double space_vector_magnitude(const Vec3& abc);

/// Orthonormal real modal transform for balanced (transposed) three-phase
/// elements: phase = T * mode, mode = T^T * phase. Column 0 is the ground
/// (zero-sequence) mode, columns 1 and 2 are the aerial modes.
const Mat3& modal_transform();

/// Phase-domain matrix T * diag(mode_values) * T^T.
Mat3 modal_to_phase(const Vec3& mode_values);

}  // namespace powerdyn
