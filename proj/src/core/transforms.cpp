#include "powerdyn/core/transforms.hpp"

#include <cmath>
#include <numbers>

namespace powerdyn {

// Both transforms go through the stationary alpha-beta frame so that each
// call needs a single sine/cosine pair.

Vec3 abc_to_dq0(const Vec3& abc, double theta) {
  const double alpha = (2.0 * abc[0] - abc[1] - abc[2]) / 3.0;
  const double beta = (abc[1] - abc[2]) / std::numbers::sqrt3;
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return {alpha * c + beta * s, beta * c - alpha * s, (abc[0] + abc[1] + abc[2]) / 3.0};
}

Vec3 dq0_to_abc(const Vec3& dq0, double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const double alpha = dq0[0] * c - dq0[1] * s;
  const double beta = dq0[0] * s + dq0[1] * c;
  const double half = 0.5 * std::numbers::sqrt3 * beta;
  return {alpha + dq0[2], -0.5 * alpha + half + dq0[2], -0.5 * alpha - half + dq0[2]};
}

double space_vector_magnitude(const Vec3& abc) {
  const double alpha = (2.0 * abc[0] - abc[1] - abc[2]) / 3.0;
  const double beta = (abc[1] - abc[2]) / std::numbers::sqrt3;
  return std::hypot(alpha, beta);
}

const Mat3& modal_transform() {
  static const Mat3 t = [] {
    Mat3 m;
    const double a = 1.0 / std::sqrt(3.0);
    const double b = 1.0 / std::sqrt(6.0);
    const double c = 1.0 / std::sqrt(2.0);
    m << a, 2.0 * b, 0.0,
         a, -b, c,
         a, -b, -c;
    return m;
  }();
  return t;
}

Mat3 modal_to_phase(const Vec3& mode_values) {
  const Mat3& t = modal_transform();
  return t * mode_values.asDiagonal() * t.transpose();
}

}  // namespace powerdyn
