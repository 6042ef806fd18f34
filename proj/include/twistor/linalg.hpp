#pragma once

#include <Eigen/Dense>

namespace twistor {

using Vec2 = Eigen::Vector2d;
using Mat3 = Eigen::Matrix3d;
using Vec3 = Eigen::Vector3d;
using Mat4 = Eigen::Matrix4d;
using Vec4 = Eigen::Vector4d;
using Mat6 = Eigen::Matrix<double, 6, 6>;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat64 = Eigen::Matrix<double, 6, 4>;
using MatX = Eigen::MatrixXd;
using VecX = Eigen::VectorXd;

// Matrix of v -> w x v.
inline Mat3 cross_matrix(const Vec3& w) {
  Mat3 m;
  m << 0.0, -w.z(), w.y(), w.z(), 0.0, -w.x(), -w.y(), w.x(), 0.0;
  return m;
}

// Inverse of cross_matrix for an antisymmetric 3x3 matrix.
inline Vec3 axial_vector(const Mat3& m) {
  return Vec3(0.5 * (m(2, 1) - m(1, 2)), 0.5 * (m(0, 2) - m(2, 0)),
              0.5 * (m(1, 0) - m(0, 1)));
}

}  // namespace twistor
