#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace physmocap {

using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;
using Mat34 = Eigen::Matrix<double, 3, 4>;
using VecX = Eigen::VectorXd;
using MatX = Eigen::MatrixXd;
using Iso3 = Eigen::Isometry3d;

constexpr double kGravity = 9.81;       // m/s^2, acts along -z
constexpr int kShapeRank = 10;

struct Triangle {
  std::uint32_t a, b, c;
};

/// Thrown when an operation receives input violating its preconditions.
class InvalidInput : public std::runtime_error {
 public:
  explicit InvalidInput(const std::string& msg) : std::runtime_error(msg) {}
};

inline bool all_finite(const VecX& v) { return v.allFinite(); }

}  // namespace physmocap
