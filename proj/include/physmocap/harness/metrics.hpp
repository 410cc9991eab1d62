#pragma once

#include <array>
#include <optional>
#include <vector>

#include "physmocap/common.hpp"
#include "physmocap/contact/classifier.hpp"

namespace physmocap::harness {

// RMSE over all joints and frames of the Euclidean prediction error.
double mjpe(const std::vector<std::vector<Vec3>>& predicted,
            const std::vector<std::vector<Vec3>>& truth);

// Fraction of joint predictions strictly within `radius` of the target.
double mjie(const std::vector<std::vector<Vec3>>& predicted,
            const std::vector<std::vector<Vec3>>& truth,
            double radius = 0.10);

// Mean over contact intervals of the maximum horizontal displacement of the
// contact point from its position at interval onset. Empty optional when the
// labels contain no contact interval.
std::optional<double> foot_skate(
    const std::vector<std::array<Vec3, contact::kContactPoints>>& positions,
    const std::vector<std::array<bool, contact::kContactPoints>>& labels);

// Mean second-difference magnitude of the joints divided by h^2.
double jitter(const std::vector<std::vector<Vec3>>& joints, double h);

struct EvalReport {
  double mjpe = 0;
  double mjie = 0;
  std::optional<double> foot_skate;
  double jitter = 0;
  Eigen::Matrix<double, contact::kContactPoints, 1> contact_accuracy =
      Eigen::Matrix<double, contact::kContactPoints, 1>::Constant(-1);
};

}  // namespace physmocap::harness
