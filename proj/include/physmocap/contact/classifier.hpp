#pragma once

#include <array>
#include <string>
#include <vector>

#include "physmocap/body/skeleton.hpp"
#include "physmocap/common.hpp"
#include "physmocap/dynamics/contact_solve.hpp"

namespace physmocap::contact {

constexpr int kContactPoints = 4;

// Candidate contact points in the fixed order used everywhere: left toe,
// right toe, left heel, right heel.
struct ContactPointSpec {
  std::string name;
  dynamics::ContactPoint point;
};

std::array<ContactPointSpec, kContactPoints> default_contact_points(
    const body::Skeleton& skel);

// Independent per-point logistic regressors over the contact-free net force
// vector.
struct ContactClassifier {
  VecX bias = VecX::Zero(kContactPoints);              // alpha0 per point
  MatX weights;                                        // kContactPoints x dim
  std::array<bool, kContactPoints> single_class{};     // degenerate training

  int feature_dim() const { return static_cast<int>(weights.cols()); }
  Eigen::Matrix<double, kContactPoints, 1> predict(const VecX& f) const;
};

// Full-batch penalized maximum likelihood (Newton); deterministic for a given
// sample order. Points whose labels are single-class get a constant-rate
// classifier and a raised flag. L2 penalty applies to the weights, not the
// bias.
ContactClassifier train_classifier(
    const MatX& forces,  // n x dim
    const Eigen::Matrix<double, Eigen::Dynamic, kContactPoints>& labels,
    double l2 = 1e-4);

// Per-point activity with onset anchors held fixed while active.
struct ContactState {
  std::array<bool, kContactPoints> active{};
  Eigen::Matrix<double, kContactPoints, 1> probability =
      Eigen::Matrix<double, kContactPoints, 1>::Zero();
  std::array<Vec3, kContactPoints> anchor{};
};

constexpr double kContactThreshold = 0.8;

// Activation and deactivation share the threshold (no hysteresis). A point
// that stays active keeps the anchor from its onset frame; a newly activated
// point anchors at its current world position.
ContactState select_active(
    const Eigen::Matrix<double, kContactPoints, 1>& probabilities,
    const ContactState& previous,
    const std::array<ContactPointSpec, kContactPoints>& points,
    const body::Skeleton& skel, const VecX& lengths, const VecX& q,
    double threshold = kContactThreshold);

// The active subset as holonomic constraints for the multiplier solve.
dynamics::ContactConstraintSet to_constraints(
    const ContactState& state,
    const std::array<ContactPointSpec, kContactPoints>& points);

}  // namespace physmocap::contact
