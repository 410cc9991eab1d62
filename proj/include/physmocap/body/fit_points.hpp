#pragma once

#include <vector>

#include "physmocap/body/skeleton.hpp"
#include "physmocap/common.hpp"

namespace physmocap::body {

// A world-space target for a point rigidly attached to a bone.
struct PointTarget {
  int bone = 0;
  Vec3 local = Vec3::Zero();
  Vec3 world = Vec3::Zero();
};

struct FitOptions {
  int max_iterations = 60;
  double tolerance = 1e-10;       // on the squared-residual decrease
  double damping = 1e-6;          // Levenberg base
  double step_limit = 0.7;        // max |dq| per iteration, radians/meters
  std::vector<int> dofs;          // empty = all
};

struct FitResult {
  VecX q;
  double residual = 0;  // final sum of squared distances
  int iterations = 0;
  bool converged = false;
};

// Damped Gauss-Newton on sum |world(point, q) - target|^2 over the selected
// dofs. Only steps that decrease the objective are accepted.
FitResult fit_point_targets(const Skeleton& skel, const VecX& lengths,
                            const VecX& q_init,
                            const std::vector<PointTarget>& targets,
                            const FitOptions& opts = {});

}  // namespace physmocap::body
