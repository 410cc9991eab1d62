#pragma once

#include <vector>

#include "physmocap/body/skeleton.hpp"
#include "physmocap/common.hpp"
#include "physmocap/dynamics/dynamics.hpp"

namespace physmocap::dynamics {

// A candidate contact point, rigidly attached to a bone.
struct ContactPoint {
  int bone = 0;
  Vec3 local = Vec3::Zero();
};

// One active holonomic constraint g(q) = world(point, q) - anchor = 0.
// The anchor is the point's world position at contact onset and stays fixed
// while the contact is active.
struct ActiveContact {
  int point_id = 0;
  ContactPoint point;
  Vec3 anchor = Vec3::Zero();
};

struct ContactConstraintSet {
  std::vector<ActiveContact> active;

  int rows() const { return 3 * static_cast<int>(active.size()); }
};

Vec3 contact_world_position(const body::Skeleton& skel, const VecX& lengths,
                            const VecX& q, const ContactPoint& p);

// Stacked g(q), 3 rows per active contact.
VecX constraint_values(const body::Skeleton& skel, const VecX& lengths,
                       const ContactConstraintSet& set, const VecX& q);

// Analytic d g / d q, (3 * contacts) x dof.
MatX constraint_jacobian(const body::Skeleton& skel, const VecX& lengths,
                         const ContactConstraintSet& set, const VecX& q);

struct MultiplierSolution {
  VecX lambda;             // 3 per active contact
  bool degenerate = false; // rank-deficient normal matrix, min-norm answer
};

// Contact forces minimizing the root-weighted norm of E + J^T lambda where
// the weight is I_root + eps * I. Rank deficiency (e.g. duplicated contact
// points) falls back to the minimum-norm solution and is flagged.
MultiplierSolution solve_contact_multipliers(const VecX& e, const MatX& jac,
                                             double eps = 1e-6);

// f* = E + J^T lambda.
GeneralizedForces net_forces(const VecX& e, const MatX& jac,
                             const VecX& lambda);

// The minimized objective |I_root (E + J^T lambda)|^2 (no regularizer), used
// by the prior and by test oracles.
double root_force_objective(const VecX& e, const MatX& jac, const VecX& lambda);

}  // namespace physmocap::dynamics
