#pragma once

#include <vector>

#include "physmocap/body/inertia.hpp"
#include "physmocap/body/skeleton.hpp"
#include "physmocap/common.hpp"

namespace physmocap::dynamics {

// Net generalized forces over the full DOF vector; the first six entries are
// the free root joint ("jet-pack" forces).
struct GeneralizedForces {
  VecX f;

  static constexpr int kRootDofs = 6;
  Eigen::VectorBlock<const VecX> root() const { return f.head(kRootDofs); }
  Eigen::VectorBlock<const VecX> non_root() const {
    return f.tail(f.size() - kRootDofs);
  }
};

// Immutable articulated-body description for the physics prior: kinematic
// tree with anthropometrics baked in, per-bone inertial properties, gravity
// and the frame timestep.
class DynamicsContext {
 public:
  struct BoneParams {
    int parent = -1;
    Vec3 offset = Vec3::Zero();  // in parent frame, fixed at construction
    std::vector<int> axes;       // enabled rotation axes, 0/1/2 for x/y/z
    double mass = 0;
    Vec3 com = Vec3::Zero();     // bone frame
    Mat3 inertia = Mat3::Zero(); // bone frame, about com
  };

  DynamicsContext(const body::Skeleton& skel, const VecX& lengths,
                  const std::vector<body::BoneInertia>& inertia,
                  double timestep, const Vec3& gravity = {0, 0, -kGravity});

  int dof_count() const { return dofs_; }
  double timestep() const { return h_; }
  const Vec3& gravity() const { return gravity_; }
  const std::vector<BoneParams>& bones() const { return bones_; }
  double total_mass() const;

  // Continuous Lagrangian T - V at (q, qdot).
  double lagrangian(const VecX& q, const VecX& qdot) const;

 private:
  std::vector<BoneParams> bones_;
  int dofs_ = 0;
  double h_ = 1.0 / 30.0;
  Vec3 gravity_;

  friend double discrete_lagrangian(const DynamicsContext&, const VecX&,
                                    const VecX&);
  friend VecX d1_discrete_lagrangian(const DynamicsContext&, const VecX&,
                                     const VecX&);
  friend VecX d2_discrete_lagrangian(const DynamicsContext&, const VecX&,
                                     const VecX&);
};

// Midpoint-rule discrete Lagrangian over one step:
// h * L((qa+qb)/2, (qb-qa)/h).
double discrete_lagrangian(const DynamicsContext& ctx, const VecX& qa,
                           const VecX& qb);

// Exact gradients with respect to the first / second argument.
VecX d1_discrete_lagrangian(const DynamicsContext& ctx, const VecX& qa,
                            const VecX& qb);
VecX d2_discrete_lagrangian(const DynamicsContext& ctx, const VecX& qa,
                            const VecX& qb);

// Discrete Euler-Lagrange residual over a pose triple,
//   E = D1 Ld(q_k, q_{k+1}) + D2 Ld(q_{k-1}, q_k).
// Zero along force-free trajectories of the variational integrator; otherwise
// the net generalized impulse associated with step k.
GeneralizedForces euler_lagrange_residual(const DynamicsContext& ctx,
                                          const VecX& q_prev, const VecX& q_cur,
                                          const VecX& q_next);

}  // namespace physmocap::dynamics
