#include "physmocap/dynamics/contact_solve.hpp"

#include <Eigen/Dense>

namespace physmocap::dynamics {

Vec3 contact_world_position(const body::Skeleton& skel, const VecX& lengths,
                            const VecX& q, const ContactPoint& p) {
  const auto world = body::bone_transforms(skel, lengths, q);
  return world[p.bone] * p.local;
}

VecX constraint_values(const body::Skeleton& skel, const VecX& lengths,
                       const ContactConstraintSet& set, const VecX& q) {
  VecX g(set.rows());
  if (set.active.empty()) return g;
  const auto world = body::bone_transforms(skel, lengths, q);
  for (std::size_t c = 0; c < set.active.size(); ++c) {
    const ActiveContact& a = set.active[c];
    g.segment<3>(3 * c) = world[a.point.bone] * a.point.local - a.anchor;
  }
  return g;
}

MatX constraint_jacobian(const body::Skeleton& skel, const VecX& lengths,
                         const ContactConstraintSet& set, const VecX& q) {
  MatX jac = MatX::Zero(set.rows(), skel.dof_count());
  if (set.active.empty()) return jac;
  const auto fk = body::forward_kinematics(skel, lengths, q);
  const auto anc = body::ancestor_dofs(skel);
  for (std::size_t c = 0; c < set.active.size(); ++c) {
    const ActiveContact& a = set.active[c];
    const Vec3 world_point = fk.world[a.point.bone] * a.point.local;
    auto block = jac.middleRows<3>(3 * c);
    body::accumulate_point_jacobian(skel, fk, anc, a.point.bone, world_point,
                                    1.0, block);
  }
  return jac;
}

MultiplierSolution solve_contact_multipliers(const VecX& e, const MatX& jac,
                                             double eps) {
  MultiplierSolution sol;
  if (jac.rows() == 0) {
    sol.lambda = VecX();
    return sol;
  }
  if (jac.cols() != e.size())
    throw InvalidInput("solve_contact_multipliers: shape mismatch");

  // Root selection only; the constant on the diagonal goes onto the normal
  // matrix, which is what makes the inverse exist for three or more contacts
  // (J I_root J^T has rank at most 6).
  const auto root = Eigen::seqN(0, GeneralizedForces::kRootDofs);
  const MatX j_root = jac(Eigen::all, root);        // (3c) x 6
  MatX normal = j_root * j_root.transpose();        // J I_root J^T
  const VecX rhs = -(j_root * e(root));

  // Rank deficiency (duplicated contact points and the like) still yields a
  // finite shrunk solution; flag it for the caller's diagnostics.
  sol.degenerate =
      Eigen::CompleteOrthogonalDecomposition<MatX>(normal).rank() <
      normal.rows();
  normal.diagonal().array() += eps;
  sol.lambda = normal.ldlt().solve(rhs);
  return sol;
}

GeneralizedForces net_forces(const VecX& e, const MatX& jac,
                             const VecX& lambda) {
  GeneralizedForces out;
  if (lambda.size() == 0) {
    out.f = e;
    return out;
  }
  if (jac.rows() != lambda.size() || jac.cols() != e.size())
    throw InvalidInput("net_forces: shape mismatch");
  out.f = e + jac.transpose() * lambda;
  return out;
}

double root_force_objective(const VecX& e, const MatX& jac,
                            const VecX& lambda) {
  const VecX f = lambda.size() == 0 ? e : VecX(e + jac.transpose() * lambda);
  return f.head(GeneralizedForces::kRootDofs).squaredNorm();
}

}  // namespace physmocap::dynamics
