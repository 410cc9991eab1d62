#pragma once

#include <array>
#include <string>
#include <vector>

#include "physmocap/common.hpp"

namespace physmocap::body {

// One rigid body part. The joint connecting it to its parent sits at
// `offset_per_length * lengths[parent]` in the parent frame, so every child
// offset scales with the parent bone's anthropometric length. Rotations are
// fixed-order XYZ Euler angles; `dof` masks which of the three are free.
struct Bone {
  std::string name;
  int parent = -1;
  Vec3 offset_per_length = Vec3::Zero();
  double mean_length = 0.1;
  std::array<bool, 3> dof = {true, true, true};
};

struct Skeleton {
  std::vector<Bone> bones;

  // Generalized-coordinate layout: q[0..2] root translation, q[3..5] root
  // rotation, then each bone's enabled angles in bone order, x before y
  // before z. Filled by finalize().
  std::vector<int> dof_offset;
  int total_dofs = 0;

  void finalize();
  int bone_count() const { return static_cast<int>(bones.size()); }
  int dof_count() const { return total_dofs; }
  int bone_dof_count(int b) const;
  VecX mean_lengths() const;
  int bone_index(const std::string& name) const;  // -1 when absent
  // q index of a bone's rotation about the given axis; -1 when masked out.
  int dof_index(int bone, int axis) const;
};

// The default 26-part / 69-DOF humanoid. The canonical copy lives in
// data/default_skeleton.json; see tests/unit_io.cpp for the consistency check.
Skeleton default_skeleton();

// World placement of every bone plus the per-DOF rotation axes and centers
// needed for analytic Jacobians.
struct FkResult {
  std::vector<Iso3> world;          // bone local -> world
  std::vector<Vec3> dof_axis;       // unit axis (rotational) or direction (translational)
  std::vector<Vec3> dof_origin;     // rotation center, world
  std::vector<bool> dof_translational;
  std::vector<int> dof_bone;        // owning bone per dof
};

FkResult forward_kinematics(const Skeleton& skel, const VecX& lengths,
                            const VecX& q);

// Just the rigid transforms (bone-local to world).
std::vector<Iso3> bone_transforms(const Skeleton& skel, const VecX& lengths,
                                  const VecX& q);

// World position of every bone's proximal joint.
std::vector<Vec3> joint_positions(const Skeleton& skel, const VecX& lengths,
                                  const VecX& q);

// For each bone, the dof indices of it and all its ancestors (sorted).
std::vector<std::vector<int>> ancestor_dofs(const Skeleton& skel);

// d(world point)/dq for a point rigidly attached to `bone`, given FK frames.
// Writes into jac (3 x dof_count), adding w * contribution.
void accumulate_point_jacobian(const Skeleton& skel, const FkResult& fk,
                               const std::vector<std::vector<int>>& anc,
                               int bone, const Vec3& world_point, double w,
                               Eigen::Ref<MatX> jac);

Mat3 euler_xyz(double ax, double ay, double az);
// Euler XYZ angles reproducing R (gimbal-guarded; |ay| near pi/2 collapses to
// a consistent branch).
Vec3 euler_xyz_angles(const Mat3& r);

}  // namespace physmocap::body
