#include "physmocap/body/skeleton.hpp"

#include <cmath>

namespace physmocap::body {

void Skeleton::finalize() {
  if (bones.empty() || bones[0].parent != -1)
    throw InvalidInput("skeleton: bone 0 must be the root");
  dof_offset.assign(bones.size(), 0);
  int cursor = 6;  // root translation + rotation
  dof_offset[0] = 3;
  for (std::size_t b = 1; b < bones.size(); ++b) {
    if (bones[b].parent < 0 || bones[b].parent >= static_cast<int>(b))
      throw InvalidInput("skeleton: bones must be topologically ordered");
    dof_offset[b] = cursor;
    for (bool d : bones[b].dof) cursor += d ? 1 : 0;
  }
  total_dofs = cursor;
}

int Skeleton::bone_dof_count(int b) const {
  if (b == 0) return 6;
  int n = 0;
  for (bool d : bones[b].dof) n += d ? 1 : 0;
  return n;
}

VecX Skeleton::mean_lengths() const {
  VecX l(bone_count());
  for (int b = 0; b < bone_count(); ++b) l[b] = bones[b].mean_length;
  return l;
}

int Skeleton::bone_index(const std::string& name) const {
  for (int b = 0; b < bone_count(); ++b)
    if (bones[b].name == name) return b;
  return -1;
}

int Skeleton::dof_index(int bone, int axis) const {
  if (bone == 0) return 3 + axis;
  if (!bones[bone].dof[axis]) return -1;
  int off = dof_offset[bone];
  for (int a = 0; a < axis; ++a) off += bones[bone].dof[a] ? 1 : 0;
  return off;
}

Mat3 euler_xyz(double ax, double ay, double az) {
  return (Eigen::AngleAxisd(ax, Vec3::UnitX()) *
          Eigen::AngleAxisd(ay, Vec3::UnitY()) *
          Eigen::AngleAxisd(az, Vec3::UnitZ()))
      .toRotationMatrix();
}

Vec3 euler_xyz_angles(const Mat3& r) {
  // R = Rx Ry Rz: r(0,2) = sin(ay)
  const double sy = std::clamp(r(0, 2), -1.0, 1.0);
  const double ay = std::asin(sy);
  if (std::abs(sy) < 1.0 - 1e-9) {
    return {std::atan2(-r(1, 2), r(2, 2)), ay, std::atan2(-r(0, 1), r(0, 0))};
  }
  // Gimbal: ax and az are coupled; put everything in ax.
  return {std::atan2(r(2, 1), r(1, 1)), ay, 0.0};
}

FkResult forward_kinematics(const Skeleton& skel, const VecX& lengths,
                            const VecX& q) {
  const int nb = skel.bone_count();
  if (lengths.size() != nb)
    throw InvalidInput("forward_kinematics: anthropometrics size mismatch");
  if (q.size() != skel.dof_count())
    throw InvalidInput("forward_kinematics: pose size mismatch");
  if (!q.allFinite()) throw InvalidInput("forward_kinematics: non-finite pose");
  for (int b = 0; b < nb; ++b)
    if (!(lengths[b] > 0))
      throw InvalidInput("forward_kinematics: non-positive bone length");

  FkResult fk;
  fk.world.resize(nb);
  fk.dof_axis.resize(skel.dof_count());
  fk.dof_origin.resize(skel.dof_count());
  fk.dof_translational.assign(skel.dof_count(), false);
  fk.dof_bone.resize(skel.dof_count());

  for (int b = 0; b < nb; ++b) {
    Iso3 base;
    int cursor;
    std::array<bool, 3> dof;
    if (b == 0) {
      base = Iso3(Eigen::Translation3d(q.head<3>()));
      cursor = 3;
      dof = {true, true, true};
      for (int i = 0; i < 3; ++i) {
        fk.dof_axis[i] = Vec3::Unit(i);
        fk.dof_origin[i] = Vec3::Zero();
        fk.dof_translational[i] = true;
        fk.dof_bone[i] = 0;
      }
    } else {
      const Bone& bone = skel.bones[b];
      const Iso3& pw = fk.world[bone.parent];
      base = pw * Eigen::Translation3d(bone.offset_per_length *
                                       lengths[bone.parent]);
      cursor = skel.dof_offset[b];
      dof = bone.dof;
    }
    const Vec3 origin = base.translation();
    Iso3 w = base;
    for (int axis = 0; axis < 3; ++axis) {
      if (!dof[axis]) continue;
      fk.dof_axis[cursor] = w.linear() * Vec3::Unit(axis);
      fk.dof_origin[cursor] = origin;
      fk.dof_bone[cursor] = b;
      w = w * Eigen::AngleAxisd(q[cursor], Vec3::Unit(axis));
      ++cursor;
    }
    fk.world[b] = w;
  }
  return fk;
}

std::vector<Iso3> bone_transforms(const Skeleton& skel, const VecX& lengths,
                                  const VecX& q) {
  return forward_kinematics(skel, lengths, q).world;
}

std::vector<Vec3> joint_positions(const Skeleton& skel, const VecX& lengths,
                                  const VecX& q) {
  const auto fk = forward_kinematics(skel, lengths, q);
  std::vector<Vec3> out(skel.bone_count());
  for (int b = 0; b < skel.bone_count(); ++b)
    out[b] = fk.world[b].translation();
  return out;
}

std::vector<std::vector<int>> ancestor_dofs(const Skeleton& skel) {
  std::vector<std::vector<int>> anc(skel.bone_count());
  for (int b = 0; b < skel.bone_count(); ++b) {
    if (b == 0) {
      anc[0] = {0, 1, 2, 3, 4, 5};
      continue;
    }
    anc[b] = anc[skel.bones[b].parent];
    const int off = skel.dof_offset[b];
    for (int k = 0; k < skel.bone_dof_count(b); ++k) anc[b].push_back(off + k);
  }
  return anc;
}

void accumulate_point_jacobian(const Skeleton& skel, const FkResult& fk,
                               const std::vector<std::vector<int>>& anc,
                               int bone, const Vec3& world_point, double w,
                               Eigen::Ref<MatX> jac) {
  (void)skel;
  for (int j : anc[bone]) {
    if (fk.dof_translational[j]) {
      jac.col(j) += w * fk.dof_axis[j];
    } else {
      jac.col(j) += w * fk.dof_axis[j].cross(world_point - fk.dof_origin[j]);
    }
  }
}

namespace {

Bone make(const std::string& name, int parent, const Vec3& offset,
          double parent_len, double own_len, std::array<bool, 3> dof) {
  Bone b;
  b.name = name;
  b.parent = parent;
  b.offset_per_length = parent_len > 0 ? Vec3(offset / parent_len) : offset;
  b.mean_length = own_len;
  b.dof = dof;
  return b;
}

}  // namespace

Skeleton default_skeleton() {
  constexpr std::array<bool, 3> ball = {true, true, true};
  constexpr std::array<bool, 3> hinge_x = {true, false, false};
  constexpr std::array<bool, 3> elbow = {true, false, true};   // twist + flex
  constexpr std::array<bool, 3> ankle = {true, true, false};   // flex + roll

  Skeleton s;
  auto& b = s.bones;
  // Segment lengths, meters. Offsets are expressed at mean anthropometrics
  // and divided by the parent length inside make().
  const double l_pelvis = 0.10, l_spine = 0.10, l_chest = 0.12, l_neck = 0.05,
               l_head = 0.12, l_clav = 0.14, l_uarm = 0.29, l_farm = 0.26,
               l_hand = 0.09, l_fing = 0.09, l_thigh = 0.43, l_shin = 0.42,
               l_foot = 0.14, l_toe = 0.07;

  b.push_back(make("pelvis", -1, Vec3::Zero(), 0, l_pelvis, ball));        // 0
  b.push_back(make("spine_01", 0, {0, 0, l_pelvis}, l_pelvis, l_spine, ball));
  b.push_back(make("spine_02", 1, {0, 0, l_spine}, l_spine, l_spine, ball));
  b.push_back(make("spine_03", 2, {0, 0, l_spine}, l_spine, l_spine, ball));
  b.push_back(make("chest", 3, {0, 0, l_spine}, l_spine, l_chest, ball));  // 4
  b.push_back(make("neck_01", 4, {0, 0, l_chest}, l_chest, l_neck, ball));
  b.push_back(make("neck_02", 5, {0, 0, l_neck}, l_neck, l_neck, ball));
  b.push_back(make("head", 6, {0, 0, l_neck}, l_neck, l_head, ball));      // 7

  const double sides[2] = {-1.0, +1.0};  // left, right
  const char* sn[2] = {"_l", "_r"};
  for (int side = 0; side < 2; ++side) {
    const double sx = sides[side];
    const std::string sfx = sn[side];
    const int chest = 4;
    const int clav = static_cast<int>(b.size());
    b.push_back(make("clavicle" + sfx, chest, {sx * 0.03, 0, 0.09}, l_chest,
                     l_clav, ball));
    b.push_back(make("upperarm" + sfx, clav, {sx * l_clav, 0, 0}, l_clav,
                     l_uarm, ball));
    b.push_back(make("forearm" + sfx, clav + 1, {sx * l_uarm, 0, 0}, l_uarm,
                     l_farm, elbow));
    b.push_back(make("hand" + sfx, clav + 2, {sx * l_farm, 0, 0}, l_farm,
                     l_hand, ball));
    b.push_back(make("fingers" + sfx, clav + 3, {sx * l_hand, 0, 0}, l_hand,
                     l_fing, ball));
  }
  for (int side = 0; side < 2; ++side) {
    const double sx = sides[side];
    const std::string sfx = sn[side];
    const int thigh = static_cast<int>(b.size());
    b.push_back(make("thigh" + sfx, 0, {sx * 0.10, 0, -0.05}, l_pelvis,
                     l_thigh, ball));
    b.push_back(make("shin" + sfx, thigh, {0, 0, -l_thigh}, l_thigh, l_shin,
                     hinge_x));
    b.push_back(make("foot" + sfx, thigh + 1, {0, 0, -l_shin}, l_shin, l_foot,
                     ankle));
    b.push_back(make("toe" + sfx, thigh + 2, {0, 0.13, -0.05}, l_foot, l_toe,
                     hinge_x));
  }
  s.finalize();
  return s;
}

}  // namespace physmocap::body
