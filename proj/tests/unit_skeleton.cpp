#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "physmocap/body/skeleton.hpp"

using namespace physmocap;
using testutil::planar_two_bone;
using testutil::single_bone_z_hinge;

TEST_CASE("default skeleton has 26 parts and 69 dofs") {
  const auto s = body::default_skeleton();
  CHECK(s.bone_count() == 26);
  CHECK(s.dof_count() == 69);
  // Topological order and a single root.
  for (int b = 1; b < s.bone_count(); ++b) {
    CHECK(s.bones[b].parent >= 0);
    CHECK(s.bones[b].parent < b);
  }
}

TEST_CASE("one-bone revolute joint rotates the bone tip") {
  const auto s = single_bone_z_hinge();
  VecX q = VecX::Zero(s.dof_count());
  q[6] = M_PI / 2;  // the single z hinge
  const auto world = body::bone_transforms(s, s.mean_lengths(), q);
  const Vec3 tip = world[1] * Vec3(1, 0, 0);
  CHECK(tip.x() == doctest::Approx(0).epsilon(1e-12));
  CHECK(tip.y() == doctest::Approx(1).epsilon(1e-12));
  CHECK(tip.z() == doctest::Approx(0).epsilon(1e-12));
}

TEST_CASE("two-bone planar chain matches explicit matrix composition") {
  const auto s = planar_two_bone();
  VecX q = VecX::Zero(s.dof_count());
  const double a1 = M_PI / 6, a2 = M_PI / 3;
  q[6] = a1;
  q[7] = a2;
  const auto world = body::bone_transforms(s, s.mean_lengths(), q);
  const Vec3 tip = world[2] * Vec3(1, 0, 0);

  // Independent 4x4 composition, entries written out by hand.
  Mat4 r1 = Mat4::Identity(), r2 = Mat4::Identity(), tr = Mat4::Identity();
  r1(0, 0) = std::cos(a1);
  r1(0, 1) = -std::sin(a1);
  r1(1, 0) = std::sin(a1);
  r1(1, 1) = std::cos(a1);
  r2(0, 0) = std::cos(a2);
  r2(0, 1) = -std::sin(a2);
  r2(1, 0) = std::sin(a2);
  r2(1, 1) = std::cos(a2);
  tr(0, 3) = 1.0;
  const Mat4 chain = r1 * tr * r2;
  const Vec4 expect = chain * Vec4(1, 0, 0, 1);
  for (int i = 0; i < 3; ++i)
    CHECK(tip[i] == doctest::Approx(expect[i]).epsilon(1e-12));
}

TEST_CASE("forward kinematics rejects bad input") {
  const auto s = planar_two_bone();
  VecX q = VecX::Zero(s.dof_count());
  q[3] = std::nan("");
  CHECK_THROWS_AS(body::bone_transforms(s, s.mean_lengths(), q), InvalidInput);
  VecX l = s.mean_lengths();
  l[1] = 0.0;
  CHECK_THROWS_AS(
      body::bone_transforms(s, l, VecX::Zero(s.dof_count())), InvalidInput);
}

TEST_CASE("point jacobian matches central finite differences") {
  const auto s = body::default_skeleton();
  const VecX l = s.mean_lengths();
  const VecX q0 = testutil::random_vec(s.dof_count(), 42, 0.3);
  const int bone = s.bone_index("hand_r");
  REQUIRE(bone >= 0);
  const Vec3 local(0.02, -0.01, 0.03);

  const auto fk = body::forward_kinematics(s, l, q0);
  const auto anc = body::ancestor_dofs(s);
  MatX jac = MatX::Zero(3, s.dof_count());
  body::accumulate_point_jacobian(s, fk, anc, bone, fk.world[bone] * local,
                                  1.0, jac);

  const double h = 1e-6;
  for (int j = 0; j < s.dof_count(); ++j) {
    VecX qp = q0, qm = q0;
    qp[j] += h;
    qm[j] -= h;
    const Vec3 pp = body::bone_transforms(s, l, qp)[bone] * local;
    const Vec3 pm = body::bone_transforms(s, l, qm)[bone] * local;
    const Vec3 fd = (pp - pm) / (2 * h);
    for (int r = 0; r < 3; ++r)
      CHECK(jac(r, j) == doctest::Approx(fd[r]).epsilon(1e-4));
  }
}

TEST_CASE("euler xyz angle extraction round-trips") {
  for (unsigned seed = 0; seed < 20; ++seed) {
    const VecX a = testutil::random_vec(3, 300 + seed, 0.9);
    const Mat3 r = body::euler_xyz(a[0], a[1], a[2]);
    const Vec3 back = body::euler_xyz_angles(r);
    const Mat3 r2 = body::euler_xyz(back[0], back[1], back[2]);
    CHECK((r - r2).norm() == doctest::Approx(0).epsilon(1e-9));
  }
}
