#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "physmocap/body/model.hpp"

using namespace physmocap;
using testutil::mini_model;
using testutil::random_vec;

TEST_CASE("template mesh reproduces base point and basis columns") {
  const auto m = mini_model();
  const VecX beta0 = VecX::Zero(m.shape_rank());
  CHECK((template_mesh(m, m.mean_lengths, beta0) - m.base_point).norm() ==
        doctest::Approx(0));

  VecX e1 = VecX::Zero(m.shape_rank());
  e1[0] = 1.0;
  const VecX t = template_mesh(m, m.mean_lengths, e1);
  CHECK((t - m.base_point - m.shape_basis.col(0)).norm() ==
        doctest::Approx(0).epsilon(1e-14));

  // Against an index-by-index matrix-vector oracle.
  const VecX dl = random_vec(m.skeleton.bone_count(), 5, 0.05);
  const VecX beta = random_vec(m.shape_rank(), 6, 0.5);
  const VecX got = template_mesh(m, VecX(m.mean_lengths + dl), beta);
  for (int r = 0; r < 3 * m.n_vertices; ++r) {
    double want = m.base_point[r];
    for (int c = 0; c < m.anthro_basis.cols(); ++c)
      want += m.anthro_basis(r, c) * dl[c];
    for (int c = 0; c < m.shape_basis.cols(); ++c)
      want += m.shape_basis(r, c) * beta[c];
    CHECK(got[r] == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("skinning is the identity at the template pose") {
  const auto m = mini_model();
  for (unsigned seed = 0; seed < 5; ++seed) {
    body::Theta th;
    th.q = m.template_pose;
    th.lengths = m.mean_lengths + random_vec(m.skeleton.bone_count(),
                                             700 + seed, 0.05)
                                      .cwiseAbs();
    th.beta = random_vec(m.shape_rank(), 800 + seed, 0.5);
    const VecX skinned = skin_positions(m, th);
    const VecX tpl = template_mesh(m, th.lengths, th.beta);
    CHECK((skinned - tpl).lpNorm<Eigen::Infinity>() < 1e-10);
  }
}

TEST_CASE("rigidly bound vertex follows its bone") {
  const auto m = mini_model();
  body::Theta th{random_vec(m.skeleton.dof_count(), 21, 0.4), m.mean_lengths,
                 VecX::Zero(m.shape_rank())};
  const VecX skinned = skin_positions(m, th);
  const auto posed = bone_transforms(m.skeleton, th.lengths, th.q);
  const auto rest = bone_transforms(m.skeleton, th.lengths, m.template_pose);

  // Vertex 1 is bound rigidly to bone 1.
  const Vec3 expect1 =
      posed[1] * (rest[1].inverse() * Vec3(m.base_point.segment<3>(3)));
  CHECK((skinned.segment<3>(3) - expect1).norm() ==
        doctest::Approx(0).epsilon(1e-12));

  // Vertex 2 blends bones 1 and 2 equally: arithmetic mean of the two
  // rigidly transformed positions.
  const Vec3 p = m.base_point.segment<3>(6);
  const Vec3 a = posed[1] * (rest[1].inverse() * p);
  const Vec3 b = posed[2] * (rest[2].inverse() * p);
  CHECK((skinned.segment<3>(6) - 0.5 * (a + b)).norm() ==
        doctest::Approx(0).epsilon(1e-12));
}

TEST_CASE("skinning is equivariant under rigid root motion") {
  const auto m = mini_model();
  body::Theta th{random_vec(m.skeleton.dof_count(), 31, 0.3),
                 m.mean_lengths + VecX::Constant(3, 0.07),
                 random_vec(m.shape_rank(), 32, 0.4)};
  const VecX base = skin_positions(m, th);

  const Vec3 t0(0.3, -0.2, 0.5);
  const Mat3 r0 = body::euler_xyz(0.4, -0.3, 0.9);

  body::Theta moved = th;
  const Mat3 r_old = body::euler_xyz(th.q[3], th.q[4], th.q[5]);
  moved.q.segment<3>(0) = t0 + r0 * th.q.segment<3>(0);
  moved.q.segment<3>(3) = body::euler_xyz_angles(r0 * r_old);
  const VecX got = skin_positions(m, moved);

  for (int i = 0; i < m.n_vertices; ++i) {
    const Vec3 want = r0 * Vec3(base.segment<3>(3 * i)) + t0;
    CHECK((Vec3(got.segment<3>(3 * i)) - want).norm() < 1e-10);
  }
}

TEST_CASE("skinning jacobians match finite differences") {
  const auto m = mini_model();
  std::vector<std::uint32_t> verts;
  for (int v = 0; v < m.n_vertices; ++v)
    verts.push_back(static_cast<std::uint32_t>(v));

  for (unsigned trial = 0; trial < 10; ++trial) {
    body::Theta th{random_vec(m.skeleton.dof_count(), 900 + trial, 0.5),
                   m.mean_lengths, random_vec(m.shape_rank(), 950 + trial, 0.4)};
    const MatX jq = skin_jacobian_q(m, th, verts);
    const double h = 1e-6;
    for (int j = 0; j < m.skeleton.dof_count(); ++j) {
      body::Theta tp = th, tm = th;
      tp.q[j] += h;
      tm.q[j] -= h;
      const VecX fd = (skin_positions(m, tp) - skin_positions(m, tm)) / (2 * h);
      const double scale = std::max(1.0, fd.norm());
      CHECK((jq.col(j) - fd).norm() / scale < 1e-4);
    }

    const MatX jb = skin_jacobian_beta(m, th, verts);
    for (int j = 0; j < m.shape_rank(); ++j) {
      body::Theta tp = th, tm = th;
      tp.beta[j] += h;
      tm.beta[j] -= h;
      const VecX fd = (skin_positions(m, tp) - skin_positions(m, tm)) / (2 * h);
      CHECK((jb.col(j) - fd).norm() < 1e-6);
    }
  }
}

TEST_CASE("vertex normals of a triangle point along the face normal") {
  VecX verts(9);
  verts << 0, 0, 0, 1, 0, 0, 0, 1, 0;
  const std::vector<Triangle> faces = {{0, 1, 2}};
  const auto n = body::vertex_normals(verts, faces);
  for (const auto& v : n) CHECK((v - Vec3(0, 0, 1)).norm() < 1e-12);
}
