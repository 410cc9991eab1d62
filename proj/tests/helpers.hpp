#pragma once

#include <memory>
#include <random>
#include <vector>

#include "physmocap/body/inertia.hpp"
#include "physmocap/body/model.hpp"
#include "physmocap/body/skeleton.hpp"

namespace testutil {

using namespace physmocap;

inline body::Skeleton single_bone_z_hinge() {
  body::Skeleton s;
  body::Bone root;
  root.name = "root";
  root.parent = -1;
  root.mean_length = 1.0;
  s.bones.push_back(root);
  body::Bone b;
  b.name = "b1";
  b.parent = 0;
  b.offset_per_length = Vec3::Zero();
  b.mean_length = 1.0;
  b.dof = {false, false, true};
  s.bones.push_back(b);
  s.finalize();
  return s;
}

// root -> b1 (z hinge at root origin) -> b2 (z hinge at distance l_b1 along x)
inline body::Skeleton planar_two_bone() {
  body::Skeleton s = single_bone_z_hinge();
  body::Bone b2;
  b2.name = "b2";
  b2.parent = 1;
  b2.offset_per_length = Vec3(1, 0, 0);  // offset = x * l_b1
  b2.mean_length = 1.0;
  b2.dof = {false, false, true};
  s.bones.push_back(b2);
  s.finalize();
  return s;
}

// Two hinge-x links hanging along -z; offsets scale with parent length.
inline body::Skeleton pendulum_two_link(double l1) {
  body::Skeleton s;
  body::Bone root;
  root.name = "root";
  root.parent = -1;
  root.mean_length = 1.0;
  s.bones.push_back(root);
  body::Bone b1;
  b1.name = "link1";
  b1.parent = 0;
  b1.offset_per_length = Vec3::Zero();
  b1.mean_length = l1;
  b1.dof = {true, false, false};
  s.bones.push_back(b1);
  body::Bone b2;
  b2.name = "link2";
  b2.parent = 1;
  b2.offset_per_length = Vec3(0, 0, -1);  // offset = -z * l1
  b2.mean_length = 1.0;
  b2.dof = {true, false, false};
  s.bones.push_back(b2);
  s.finalize();
  return s;
}

// Small hand-built skinned model on the planar chain: vertices bound to one
// or two bones, exercising every skinning path.
inline body::BodyModel mini_model(unsigned seed = 11) {
  body::BodyModel m;
  m.skeleton = planar_two_bone();
  const int nb = m.skeleton.bone_count();

  std::vector<Vec3> verts = {
      {0.2, 0.1, 0.0},  {0.5, -0.1, 0.1}, {0.9, 0.0, 0.0}, {1.1, 0.15, -0.1},
      {1.5, -0.05, 0.}, {1.9, 0.1, 0.05}, {1.0, 0.0, 0.2}, {0.7, 0.1, -0.2}};
  m.n_vertices = static_cast<int>(verts.size());

  // Bindings: mostly rigid, two blended vertices across b1/b2.
  const std::vector<std::vector<std::pair<int, double>>> w = {
      {{1, 1.0}},          {{1, 1.0}},          {{1, 0.5}, {2, 0.5}},
      {{2, 1.0}},          {{2, 1.0}},          {{2, 1.0}},
      {{1, 0.3}, {2, 0.7}}, {{1, 1.0}}};
  m.w_offsets.push_back(0);
  for (const auto& row : w) {
    for (auto [b, wv] : row) {
      m.w_bones.push_back(static_cast<std::uint32_t>(b));
      m.w_vals.push_back(wv);
    }
    m.w_offsets.push_back(static_cast<std::uint32_t>(m.w_bones.size()));
  }

  m.base_point.resize(3 * m.n_vertices);
  for (int i = 0; i < m.n_vertices; ++i)
    m.base_point.segment<3>(3 * i) = verts[i];

  std::mt19937 rng(seed);
  std::normal_distribution<double> g(0, 0.02);
  m.anthro_basis = MatX::Zero(3 * m.n_vertices, nb);
  for (int c = 0; c < nb; ++c)
    for (int r = 0; r < 3 * m.n_vertices; ++r) m.anthro_basis(r, c) = g(rng);
  MatX raw(3 * m.n_vertices, 2);
  for (int c = 0; c < 2; ++c)
    for (int r = 0; r < 3 * m.n_vertices; ++r) raw(r, c) = g(rng);
  const Eigen::HouseholderQR<MatX> qr(raw);
  m.shape_basis =
      MatX(qr.householderQ() * MatX::Identity(3 * m.n_vertices, 2));

  m.mean_lengths = m.skeleton.mean_lengths();
  m.template_pose = VecX::Zero(m.skeleton.dof_count());
  m.faces = std::make_shared<const std::vector<Triangle>>();
  m.validate();
  return m;
}

inline std::vector<body::BoneInertia> random_inertias(int count,
                                                      unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(0.2, 3.0);
  std::normal_distribution<double> g(0, 0.05);
  std::vector<body::BoneInertia> out(count);
  for (auto& bi : out) {
    bi.mass = u(rng);
    bi.com = Vec3(g(rng), g(rng), g(rng));
    Mat3 a;
    for (int i = 0; i < 9; ++i) a(i / 3, i % 3) = g(rng);
    bi.inertia = a * a.transpose() + 0.01 * Mat3::Identity();
  }
  return out;
}

inline VecX random_vec(int n, unsigned seed, double scale = 1.0) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> g(0, scale);
  VecX v(n);
  for (int i = 0; i < n; ++i) v[i] = g(rng);
  return v;
}

// Matrix-free conjugate gradient on 0.5 x^T H x - b^T x, used as the
// independent minimizer for quadratic contact objectives.
template <typename MatVec>
VecX cg_minimize(const MatVec& hv, const VecX& b, int iters) {
  VecX x = VecX::Zero(b.size());
  VecX r = b;
  VecX p = r;
  double rs = r.squaredNorm();
  for (int it = 0; it < iters && rs > 1e-26; ++it) {
    const VecX hp = hv(p);
    const double php = p.dot(hp);
    if (php <= 1e-300) break;  // flat or singular direction
    const double alpha = rs / php;
    x += alpha * p;
    r -= alpha * hp;
    const double rs2 = r.squaredNorm();
    p = r + (rs2 / rs) * p;
    rs = rs2;
  }
  return x;
}

}  // namespace testutil
