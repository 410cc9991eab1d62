#include "physmocap/body/model.hpp"

#include <cmath>

#include "physmocap/simd/kernels.hpp"

namespace physmocap::body {

double BodyModel::weight(int vertex, int bone) const {
  for (std::uint32_t k = w_offsets[vertex]; k < w_offsets[vertex + 1]; ++k)
    if (w_bones[k] == static_cast<std::uint32_t>(bone)) return w_vals[k];
  return 0.0;
}

void BodyModel::validate() const {
  if (static_cast<int>(w_offsets.size()) != n_vertices + 1)
    throw InvalidInput("model: weight row offsets inconsistent");
  for (int v = 0; v < n_vertices; ++v) {
    double s = 0;
    for (std::uint32_t k = w_offsets[v]; k < w_offsets[v + 1]; ++k) {
      if (w_vals[k] < -1e-12) throw InvalidInput("model: negative blend weight");
      s += w_vals[k];
    }
    if (std::abs(s - 1.0) > 1e-9)
      throw InvalidInput("model: blend weights of a vertex do not sum to 1");
  }
  if (anthro_basis.rows() != 3 * n_vertices ||
      shape_basis.rows() != 3 * n_vertices ||
      base_point.size() != 3 * n_vertices)
    throw InvalidInput("model: basis dimensions inconsistent");
  if (mean_lengths.size() != skeleton.bone_count())
    throw InvalidInput("model: mean anthropometrics size mismatch");
}

VecX template_mesh(const BodyModel& m, const VecX& lengths, const VecX& beta) {
  if (lengths.size() != m.anthro_basis.cols())
    throw InvalidInput("template_mesh: anthropometrics dimension mismatch");
  if (beta.size() != m.shape_basis.cols())
    throw InvalidInput("template_mesh: shape dimension mismatch");
  return m.base_point + m.anthro_basis * (lengths - m.mean_lengths) +
         m.shape_basis * beta;
}

std::vector<Mat34> blend_transforms(const BodyModel& m, const VecX& lengths,
                                    const VecX& q) {
  const auto posed = bone_transforms(m.skeleton, lengths, q);
  const auto rest = bone_transforms(m.skeleton, lengths, m.template_pose);
  std::vector<Mat34> g(posed.size());
  for (std::size_t b = 0; b < posed.size(); ++b)
    g[b] = (posed[b] * rest[b].inverse()).matrix().topRows<3>();
  return g;
}

namespace {

simd::SkinCsr make_csr(const BodyModel& m) {
  return {m.w_offsets.data(), m.w_bones.data(), m.w_vals.data(),
          static_cast<std::size_t>(m.n_vertices)};
}

// 12-double row-major layout the kernels expect.
std::vector<double> pack_mats(const std::vector<Mat34>& g) {
  std::vector<double> out(12 * g.size());
  for (std::size_t b = 0; b < g.size(); ++b) {
    double* d = out.data() + 12 * b;
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) d[3 * r + c] = g[b](r, c);
    for (int r = 0; r < 3; ++r) d[9 + r] = g[b](r, 3);
  }
  return out;
}

}  // namespace

VecX skin_positions(const BodyModel& m, const Theta& theta) {
  const VecX tpl = template_mesh(m, theta.lengths, theta.beta);
  const auto packed = pack_mats(blend_transforms(m, theta.lengths, theta.q));
  VecX out(3 * m.n_vertices);
  simd::kernels().skin_vertices(make_csr(m), packed.data(), tpl.data(),
                                out.data());
  return out;
}

MeshInstance skin_mesh(const BodyModel& m, const Theta& theta) {
  return {skin_positions(m, theta), m.faces};
}

MatX skin_jacobian_q(const BodyModel& m, const Theta& theta,
                     std::span<const std::uint32_t> vertices) {
  const auto fk = forward_kinematics(m.skeleton, theta.lengths, theta.q);
  const auto rest =
      bone_transforms(m.skeleton, theta.lengths, m.template_pose);
  const auto anc = ancestor_dofs(m.skeleton);
  const VecX tpl = template_mesh(m, theta.lengths, theta.beta);

  std::vector<Iso3> g(rest.size());
  for (std::size_t b = 0; b < rest.size(); ++b)
    g[b] = fk.world[b] * rest[b].inverse();

  MatX jac = MatX::Zero(3 * vertices.size(), m.skeleton.dof_count());
  for (std::size_t row = 0; row < vertices.size(); ++row) {
    const int v = static_cast<int>(vertices[row]);
    const Vec3 p = tpl.segment<3>(3 * v);
    auto block = jac.middleRows<3>(3 * row);
    for (std::uint32_t k = m.w_offsets[v]; k < m.w_offsets[v + 1]; ++k) {
      const int b = static_cast<int>(m.w_bones[k]);
      accumulate_point_jacobian(m.skeleton, fk, anc, b, g[b] * p, m.w_vals[k],
                                block);
    }
  }
  return jac;
}

MatX skin_jacobian_beta(const BodyModel& m, const Theta& theta,
                        std::span<const std::uint32_t> vertices) {
  const auto g = blend_transforms(m, theta.lengths, theta.q);
  MatX jac(3 * vertices.size(), m.shape_basis.cols());
  for (std::size_t row = 0; row < vertices.size(); ++row) {
    const int v = static_cast<int>(vertices[row]);
    Mat3 lin = Mat3::Zero();
    for (std::uint32_t k = m.w_offsets[v]; k < m.w_offsets[v + 1]; ++k)
      lin += m.w_vals[k] * g[m.w_bones[k]].leftCols<3>();
    jac.middleRows<3>(3 * row) = lin * m.shape_basis.middleRows<3>(3 * v);
  }
  return jac;
}

MatX skin_jacobian_lengths_fd(const BodyModel& m, const Theta& theta,
                              std::span<const std::uint32_t> vertices,
                              double h) {
  MatX jac(3 * vertices.size(), m.skeleton.bone_count());
  Theta t = theta;
  for (int b = 0; b < m.skeleton.bone_count(); ++b) {
    t.lengths = theta.lengths;
    t.lengths[b] += h;
    const VecX plus = skin_positions(m, t);
    t.lengths[b] = theta.lengths[b] - h;
    const VecX minus = skin_positions(m, t);
    for (std::size_t row = 0; row < vertices.size(); ++row)
      jac.block<3, 1>(3 * row, b) =
          (plus.segment<3>(3 * vertices[row]) -
           minus.segment<3>(3 * vertices[row])) /
          (2 * h);
  }
  return jac;
}

std::vector<Vec3> vertex_normals(const VecX& vertices,
                                 const std::vector<Triangle>& faces) {
  std::vector<Vec3> n(vertices.size() / 3, Vec3::Zero());
  for (const Triangle& f : faces) {
    const Vec3 a = vertices.segment<3>(3 * f.a);
    const Vec3 b = vertices.segment<3>(3 * f.b);
    const Vec3 c = vertices.segment<3>(3 * f.c);
    const Vec3 fn = (b - a).cross(c - a);  // area-weighted
    n[f.a] += fn;
    n[f.b] += fn;
    n[f.c] += fn;
  }
  for (Vec3& v : n) {
    const double len = v.norm();
    if (len > 1e-300) v /= len;
  }
  return n;
}

}  // namespace physmocap::body
