#pragma once

#include <memory>
#include <span>
#include <vector>

#include "physmocap/body/skeleton.hpp"
#include "physmocap/common.hpp"

namespace physmocap::body {

// Full parameter vector of the generative model.
struct Theta {
  VecX q;        // pose, skeleton.dof_count()
  VecX lengths;  // anthropometrics, bone_count()
  VecX beta;     // shape coefficients
};

struct MeshInstance {
  VecX vertices;  // 3N, packed xyz
  std::shared_ptr<const std::vector<Triangle>> faces;

  int vertex_count() const { return static_cast<int>(vertices.size() / 3); }
  Vec3 vertex(int i) const { return vertices.segment<3>(3 * i); }
};

// Parametric skinned body: skeleton + sparse blend weights + the two linear
// template bases. Immutable after construction; all free functions below are
// pure.
struct BodyModel {
  Skeleton skeleton;
  int n_vertices = 0;
  std::shared_ptr<const std::vector<Triangle>> faces;

  // Blend weights, CSR rows per vertex over influencing bones.
  std::vector<std::uint32_t> w_offsets;  // n_vertices + 1
  std::vector<std::uint32_t> w_bones;
  std::vector<double> w_vals;

  MatX anthro_basis;   // 3N x bone_count
  MatX shape_basis;    // 3N x shape rank, orthonormal columns
  VecX mean_lengths;   // bone_count
  VecX base_point;     // 3N, template at mean anthropometrics / zero shape
  VecX template_pose;  // dof_count

  int shape_rank() const { return static_cast<int>(shape_basis.cols()); }
  double weight(int vertex, int bone) const;
  void validate() const;
};

VecX template_mesh(const BodyModel& m, const VecX& lengths, const VecX& beta);

// G_b = M_b(l, q) * M_b(l, template_pose)^-1 as 3x4 blocks, the per-bone
// transforms blended by linear mesh blending.
std::vector<Mat34> blend_transforms(const BodyModel& m, const VecX& lengths,
                                    const VecX& q);

VecX skin_positions(const BodyModel& m, const Theta& theta);
MeshInstance skin_mesh(const BodyModel& m, const Theta& theta);

// Analytic d(skinned position)/dq for the listed vertices; rows are packed
// xyz per vertex, columns follow the skeleton dof layout.
MatX skin_jacobian_q(const BodyModel& m, const Theta& theta,
                     std::span<const std::uint32_t> vertices);

// d(skinned position)/dbeta (exact: the blended linear part hits the shape
// basis rows).
MatX skin_jacobian_beta(const BodyModel& m, const Theta& theta,
                        std::span<const std::uint32_t> vertices);

// Central finite differences, used for the anthropometrics block where the
// analytic form buys nothing.
MatX skin_jacobian_lengths_fd(const BodyModel& m, const Theta& theta,
                              std::span<const std::uint32_t> vertices,
                              double h = 1e-6);

std::vector<Vec3> vertex_normals(const VecX& vertices,
                                 const std::vector<Triangle>& faces);

}  // namespace physmocap::body
