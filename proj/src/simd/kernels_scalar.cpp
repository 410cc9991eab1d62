#include "physmocap/simd/kernels.hpp"

#include <cstddef>

namespace physmocap::simd {
namespace {

void skin_vertices_scalar(const SkinCsr& csr, const double* bone_mats,
                          const double* tpl, double* out) {
  for (std::size_t v = 0; v < csr.n_vertices; ++v) {
    double acc[12] = {0};
    for (std::uint32_t k = csr.row_offsets[v]; k < csr.row_offsets[v + 1]; ++k) {
      const double w = csr.weights[k];
      const double* g = bone_mats + 12 * csr.bone_idx[k];
      for (int e = 0; e < 12; ++e) acc[e] += w * g[e];
    }
    const double x = tpl[3 * v], y = tpl[3 * v + 1], z = tpl[3 * v + 2];
    out[3 * v + 0] = acc[0] * x + acc[1] * y + acc[2] * z + acc[9];
    out[3 * v + 1] = acc[3] * x + acc[4] * y + acc[5] * z + acc[10];
    out[3 * v + 2] = acc[6] * x + acc[7] * y + acc[8] * z + acc[11];
  }
}

void transform_points_scalar(const double* a, const double* t, const double* xs,
                             const double* ys, const double* zs, std::size_t n,
                             double* oxs, double* oys, double* ozs) {
  for (std::size_t i = 0; i < n; ++i) {
    const double x = xs[i], y = ys[i], z = zs[i];
    oxs[i] = a[0] * x + a[1] * y + a[2] * z + t[0];
    oys[i] = a[3] * x + a[4] * y + a[5] * z + t[1];
    ozs[i] = a[6] * x + a[7] * y + a[8] * z + t[2];
  }
}

std::ptrdiff_t min_dist_sq_scalar(double qx, double qy, double qz,
                                  const double* xs, const double* ys,
                                  const double* zs, const std::uint32_t* idx,
                                  std::size_t n, double* best_sq) {
  std::ptrdiff_t best = -1;
  double bd = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const std::uint32_t i = idx[k];
    const double dx = xs[i] - qx, dy = ys[i] - qy, dz = zs[i] - qz;
    const double d = dx * dx + dy * dy + dz * dz;
    if (best < 0 || d < bd) {
      bd = d;
      best = static_cast<std::ptrdiff_t>(k);
    }
  }
  if (best_sq) *best_sq = bd;
  return best;
}

double sum_sq_pair_dist_scalar(const double* p, const std::uint32_t* ai,
                               const double* xs, const double* ys,
                               const double* zs, const std::uint32_t* bi,
                               std::size_t n) {
  double s = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const double* pp = p + 3 * ai[k];
    const std::uint32_t j = bi[k];
    const double dx = pp[0] - xs[j], dy = pp[1] - ys[j], dz = pp[2] - zs[j];
    s += dx * dx + dy * dy + dz * dz;
  }
  return s;
}

}  // namespace

const Kernels& scalar_kernels() {
  static const Kernels k{skin_vertices_scalar, transform_points_scalar,
                         min_dist_sq_scalar, sum_sq_pair_dist_scalar};
  return k;
}

}  // namespace physmocap::simd
