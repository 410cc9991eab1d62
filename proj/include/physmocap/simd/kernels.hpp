#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

// Data-parallel inner loops used by skinning, correspondence search and the
// synthetic renderer. Every kernel has a scalar reference implementation and
// an AVX2 variant; the active set is picked once at startup (see dispatch.cpp)
// and can be forced with PHYSMOCAP_SIMD=scalar|avx2.

namespace physmocap::simd {

enum class Isa { kScalar, kAvx2 };

// Per-vertex skinning weights in CSR form. `row_offsets` has n_vertices+1
// entries; `bone_idx[k]`/`weights[k]` give the influences of vertex v for
// k in [row_offsets[v], row_offsets[v+1]).
struct SkinCsr {
  const std::uint32_t* row_offsets = nullptr;
  const std::uint32_t* bone_idx = nullptr;
  const double* weights = nullptr;
  std::size_t n_vertices = 0;
};

struct Kernels {
  // out[3v..3v+2] = (sum_b w_vb * G_b) * [tpl[3v..3v+2]; 1].
  // Each G_b is 12 doubles: row-major 3x3 linear part then translation.
  void (*skin_vertices)(const SkinCsr& csr, const double* bone_mats,
                        const double* tpl, double* out);

  // y = A x + t applied to an SoA point set, in place allowed (out == in).
  void (*transform_points)(const double* a_rowmajor3x3, const double* t,
                           const double* xs, const double* ys, const double* zs,
                           std::size_t n, double* oxs, double* oys, double* ozs);

  // Smallest squared distance from (qx,qy,qz) to the listed points.
  // Returns the winning position within `idx` (not the point id), or -1 if
  // n == 0; ties resolve to the earliest list position. *best_sq gets the
  // squared distance.
  std::ptrdiff_t (*min_dist_sq)(double qx, double qy, double qz,
                                const double* xs, const double* ys,
                                const double* zs, const std::uint32_t* idx,
                                std::size_t n, double* best_sq);

  // sum over k of |p[3*ai[k]..] - (xs,ys,zs)[bi[k]]|^2.
  double (*sum_sq_pair_dist)(const double* p_aos, const std::uint32_t* ai,
                             const double* xs, const double* ys,
                             const double* zs, const std::uint32_t* bi,
                             std::size_t n);
};

const Kernels& scalar_kernels();
bool avx2_supported();
const Kernels* avx2_kernels();  // nullptr when not compiled in

// Active kernel set after env override and CPU probing.
const Kernels& kernels();
Isa active_isa();
std::string isa_name(Isa isa);

}  // namespace physmocap::simd
