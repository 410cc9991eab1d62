// AVX2/FMA variants of the kernels in kernels_scalar.cpp. This translation
// unit is compiled with -mavx2 -mfma and must only be reached through the
// runtime dispatcher.

#include "physmocap/simd/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#include <immintrin.h>

namespace physmocap::simd {
namespace {

void skin_vertices_avx2(const SkinCsr& csr, const double* bone_mats,
                        const double* tpl, double* out) {
  for (std::size_t v = 0; v < csr.n_vertices; ++v) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    __m256d acc2 = _mm256_setzero_pd();
    for (std::uint32_t k = csr.row_offsets[v]; k < csr.row_offsets[v + 1]; ++k) {
      const __m256d w = _mm256_set1_pd(csr.weights[k]);
      const double* g = bone_mats + 12 * csr.bone_idx[k];
      acc0 = _mm256_fmadd_pd(w, _mm256_loadu_pd(g), acc0);
      acc1 = _mm256_fmadd_pd(w, _mm256_loadu_pd(g + 4), acc1);
      acc2 = _mm256_fmadd_pd(w, _mm256_loadu_pd(g + 8), acc2);
    }
    alignas(32) double acc[12];
    _mm256_store_pd(acc, acc0);
    _mm256_store_pd(acc + 4, acc1);
    _mm256_store_pd(acc + 8, acc2);
    const double x = tpl[3 * v], y = tpl[3 * v + 1], z = tpl[3 * v + 2];
    out[3 * v + 0] = acc[0] * x + acc[1] * y + acc[2] * z + acc[9];
    out[3 * v + 1] = acc[3] * x + acc[4] * y + acc[5] * z + acc[10];
    out[3 * v + 2] = acc[6] * x + acc[7] * y + acc[8] * z + acc[11];
  }
}

void transform_points_avx2(const double* a, const double* t, const double* xs,
                           const double* ys, const double* zs, std::size_t n,
                           double* oxs, double* oys, double* ozs) {
  const __m256d a00 = _mm256_set1_pd(a[0]), a01 = _mm256_set1_pd(a[1]),
                a02 = _mm256_set1_pd(a[2]), a10 = _mm256_set1_pd(a[3]),
                a11 = _mm256_set1_pd(a[4]), a12 = _mm256_set1_pd(a[5]),
                a20 = _mm256_set1_pd(a[6]), a21 = _mm256_set1_pd(a[7]),
                a22 = _mm256_set1_pd(a[8]);
  const __m256d t0 = _mm256_set1_pd(t[0]), t1 = _mm256_set1_pd(t[1]),
                t2 = _mm256_set1_pd(t[2]);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x = _mm256_loadu_pd(xs + i);
    const __m256d y = _mm256_loadu_pd(ys + i);
    const __m256d z = _mm256_loadu_pd(zs + i);
    __m256d ox = _mm256_fmadd_pd(a00, x, _mm256_fmadd_pd(a01, y, _mm256_fmadd_pd(a02, z, t0)));
    __m256d oy = _mm256_fmadd_pd(a10, x, _mm256_fmadd_pd(a11, y, _mm256_fmadd_pd(a12, z, t1)));
    __m256d oz = _mm256_fmadd_pd(a20, x, _mm256_fmadd_pd(a21, y, _mm256_fmadd_pd(a22, z, t2)));
    _mm256_storeu_pd(oxs + i, ox);
    _mm256_storeu_pd(oys + i, oy);
    _mm256_storeu_pd(ozs + i, oz);
  }
  for (; i < n; ++i) {
    const double x = xs[i], y = ys[i], z = zs[i];
    oxs[i] = a[0] * x + a[1] * y + a[2] * z + t[0];
    oys[i] = a[3] * x + a[4] * y + a[5] * z + t[1];
    ozs[i] = a[6] * x + a[7] * y + a[8] * z + t[2];
  }
}

std::ptrdiff_t min_dist_sq_avx2(double qx, double qy, double qz,
                                const double* xs, const double* ys,
                                const double* zs, const std::uint32_t* idx,
                                std::size_t n, double* best_sq) {
  if (n == 0) {
    if (best_sq) *best_sq = 0;
    return -1;
  }
  const __m256d vqx = _mm256_set1_pd(qx), vqy = _mm256_set1_pd(qy),
                vqz = _mm256_set1_pd(qz);
  __m256d bestd = _mm256_set1_pd(__builtin_huge_val());
  alignas(16) std::uint64_t bestk[4] = {0, 0, 0, 0};
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m128i vi = _mm_loadu_si128(reinterpret_cast<const __m128i*>(idx + k));
    const __m256d px = _mm256_i32gather_pd(xs, vi, 8);
    const __m256d py = _mm256_i32gather_pd(ys, vi, 8);
    const __m256d pz = _mm256_i32gather_pd(zs, vi, 8);
    const __m256d dx = _mm256_sub_pd(px, vqx);
    const __m256d dy = _mm256_sub_pd(py, vqy);
    const __m256d dz = _mm256_sub_pd(pz, vqz);
    const __m256d d =
        _mm256_fmadd_pd(dx, dx, _mm256_fmadd_pd(dy, dy, _mm256_mul_pd(dz, dz)));
    const __m256d lt = _mm256_cmp_pd(d, bestd, _CMP_LT_OQ);
    const int mask = _mm256_movemask_pd(lt);
    if (mask) {
      bestd = _mm256_blendv_pd(bestd, d, lt);
      for (int l = 0; l < 4; ++l)
        if (mask & (1 << l)) bestk[l] = k + static_cast<std::uint64_t>(l);
    }
  }
  alignas(32) double bd[4];
  _mm256_store_pd(bd, bestd);
  double best = __builtin_huge_val();
  std::ptrdiff_t bi = -1;
  for (int l = 0; l < 4; ++l) {
    if (bd[l] < best || (bd[l] == best && bi >= 0 &&
                         bestk[l] < static_cast<std::uint64_t>(bi))) {
      best = bd[l];
      bi = static_cast<std::ptrdiff_t>(bestk[l]);
    }
  }
  for (; k < n; ++k) {
    const std::uint32_t i = idx[k];
    const double dx = xs[i] - qx, dy = ys[i] - qy, dz = zs[i] - qz;
    const double d = dx * dx + dy * dy + dz * dz;
    if (bi < 0 || d < best) {
      best = d;
      bi = static_cast<std::ptrdiff_t>(k);
    }
  }
  if (best_sq) *best_sq = best;
  return bi;
}

double sum_sq_pair_dist_avx2(const double* p, const std::uint32_t* ai,
                             const double* xs, const double* ys,
                             const double* zs, const std::uint32_t* bi,
                             std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t k = 0;
  const __m128i three = _mm_set1_epi32(3);
  const __m128i one = _mm_set1_epi32(1);
  for (; k + 4 <= n; k += 4) {
    const __m128i va = _mm_mullo_epi32(
        _mm_loadu_si128(reinterpret_cast<const __m128i*>(ai + k)), three);
    const __m128i vb = _mm_loadu_si128(reinterpret_cast<const __m128i*>(bi + k));
    const __m256d px = _mm256_i32gather_pd(p, va, 8);
    const __m256d py = _mm256_i32gather_pd(p, _mm_add_epi32(va, one), 8);
    const __m256d pz =
        _mm256_i32gather_pd(p, _mm_add_epi32(va, _mm_add_epi32(one, one)), 8);
    const __m256d dx = _mm256_sub_pd(px, _mm256_i32gather_pd(xs, vb, 8));
    const __m256d dy = _mm256_sub_pd(py, _mm256_i32gather_pd(ys, vb, 8));
    const __m256d dz = _mm256_sub_pd(pz, _mm256_i32gather_pd(zs, vb, 8));
    acc = _mm256_fmadd_pd(dx, dx, acc);
    acc = _mm256_fmadd_pd(dy, dy, acc);
    acc = _mm256_fmadd_pd(dz, dz, acc);
  }
  alignas(32) double a4[4];
  _mm256_store_pd(a4, acc);
  double s = a4[0] + a4[1] + a4[2] + a4[3];
  for (; k < n; ++k) {
    const double* pp = p + 3 * ai[k];
    const std::uint32_t j = bi[k];
    const double dx = pp[0] - xs[j], dy = pp[1] - ys[j], dz = pp[2] - zs[j];
    s += dx * dx + dy * dy + dz * dz;
  }
  return s;
}

}  // namespace

const Kernels* avx2_kernels() {
  static const Kernels k{skin_vertices_avx2, transform_points_avx2,
                         min_dist_sq_avx2, sum_sq_pair_dist_avx2};
  return &k;
}

}  // namespace physmocap::simd

#else

namespace physmocap::simd {
const Kernels* avx2_kernels() { return nullptr; }
}  // namespace physmocap::simd

#endif
