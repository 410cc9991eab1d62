#include "physmocap/prep/cloud.hpp"

#include <cmath>

#include "physmocap/simd/kernels.hpp"

namespace physmocap::prep {

GridHash::GridHash(const double* xs, const double* ys, const double* zs,
                   std::size_t n, double cell)
    : xs_(xs), ys_(ys), zs_(zs), n_(n), cell_(cell) {
  if (!(cell > 0)) throw InvalidInput("GridHash: cell size must be positive");
  cells_.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const int cx = static_cast<int>(std::floor(xs[i] / cell_));
    const int cy = static_cast<int>(std::floor(ys[i] / cell_));
    const int cz = static_cast<int>(std::floor(zs[i] / cell_));
    cells_[key(cx, cy, cz)].push_back(static_cast<std::uint32_t>(i));
  }
}

std::int64_t GridHash::key(int cx, int cy, int cz) const {
  // 21 bits per axis, offset to stay positive.
  const std::int64_t b = 1 << 20;
  return ((cx + b) << 42) | ((cy + b) << 21) | (cz + b);
}

std::ptrdiff_t GridHash::nearest(const Vec3& q, double radius,
                                 double* dist_sq) const {
  const int reach = static_cast<int>(std::ceil(radius / cell_));
  const int cx = static_cast<int>(std::floor(q.x() / cell_));
  const int cy = static_cast<int>(std::floor(q.y() / cell_));
  const int cz = static_cast<int>(std::floor(q.z() / cell_));
  const auto& k = simd::kernels();
  double best = radius * radius;
  std::ptrdiff_t best_id = -1;
  for (int dx = -reach; dx <= reach; ++dx)
    for (int dy = -reach; dy <= reach; ++dy)
      for (int dz = -reach; dz <= reach; ++dz) {
        const auto it = cells_.find(key(cx + dx, cy + dy, cz + dz));
        if (it == cells_.end()) continue;
        double d = 0;
        const auto pos = k.min_dist_sq(q.x(), q.y(), q.z(), xs_, ys_, zs_,
                                       it->second.data(), it->second.size(),
                                       &d);
        if (pos >= 0 && d <= best) {
          // Distance ties resolve to the lower point id for determinism.
          const std::uint32_t id = it->second[pos];
          if (d < best || best_id < 0 ||
              id < static_cast<std::uint32_t>(best_id)) {
            best = d;
            best_id = id;
          }
        }
      }
  if (best_id >= 0 && dist_sq) *dist_sq = best;
  return best_id;
}

std::vector<std::uint32_t> GridHash::within(const Vec3& q,
                                            double radius) const {
  const int reach = static_cast<int>(std::ceil(radius / cell_));
  const int cx = static_cast<int>(std::floor(q.x() / cell_));
  const int cy = static_cast<int>(std::floor(q.y() / cell_));
  const int cz = static_cast<int>(std::floor(q.z() / cell_));
  const double r2 = radius * radius;
  std::vector<std::uint32_t> out;
  for (int dx = -reach; dx <= reach; ++dx)
    for (int dy = -reach; dy <= reach; ++dy)
      for (int dz = -reach; dz <= reach; ++dz) {
        const auto it = cells_.find(key(cx + dx, cy + dy, cz + dz));
        if (it == cells_.end()) continue;
        for (std::uint32_t i : it->second) {
          const double ddx = xs_[i] - q.x(), ddy = ys_[i] - q.y(),
                       ddz = zs_[i] - q.z();
          if (ddx * ddx + ddy * ddy + ddz * ddz <= r2) out.push_back(i);
        }
      }
  return out;
}

}  // namespace physmocap::prep
