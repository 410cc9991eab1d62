#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "physmocap/common.hpp"

namespace physmocap::prep {

// Observed 3D points, SoA so the simd kernels can chew on them directly.
// Grid-organized input (depth sensors) keeps width/height and a validity
// mask; unordered clouds leave grid_width at 0.
struct PointCloudFrame {
  std::vector<double> xs, ys, zs;
  int grid_width = 0;
  int grid_height = 0;
  std::vector<std::uint8_t> valid;  // per pixel, grid mode only

  std::size_t size() const { return xs.size(); }
  bool is_grid() const { return grid_width > 0; }
  Vec3 point(std::size_t i) const { return {xs[i], ys[i], zs[i]}; }
  void push(const Vec3& p) {
    xs.push_back(p.x());
    ys.push_back(p.y());
    zs.push_back(p.z());
  }
};

// Uniform-cell spatial index for radius-bounded nearest-neighbor queries.
class GridHash {
 public:
  GridHash(const double* xs, const double* ys, const double* zs, std::size_t n,
           double cell);
  explicit GridHash(const PointCloudFrame& f, double cell)
      : GridHash(f.xs.data(), f.ys.data(), f.zs.data(), f.size(), cell) {}

  // Nearest point within `radius` of the query; -1 when none.
  std::ptrdiff_t nearest(const Vec3& q, double radius,
                         double* dist_sq = nullptr) const;

  // All point ids within `radius` (exact, distance-tested).
  std::vector<std::uint32_t> within(const Vec3& q, double radius) const;

 private:
  std::int64_t key(int cx, int cy, int cz) const;
  const double *xs_, *ys_, *zs_;
  std::size_t n_;
  double cell_;
  std::unordered_map<std::int64_t, std::vector<std::uint32_t>> cells_;
};

}  // namespace physmocap::prep
