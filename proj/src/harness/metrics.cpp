#include "physmocap/harness/metrics.hpp"

#include <cmath>

namespace physmocap::harness {

namespace {

void check_shapes(const std::vector<std::vector<Vec3>>& a,
                  const std::vector<std::vector<Vec3>>& b) {
  if (a.size() != b.size())
    throw InvalidInput("metrics: trajectory length mismatch");
  for (std::size_t k = 0; k < a.size(); ++k)
    if (a[k].size() != b[k].size())
      throw InvalidInput("metrics: joint count mismatch");
}

}  // namespace

double mjpe(const std::vector<std::vector<Vec3>>& predicted,
            const std::vector<std::vector<Vec3>>& truth) {
  check_shapes(predicted, truth);
  double sum = 0;
  std::size_t n = 0;
  for (std::size_t k = 0; k < predicted.size(); ++k)
    for (std::size_t j = 0; j < predicted[k].size(); ++j) {
      sum += (predicted[k][j] - truth[k][j]).squaredNorm();
      ++n;
    }
  return n ? std::sqrt(sum / n) : 0.0;
}

double mjie(const std::vector<std::vector<Vec3>>& predicted,
            const std::vector<std::vector<Vec3>>& truth, double radius) {
  check_shapes(predicted, truth);
  std::size_t hits = 0, n = 0;
  for (std::size_t k = 0; k < predicted.size(); ++k)
    for (std::size_t j = 0; j < predicted[k].size(); ++j) {
      hits += (predicted[k][j] - truth[k][j]).norm() < radius ? 1 : 0;
      ++n;
    }
  return n ? static_cast<double>(hits) / n : 0.0;
}

std::optional<double> foot_skate(
    const std::vector<std::array<Vec3, contact::kContactPoints>>& positions,
    const std::vector<std::array<bool, contact::kContactPoints>>& labels) {
  if (positions.size() != labels.size())
    throw InvalidInput("foot_skate: length mismatch");
  double sum = 0;
  int intervals = 0;
  for (int pt = 0; pt < contact::kContactPoints; ++pt) {
    std::size_t k = 0;
    while (k < labels.size()) {
      if (!labels[k][pt]) {
        ++k;
        continue;
      }
      const Vec3 onset = positions[k][pt];
      double peak = 0;
      while (k < labels.size() && labels[k][pt]) {
        const Vec3 d = positions[k][pt] - onset;
        peak = std::max(peak, std::hypot(d.x(), d.y()));
        ++k;
      }
      sum += peak;
      ++intervals;
    }
  }
  if (intervals == 0) return std::nullopt;
  return sum / intervals;
}

double jitter(const std::vector<std::vector<Vec3>>& joints, double h) {
  if (joints.size() < 3 || !(h > 0)) return 0.0;
  double sum = 0;
  std::size_t n = 0;
  for (std::size_t k = 1; k + 1 < joints.size(); ++k)
    for (std::size_t j = 0; j < joints[k].size(); ++j) {
      sum += (joints[k + 1][j] - 2 * joints[k][j] + joints[k - 1][j]).norm();
      ++n;
    }
  return n ? sum / (n * h * h) : 0.0;
}

}  // namespace physmocap::harness
