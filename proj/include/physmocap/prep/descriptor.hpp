#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "physmocap/body/model.hpp"
#include "physmocap/prep/graph.hpp"

namespace physmocap::prep {

constexpr int kExtrema = 5;
constexpr int kPhiPosDim = 20;  // C(5,3) triplet angles + C(5,2) orientation angles
// Orientation target: the point this fraction of the way (by geodesic arc
// length) from an extremum toward the centroid. A fixed fraction keeps the
// descriptor scale-invariant; 0.25 of a human-sized extremum distance is
// roughly the 30 cm the hand-tuned original used.
constexpr double kOrientationFraction = 0.25;

struct GeodesicDescriptor {
  std::uint32_t centroid = 0;
  std::array<std::uint32_t, kExtrema> extrema{};  // ascending by distance
  std::array<double, kExtrema> distance{};        // geodesic to centroid
  Eigen::Vector4d phi_ratio = Eigen::Vector4d::Zero();
  VecX phi_pos = VecX::Zero(kPhiPosDim);
};

// Geodesic centroid, five farthest-point extrema and the two invariant
// features. Throws on disconnected input or fewer than kExtrema vertices.
// Components larger than `exact_centroid_limit` use the double-sweep
// approximation for the centroid.
GeodesicDescriptor geodesic_descriptor(const DataMesh& mesh,
                                       int exact_centroid_limit = 4000);

// Mode-normalized Gaussian over phi_ratio; probability 1 at the mean.
struct HumanDetector {
  Eigen::Vector4d mean = Eigen::Vector4d::Zero();
  Eigen::Matrix4d covariance = Eigen::Matrix4d::Identity();
  double threshold = 0.1;

  double probability(const Eigen::Vector4d& phi_ratio) const;
};

// Maximum-likelihood fit with the covariance widened by `inflation`; the
// widening trades a little precision for the recall the 0.1 threshold needs.
HumanDetector train_detector(const std::vector<Eigen::Vector4d>& human_ratios,
                             double inflation = 2.0);

struct Detection {
  std::size_t component = 0;
  double probability = 0;
  GeodesicDescriptor descriptor;
};

std::vector<Detection> detect_humans(const std::vector<DataMesh>& components,
                                     const HumanDetector& detector);

struct PoseDatabaseEntry {
  VecX phi_pos;
  body::Theta theta;
  std::vector<std::string> labels;  // end-effector names, extrema order
};

struct PoseDatabase {
  std::vector<PoseDatabaseEntry> entries;
};

// Nearest database pose by L2 on phi_pos, rigidly aligned to the data via
// principal-axis (fitted ellipsoid) matching. The returned Theta seeds ICP.
body::Theta initialize_pose(const DataMesh& mesh, const PoseDatabase& db,
                            const body::BodyModel& model);

// Principal-axis alignment of a model point set onto data, sign flips
// disambiguated by a subsampled nearest-neighbor cost. Exposed for tests.
Iso3 ellipsoid_align(const std::vector<Vec3>& model_pts,
                     const std::vector<Vec3>& data_pts);

}  // namespace physmocap::prep
