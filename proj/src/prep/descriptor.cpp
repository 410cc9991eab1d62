#include "physmocap/prep/descriptor.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace physmocap::prep {

namespace {

std::uint32_t argmax_dist(const std::vector<double>& dist) {
  std::uint32_t best = 0;
  for (std::uint32_t v = 1; v < dist.size(); ++v)
    if (dist[v] > dist[best]) best = v;  // ties keep the lowest index
  return best;
}

// Vertex minimizing the maximum geodesic distance. Exact version runs a
// Dijkstra per vertex; the approximate version takes the best vertex against
// the two endpoints of a double-sweep diameter estimate.
std::uint32_t geodesic_centroid(const DataMesh& mesh, int exact_limit) {
  const int n = mesh.vertex_count();
  if (n <= exact_limit) {
    double best_ecc = kUnreachable;
    std::uint32_t best = 0;
    for (std::uint32_t v = 0; v < static_cast<std::uint32_t>(n); ++v) {
      const auto sp = dijkstra(mesh, {v});
      double ecc = 0;
      for (double d : sp.dist) ecc = std::max(ecc, d);
      if (ecc < best_ecc) {
        best_ecc = ecc;
        best = v;
      }
    }
    return best;
  }
  const auto s0 = dijkstra(mesh, {0});
  const std::uint32_t a = argmax_dist(s0.dist);
  const auto sa = dijkstra(mesh, {a});
  const std::uint32_t b = argmax_dist(sa.dist);
  const auto sb = dijkstra(mesh, {b});
  double best_ecc = kUnreachable;
  std::uint32_t best = 0;
  for (std::uint32_t v = 0; v < static_cast<std::uint32_t>(n); ++v) {
    const double ecc = std::max(sa.dist[v], sb.dist[v]);
    if (ecc < best_ecc) {
      best_ecc = ecc;
      best = v;
    }
  }
  return best;
}

double angle_between(const Vec3& u, const Vec3& v) {
  const double nu = u.norm(), nv = v.norm();
  if (nu < 1e-12 || nv < 1e-12) return 0.0;
  return std::acos(std::clamp(u.dot(v) / (nu * nv), -1.0, 1.0));
}

// Point at geodesic arc length `target` along the shortest path from `from`
// toward the centroid, following the centroid's predecessor tree.
Vec3 walk_toward_centroid(const DataMesh& mesh, const ShortestPaths& from_centroid,
                          std::uint32_t from, double target) {
  std::uint32_t v = from;
  double walked = 0;
  while (from_centroid.pred[v] >= 0) {
    const std::uint32_t next = static_cast<std::uint32_t>(from_centroid.pred[v]);
    const double step = (mesh.vertices[next] - mesh.vertices[v]).norm();
    if (walked + step >= target && step > 1e-12) {
      const double t = (target - walked) / step;
      return mesh.vertices[v] + t * (mesh.vertices[next] - mesh.vertices[v]);
    }
    walked += step;
    v = next;
  }
  return mesh.vertices[v];  // path shorter than target: stop at the centroid
}

}  // namespace

GeodesicDescriptor geodesic_descriptor(const DataMesh& mesh,
                                       int exact_centroid_limit) {
  if (mesh.vertex_count() < kExtrema)
    throw InvalidInput("geodesic_descriptor: fewer than 5 vertices");
  GeodesicDescriptor d;
  d.centroid = geodesic_centroid(mesh, exact_centroid_limit);
  const auto from_centroid = dijkstra(mesh, {d.centroid});
  for (double dist : from_centroid.dist)
    if (dist == kUnreachable)
      throw InvalidInput("geodesic_descriptor: disconnected mesh");

  // Farthest-point extrema against {centroid} ∪ selected so far.
  std::vector<double> min_dist = from_centroid.dist;
  for (int e = 0; e < kExtrema; ++e) {
    const std::uint32_t pick = argmax_dist(min_dist);
    d.extrema[e] = pick;
    const auto sp = dijkstra(mesh, {pick});
    for (int v = 0; v < mesh.vertex_count(); ++v)
      min_dist[v] = std::min(min_dist[v], sp.dist[v]);
  }

  std::sort(d.extrema.begin(), d.extrema.end(),
            [&](std::uint32_t a, std::uint32_t b) {
              if (from_centroid.dist[a] != from_centroid.dist[b])
                return from_centroid.dist[a] < from_centroid.dist[b];
              return a < b;
            });
  for (int e = 0; e < kExtrema; ++e)
    d.distance[e] = from_centroid.dist[d.extrema[e]];

  for (int j = 0; j < 4; ++j) {
    const double lo = std::max(d.distance[j], 1e-12);
    d.phi_ratio[j] = d.distance[j + 1] / lo;
  }

  // Triplet angles at the middle extremum, lexicographic (i < j < k).
  int cursor = 0;
  for (int i = 0; i < kExtrema; ++i)
    for (int j = i + 1; j < kExtrema; ++j)
      for (int k = j + 1; k < kExtrema; ++k) {
        const Vec3& a = mesh.vertices[d.extrema[i]];
        const Vec3& b = mesh.vertices[d.extrema[j]];
        const Vec3& c = mesh.vertices[d.extrema[k]];
        d.phi_pos[cursor++] = angle_between(a - b, c - b);
      }

  // Orientation vectors: from each extremum toward a fixed fraction of its
  // geodesic path to the centroid.
  std::array<Vec3, kExtrema> orient;
  for (int e = 0; e < kExtrema; ++e) {
    const Vec3 target = walk_toward_centroid(
        mesh, from_centroid, d.extrema[e],
        kOrientationFraction * d.distance[e]);
    orient[e] = target - mesh.vertices[d.extrema[e]];
  }
  for (int i = 0; i < kExtrema; ++i)
    for (int j = i + 1; j < kExtrema; ++j)
      d.phi_pos[cursor++] = angle_between(orient[i], orient[j]);

  return d;
}

double HumanDetector::probability(const Eigen::Vector4d& phi_ratio) const {
  const Eigen::Vector4d r = phi_ratio - mean;
  const double m2 = r.dot(covariance.ldlt().solve(r));
  return std::exp(-0.5 * m2);
}

HumanDetector train_detector(const std::vector<Eigen::Vector4d>& human_ratios,
                             double inflation) {
  if (human_ratios.size() < 2)
    throw InvalidInput("train_detector: need at least two samples");
  HumanDetector det;
  for (const auto& r : human_ratios) det.mean += r;
  det.mean /= static_cast<double>(human_ratios.size());
  Eigen::Matrix4d cov = Eigen::Matrix4d::Zero();
  for (const auto& r : human_ratios) {
    const Eigen::Vector4d c = r - det.mean;
    cov += c * c.transpose();
  }
  cov /= static_cast<double>(human_ratios.size() - 1);
  cov.diagonal().array() += 1e-6;  // variance floor
  det.covariance = inflation * cov;
  return det;
}

std::vector<Detection> detect_humans(const std::vector<DataMesh>& components,
                                     const HumanDetector& detector) {
  std::vector<Detection> out;
  for (std::size_t c = 0; c < components.size(); ++c) {
    if (components[c].vertex_count() < kExtrema) continue;
    Detection det;
    det.component = c;
    det.descriptor = geodesic_descriptor(components[c]);
    det.probability = detector.probability(det.descriptor.phi_ratio);
    if (det.probability >= detector.threshold) out.push_back(std::move(det));
  }
  return out;
}

namespace {

struct PcaFrame {
  Vec3 mean;
  Mat3 axes;  // columns, descending eigenvalue
};

PcaFrame pca_frame(const std::vector<Vec3>& pts) {
  PcaFrame f;
  f.mean = Vec3::Zero();
  for (const Vec3& p : pts) f.mean += p;
  f.mean /= static_cast<double>(pts.size());
  Mat3 cov = Mat3::Zero();
  for (const Vec3& p : pts) {
    const Vec3 c = p - f.mean;
    cov += c * c.transpose();
  }
  const Eigen::SelfAdjointEigenSolver<Mat3> eig(cov);
  // Eigen sorts ascending; flip to descending.
  f.axes.col(0) = eig.eigenvectors().col(2);
  f.axes.col(1) = eig.eigenvectors().col(1);
  f.axes.col(2) = eig.eigenvectors().col(0);
  return f;
}

double chamfer_cost(const std::vector<Vec3>& model, const Iso3& transform,
                    const GridHash& data_hash, double radius) {
  double cost = 0;
  const std::size_t stride = std::max<std::size_t>(1, model.size() / 200);
  int used = 0;
  for (std::size_t i = 0; i < model.size(); i += stride) {
    const Vec3 p = transform * model[i];
    double d2 = radius * radius;
    if (data_hash.nearest(p, radius, &d2) < 0) d2 = radius * radius;
    cost += d2;
    ++used;
  }
  return used ? cost / used : 0.0;
}

}  // namespace

Iso3 ellipsoid_align(const std::vector<Vec3>& model_pts,
                     const std::vector<Vec3>& data_pts) {
  const PcaFrame mf = pca_frame(model_pts);
  const PcaFrame df = pca_frame(data_pts);

  // Proper-rotation sign combinations over matched principal axes.
  double best_cost = kUnreachable;
  Iso3 best = Iso3::Identity();
  std::vector<double> xs, ys, zs;
  for (const Vec3& p : data_pts) {
    xs.push_back(p.x());
    ys.push_back(p.y());
    zs.push_back(p.z());
  }
  const GridHash data_hash(xs.data(), ys.data(), zs.data(), xs.size(), 0.2);
  for (int flips = 0; flips < 4; ++flips) {
    Mat3 d = df.axes;
    if (flips & 1) d.col(0) = -d.col(0);
    if (flips & 2) d.col(1) = -d.col(1);
    Mat3 r = d * mf.axes.transpose();
    if (r.determinant() < 0) {
      d.col(2) = -d.col(2);
      r = d * mf.axes.transpose();
    }
    Iso3 t = Iso3::Identity();
    t.linear() = r;
    t.translation() = df.mean - r * mf.mean;
    const double cost = chamfer_cost(model_pts, t, data_hash, 0.5);
    if (cost < best_cost) {
      best_cost = cost;
      best = t;
    }
  }
  return best;
}

body::Theta initialize_pose(const DataMesh& mesh, const PoseDatabase& db,
                            const body::BodyModel& model) {
  if (db.entries.empty())
    throw InvalidInput("initialize_pose: empty pose database");
  const GeodesicDescriptor desc = geodesic_descriptor(mesh);

  std::size_t best = 0;
  double best_d = kUnreachable;
  for (std::size_t i = 0; i < db.entries.size(); ++i) {
    const double d = (db.entries[i].phi_pos - desc.phi_pos).norm();
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  body::Theta theta = db.entries[best].theta;

  const VecX verts = skin_positions(model, theta);
  std::vector<Vec3> model_pts(model.n_vertices);
  for (int v = 0; v < model.n_vertices; ++v)
    model_pts[v] = verts.segment<3>(3 * v);
  const Iso3 align = ellipsoid_align(model_pts, mesh.vertices);

  const Mat3 r_old = body::euler_xyz(theta.q[3], theta.q[4], theta.q[5]);
  theta.q.segment<3>(0) =
      align.linear() * theta.q.segment<3>(0) + align.translation();
  theta.q.segment<3>(3) = body::euler_xyz_angles(align.linear() * r_old);
  return theta;
}

}  // namespace physmocap::prep
