#include "physmocap/body/inertia.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace physmocap::body {

namespace {

struct Accum {
  double vol = 0;
  Vec3 m1 = Vec3::Zero();
  Mat3 m2 = Mat3::Zero();

  void add_tet(const Vec3& a, const Vec3& b, const Vec3& c) {
    const double v = a.dot(b.cross(c)) / 6.0;
    vol += v;
    m1 += v * (a + b + c) / 4.0;
    const Vec3 s = a + b + c;
    m2 += (v / 20.0) *
          (a * a.transpose() + b * b.transpose() + c * c.transpose() +
           s * s.transpose());
  }
};

}  // namespace

double mesh_volume(const VecX& vertices, const std::vector<Triangle>& faces) {
  Accum acc;
  for (const Triangle& f : faces)
    acc.add_tet(vertices.segment<3>(3 * f.a), vertices.segment<3>(3 * f.b),
                vertices.segment<3>(3 * f.c));
  return std::abs(acc.vol);
}

MassProperties mass_properties(const std::vector<Vec3>& vertices,
                               const std::vector<Triangle>& faces) {
  Accum acc;
  for (const Triangle& f : faces)
    acc.add_tet(vertices[f.a], vertices[f.b], vertices[f.c]);
  MassProperties mp;
  mp.volume = acc.vol;
  if (std::abs(acc.vol) < 1e-300) return mp;
  mp.com = acc.m1 / acc.vol;
  const Mat3 about_origin =
      acc.m2.trace() * Mat3::Identity() - acc.m2;  // unit density
  mp.inertia_com = about_origin -
                   acc.vol * (mp.com.squaredNorm() * Mat3::Identity() -
                              mp.com * mp.com.transpose());
  return mp;
}

namespace {

using Edge = std::pair<std::uint32_t, std::uint32_t>;

double plane_dist(const std::vector<Vec3>& pts, const Triangle& f,
                  const Vec3& p) {
  const Vec3 n = (pts[f.b] - pts[f.a]).cross(pts[f.c] - pts[f.a]);
  return n.dot(p - pts[f.a]);
}

}  // namespace

std::vector<Triangle> convex_hull(const std::vector<Vec3>& points) {
  const std::size_t n = points.size();
  if (n < 4) return {};

  double scale = 0;
  for (const Vec3& p : points) scale = std::max(scale, p.cwiseAbs().maxCoeff());
  const double eps = 1e-10 * std::max(scale, 1.0);

  // Initial simplex: two extremes, then the point farthest from the line,
  // then from the plane.
  std::uint32_t i0 = 0, i1 = 0;
  for (std::uint32_t i = 1; i < n; ++i) {
    if (points[i].x() < points[i0].x()) i0 = i;
    if (points[i].x() > points[i1].x()) i1 = i;
  }
  if ((points[i1] - points[i0]).norm() < eps) return {};
  std::uint32_t i2 = 0;
  double best = -1;
  const Vec3 d01 = (points[i1] - points[i0]).normalized();
  for (std::uint32_t i = 0; i < n; ++i) {
    const Vec3 r = points[i] - points[i0];
    const double dist = (r - r.dot(d01) * d01).norm();
    if (dist > best) {
      best = dist;
      i2 = i;
    }
  }
  if (best < eps) return {};
  std::uint32_t i3 = 0;
  best = -1;
  const Vec3 nrm =
      (points[i1] - points[i0]).cross(points[i2] - points[i0]).normalized();
  for (std::uint32_t i = 0; i < n; ++i) {
    const double dist = std::abs(nrm.dot(points[i] - points[i0]));
    if (dist > best) {
      best = dist;
      i3 = i;
    }
  }
  if (best < eps) return {};

  std::vector<Triangle> faces = {{i0, i1, i2}, {i0, i2, i3}, {i0, i3, i1},
                                 {i1, i3, i2}};
  const Vec3 inside = (points[i0] + points[i1] + points[i2] + points[i3]) / 4.0;
  for (Triangle& f : faces)
    if (plane_dist(points, f, inside) > 0) std::swap(f.b, f.c);

  for (std::uint32_t p = 0; p < n; ++p) {
    if (p == i0 || p == i1 || p == i2 || p == i3) continue;
    std::vector<char> visible(faces.size(), 0);
    bool any = false;
    for (std::size_t f = 0; f < faces.size(); ++f) {
      if (plane_dist(points, faces[f], points[p]) > eps) {
        visible[f] = 1;
        any = true;
      }
    }
    if (!any) continue;

    std::set<Edge> vis_edges;
    for (std::size_t f = 0; f < faces.size(); ++f) {
      if (!visible[f]) continue;
      const Triangle& t = faces[f];
      vis_edges.insert({t.a, t.b});
      vis_edges.insert({t.b, t.c});
      vis_edges.insert({t.c, t.a});
    }
    std::vector<Triangle> next;
    next.reserve(faces.size());
    for (std::size_t f = 0; f < faces.size(); ++f)
      if (!visible[f]) next.push_back(faces[f]);
    for (const Edge& e : vis_edges) {
      // Horizon edge: its twin belongs to a kept face.
      if (vis_edges.count({e.second, e.first})) continue;
      next.push_back({e.first, e.second, p});
    }
    faces = std::move(next);
  }
  return faces;
}

std::vector<BoneInertia> inertial_properties(const BodyModel& model,
                                             const Theta& theta,
                                             double density) {
  if (!(density > 0)) throw InvalidInput("inertial_properties: density <= 0");
  const VecX verts = skin_positions(model, theta);
  const auto world = bone_transforms(model.skeleton, theta.lengths, theta.q);
  const int nb = model.skeleton.bone_count();

  std::vector<std::vector<Vec3>> assigned(nb);
  for (int v = 0; v < model.n_vertices; ++v) {
    int best_bone = 0;
    double best_w = -1;
    for (std::uint32_t k = model.w_offsets[v]; k < model.w_offsets[v + 1];
         ++k) {
      if (model.w_vals[k] > best_w) {
        best_w = model.w_vals[k];
        best_bone = static_cast<int>(model.w_bones[k]);
      }
    }
    assigned[best_bone].push_back(verts.segment<3>(3 * v));
  }

  std::vector<BoneInertia> out(nb);
  for (int b = 0; b < nb; ++b) {
    const Iso3 world_to_bone = world[b].inverse();
    BoneInertia& bi = out[b];
    const auto& pts = assigned[b];
    std::vector<Triangle> hull =
        pts.size() >= 4 ? convex_hull(pts) : std::vector<Triangle>{};
    if (!hull.empty()) {
      const MassProperties mp = mass_properties(pts, hull);
      if (mp.volume > 1e-12) {
        bi.mass = density * mp.volume;
        bi.com = world_to_bone * mp.com;
        const Mat3 r = world[b].linear();
        bi.inertia = density * (r.transpose() * mp.inertia_com * r);
        continue;
      }
    }
    // Degenerate part: point mass keeps the generalized mass matrix positive
    // definite.
    bi.fallback = true;
    bi.mass = 0.1;
    bi.inertia = 1e-4 * Mat3::Identity();
    Vec3 centroid = Vec3::Zero();
    if (!pts.empty()) {
      for (const Vec3& p : pts) centroid += p;
      centroid /= static_cast<double>(pts.size());
      bi.com = world_to_bone * centroid;
    } else {
      bi.com = Vec3::Zero();
    }
  }
  return out;
}

}  // namespace physmocap::body
