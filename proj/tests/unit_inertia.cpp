#include <cmath>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "physmocap/body/inertia.hpp"

using namespace physmocap;

namespace {

// Axis-aligned cube [-s/2, s/2]^3 centered at c, 12 outward triangles.
void cube_mesh(double s, const Vec3& c, std::vector<Vec3>* verts,
               std::vector<Triangle>* faces) {
  const double h = s / 2;
  verts->clear();
  for (int i = 0; i < 8; ++i)
    verts->push_back(c + Vec3(i & 1 ? h : -h, i & 2 ? h : -h, i & 4 ? h : -h));
  *faces = {{0, 2, 1}, {1, 2, 3}, {4, 5, 6}, {5, 7, 6}, {0, 1, 4}, {1, 5, 4},
            {2, 6, 3}, {3, 6, 7}, {0, 4, 2}, {2, 4, 6}, {1, 3, 5}, {3, 7, 5}};
}

VecX flatten(const std::vector<Vec3>& v) {
  VecX out(3 * v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out.segment<3>(3 * i) = v[i];
  return out;
}

void uv_sphere(double r, int rings, int sectors, std::vector<Vec3>* verts,
               std::vector<Triangle>* faces) {
  verts->clear();
  faces->clear();
  verts->push_back({0, 0, r});
  for (int i = 1; i < rings; ++i) {
    const double phi = M_PI * i / rings;
    for (int j = 0; j < sectors; ++j) {
      const double th = 2 * M_PI * j / sectors;
      verts->push_back({r * std::sin(phi) * std::cos(th),
                        r * std::sin(phi) * std::sin(th), r * std::cos(phi)});
    }
  }
  verts->push_back({0, 0, -r});
  const auto ring = [&](int i, int j) {
    return static_cast<std::uint32_t>(1 + (i - 1) * sectors + (j % sectors));
  };
  for (int j = 0; j < sectors; ++j)
    faces->push_back({0, ring(1, j), ring(1, j + 1)});
  for (int i = 1; i < rings - 1; ++i)
    for (int j = 0; j < sectors; ++j) {
      faces->push_back({ring(i, j), ring(i + 1, j), ring(i + 1, j + 1)});
      faces->push_back({ring(i, j), ring(i + 1, j + 1), ring(i, j + 1)});
    }
  const auto south = static_cast<std::uint32_t>(verts->size() - 1);
  for (int j = 0; j < sectors; ++j)
    faces->push_back({south, ring(rings - 1, j + 1), ring(rings - 1, j)});
}

}  // namespace

TEST_CASE("mesh volume: cube, sphere, degenerate plane") {
  std::vector<Vec3> verts;
  std::vector<Triangle> faces;
  cube_mesh(1.0, Vec3(0.3, -0.2, 0.9), &verts, &faces);
  CHECK(body::mesh_volume(flatten(verts), faces) == doctest::Approx(1.0));

  uv_sphere(0.5, 32, 64, &verts, &faces);
  const double analytic = 4.0 / 3.0 * M_PI * 0.125;
  CHECK(body::mesh_volume(flatten(verts), faces) ==
        doctest::Approx(analytic).epsilon(0.02));

  VecX flat(12);
  flat << 0, 0, 0, 1, 0, 0, 0, 1, 0, 1, 1, 0;
  const std::vector<Triangle> ff = {{0, 1, 2}, {1, 3, 2}};
  CHECK(body::mesh_volume(flat, ff) == doctest::Approx(0.0));
}

TEST_CASE("convex hull of noisy cube recovers cube mass properties") {
  std::vector<Vec3> corners;
  std::vector<Triangle> faces;
  cube_mesh(2.0, Vec3(1, 2, 3), &corners, &faces);
  std::vector<Vec3> pts = corners;
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-0.9, 0.9);
  for (int i = 0; i < 200; ++i)
    pts.push_back(Vec3(1, 2, 3) + Vec3(u(rng), u(rng), u(rng)));

  const auto hull = body::convex_hull(pts);
  REQUIRE(!hull.empty());
  const auto mp = body::mass_properties(pts, hull);
  CHECK(mp.volume == doctest::Approx(8.0).epsilon(1e-9));
  CHECK((mp.com - Vec3(1, 2, 3)).norm() < 1e-9);
  // Unit-density cube of side 2: I = V * s^2 / 6 on the diagonal.
  const Mat3 want = (8.0 * 4.0 / 6.0) * Mat3::Identity();
  CHECK((mp.inertia_com - want).norm() < 1e-8);
}

TEST_CASE("hull mass properties agree with a Monte-Carlo volume integral") {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<Vec3> pts;
  for (int i = 0; i < 60; ++i)
    pts.push_back({u(rng), 0.7 * u(rng) + 0.2, 1.3 * u(rng)});
  const auto hull = body::convex_hull(pts);
  REQUIRE(!hull.empty());
  const auto mp = body::mass_properties(pts, hull);

  // Rejection sampling with half-space tests against the hull planes.
  Vec3 lo = pts[0], hi = pts[0];
  for (const auto& p : pts) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  struct Plane {
    Vec3 n;
    double d;
  };
  std::vector<Plane> planes;
  for (const auto& f : hull) {
    const Vec3 n = (pts[f.b] - pts[f.a]).cross(pts[f.c] - pts[f.a]);
    planes.push_back({n, n.dot(pts[f.a])});
  }
  const int samples = 300000;
  int inside = 0;
  Vec3 sum = Vec3::Zero();
  Mat3 second = Mat3::Zero();
  std::uniform_real_distribution<double> ux(lo.x(), hi.x()), uy(lo.y(), hi.y()),
      uz(lo.z(), hi.z());
  for (int i = 0; i < samples; ++i) {
    const Vec3 p(ux(rng), uy(rng), uz(rng));
    bool in = true;
    for (const auto& pl : planes)
      if (pl.n.dot(p) > pl.d + 1e-12) {
        in = false;
        break;
      }
    if (!in) continue;
    ++inside;
    sum += p;
    second += p * p.transpose();
  }
  const double box = (hi - lo).prod();
  const double vol = box * inside / samples;
  const Vec3 com = sum / inside;
  Mat3 m2 = second * (vol / inside);
  Mat3 inertia_origin = m2.trace() * Mat3::Identity() - m2;
  Mat3 inertia_com =
      inertia_origin -
      vol * (com.squaredNorm() * Mat3::Identity() - com * com.transpose());

  CHECK(vol == doctest::Approx(mp.volume).epsilon(0.05));
  CHECK((com - mp.com).norm() < 0.05 * (hi - lo).norm());
  CHECK((inertia_com - mp.inertia_com).norm() / mp.inertia_com.norm() < 0.05);
}

TEST_CASE("inertial properties of a single-bone cube body") {
  // One-bone model whose mesh is the unit cube.
  body::BodyModel m;
  m.skeleton = testutil::single_bone_z_hinge();
  std::vector<Vec3> verts;
  std::vector<Triangle> faces;
  cube_mesh(1.0, Vec3::Zero(), &verts, &faces);
  m.n_vertices = static_cast<int>(verts.size());
  m.faces = std::make_shared<const std::vector<Triangle>>(faces);
  m.w_offsets.push_back(0);
  for (int v = 0; v < m.n_vertices; ++v) {
    m.w_bones.push_back(1);
    m.w_vals.push_back(1.0);
    m.w_offsets.push_back(static_cast<std::uint32_t>(m.w_bones.size()));
  }
  m.base_point = flatten(verts);
  m.anthro_basis = MatX::Zero(3 * m.n_vertices, 2);
  m.shape_basis = MatX::Zero(3 * m.n_vertices, 1);
  m.mean_lengths = m.skeleton.mean_lengths();
  m.template_pose = VecX::Zero(m.skeleton.dof_count());
  m.validate();

  body::Theta th{m.template_pose, m.mean_lengths, VecX::Zero(1)};
  const auto props = inertial_properties(m, th, 1000.0);
  CHECK(props[1].mass == doctest::Approx(1000.0).epsilon(1e-9));
  CHECK(props[1].fallback == false);
  // Root got no vertices: point-mass fallback.
  CHECK(props[0].fallback == true);
  CHECK(props[0].mass == doctest::Approx(0.1));

  // Uniform scaling: mass ~ s^3, inertia ~ s^5.
  const double s = 1.7;
  body::BodyModel ms = m;
  ms.base_point *= s;
  const auto props_s = inertial_properties(ms, th, 1000.0);
  CHECK(props_s[1].mass ==
        doctest::Approx(props[1].mass * s * s * s).epsilon(1e-9));
  CHECK(props_s[1].inertia(0, 0) ==
        doctest::Approx(props[1].inertia(0, 0) * std::pow(s, 5)).epsilon(1e-9));
}
