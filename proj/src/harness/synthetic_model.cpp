#include "physmocap/harness/synthetic_model.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <map>
#include <random>

#include "physmocap/body/skeleton.hpp"

namespace physmocap::harness {

namespace {

double lateral_radius(const std::string& name) {
  static const std::map<std::string, double> table = {
      {"pelvis", 0.13},   {"spine", 0.115},  {"chest", 0.13},
      {"neck", 0.05},     {"head", 0.10},    {"clavicle", 0.05},
      {"upperarm", 0.045}, {"forearm", 0.038}, {"hand", 0.032},
      {"fingers", 0.022}, {"thigh", 0.072},  {"shin", 0.052},
      {"foot", 0.04},     {"toe", 0.028}};
  for (const auto& [prefix, r] : table)
    if (name.rfind(prefix, 0) == 0) return r;
  return 0.05;
}

struct Shell {
  std::vector<Vec3> verts;
  std::vector<Triangle> faces;  // local indexing
};

// UV-sphere ellipsoid around a segment; u is the long axis.
Shell make_shell(const Vec3& a, const Vec3& b, double radius, int rings,
                 int sectors) {
  Shell s;
  const Vec3 seg = b - a;
  const double half = 0.62 * seg.norm();  // limb shells overlap at joints
  Vec3 u = seg.normalized();
  Vec3 v = u.cross(Vec3::UnitZ());
  if (v.norm() < 1e-6) v = u.cross(Vec3::UnitX());
  v.normalize();
  const Vec3 w = u.cross(v);
  const Vec3 center = (a + b) / 2;

  s.verts.push_back(center + half * u);
  for (int i = 1; i < rings; ++i) {
    const double phi = M_PI * i / rings;
    for (int j = 0; j < sectors; ++j) {
      const double th = 2 * M_PI * j / sectors;
      s.verts.push_back(center + half * std::cos(phi) * u +
                        radius * std::sin(phi) *
                            (std::cos(th) * v + std::sin(th) * w));
    }
  }
  s.verts.push_back(center - half * u);

  const auto ring = [&](int i, int j) {
    return static_cast<std::uint32_t>(1 + (i - 1) * sectors + (j % sectors));
  };
  for (int j = 0; j < sectors; ++j) s.faces.push_back({0, ring(1, j), ring(1, j + 1)});
  for (int i = 1; i < rings - 1; ++i)
    for (int j = 0; j < sectors; ++j) {
      s.faces.push_back({ring(i, j), ring(i + 1, j), ring(i + 1, j + 1)});
      s.faces.push_back({ring(i, j), ring(i + 1, j + 1), ring(i, j + 1)});
    }
  const auto south = static_cast<std::uint32_t>(s.verts.size() - 1);
  for (int j = 0; j < sectors; ++j)
    s.faces.push_back({south, ring(rings - 1, j + 1), ring(rings - 1, j)});
  return s;
}

// Vertex positions of the whole template at the given lengths; linear in l.
struct TemplateLayout {
  std::vector<Vec3> verts;
  std::vector<Triangle> faces;
  std::vector<int> owner;                // bone per vertex
  std::vector<double> longitudinal;      // 0 at proximal end, 1 at distal
};

TemplateLayout build_template(const body::Skeleton& skel, const VecX& lengths,
                              int rings, int sectors) {
  TemplateLayout out;
  const auto joints =
      body::joint_positions(skel, lengths, VecX::Zero(skel.dof_count()));
  for (int b = 0; b < skel.bone_count(); ++b) {
    // Segment end: the first child's joint, or an extension along the bone's
    // own offset direction for leaves (head up, fingers out, toes forward).
    Vec3 tip;
    int child = -1;
    for (int c = b + 1; c < skel.bone_count(); ++c)
      if (skel.bones[c].parent == b) {
        child = c;
        break;
      }
    if (child >= 0) {
      tip = joints[child];
    } else {
      Vec3 dir = skel.bones[b].offset_per_length;
      if (b == 0 || dir.norm() < 1e-9) dir = Vec3(0, 0, 1);
      tip = joints[b] + dir.normalized() * lengths[b];
    }
    const Shell shell = make_shell(joints[b], tip, lateral_radius(
                                       skel.bones[b].name), rings, sectors);
    const auto base = static_cast<std::uint32_t>(out.verts.size());
    const Vec3 seg = tip - joints[b];
    const double len2 = std::max(seg.squaredNorm(), 1e-12);
    for (const Vec3& p : shell.verts) {
      out.verts.push_back(p);
      out.owner.push_back(b);
      out.longitudinal.push_back(
          std::clamp((p - joints[b]).dot(seg) / len2, 0.0, 1.0));
    }
    for (const Triangle& f : shell.faces)
      out.faces.push_back({f.a + base, f.b + base, f.c + base});
  }
  return out;
}

}  // namespace

body::BodyModel reference_humanoid(const HumanoidOptions& opts) {
  body::BodyModel m;
  m.skeleton = body::default_skeleton();
  m.mean_lengths = m.skeleton.mean_lengths();
  m.template_pose = VecX::Zero(m.skeleton.dof_count());

  const TemplateLayout tpl =
      build_template(m.skeleton, m.mean_lengths, opts.rings, opts.sectors);
  m.n_vertices = static_cast<int>(tpl.verts.size());
  m.faces = std::make_shared<const std::vector<Triangle>>(tpl.faces);
  m.base_point.resize(3 * m.n_vertices);
  for (int i = 0; i < m.n_vertices; ++i)
    m.base_point.segment<3>(3 * i) = tpl.verts[i];

  // Blend weights: rigid mid-shell, parent/child blends near the ends.
  m.w_offsets.push_back(0);
  for (int i = 0; i < m.n_vertices; ++i) {
    const int b = tpl.owner[i];
    const double t = tpl.longitudinal[i];
    int other = -1;
    double w_other = 0;
    if (t < 0.3 && m.skeleton.bones[b].parent >= 0) {
      other = m.skeleton.bones[b].parent;
      w_other = 0.5 * (1.0 - t / 0.3);
    } else if (t > 0.7) {
      for (int c = b + 1; c < m.skeleton.bone_count(); ++c)
        if (m.skeleton.bones[c].parent == b) {
          other = c;
          break;
        }
      if (other >= 0) w_other = 0.5 * (t - 0.7) / 0.3;
    }
    if (other >= 0 && w_other > 1e-9) {
      m.w_bones.push_back(static_cast<std::uint32_t>(b));
      m.w_vals.push_back(1.0 - w_other);
      m.w_bones.push_back(static_cast<std::uint32_t>(other));
      m.w_vals.push_back(w_other);
    } else {
      m.w_bones.push_back(static_cast<std::uint32_t>(b));
      m.w_vals.push_back(1.0);
    }
    m.w_offsets.push_back(static_cast<std::uint32_t>(m.w_bones.size()));
  }

  // Anthro basis by unit perturbation; exact because the generator is linear
  // in the lengths.
  const int nb = m.skeleton.bone_count();
  m.anthro_basis.resize(3 * m.n_vertices, nb);
  for (int b = 0; b < nb; ++b) {
    VecX l = m.mean_lengths;
    l[b] += 1.0;
    const TemplateLayout bumped =
        build_template(m.skeleton, l, opts.rings, opts.sectors);
    for (int i = 0; i < m.n_vertices; ++i)
      m.anthro_basis.block<3, 1>(3 * i, b) = bumped.verts[i] - tpl.verts[i];
  }

  // Shape basis: smooth radial bulge fields, projected off the anthro
  // subspace and orthonormalized.
  std::mt19937 rng(opts.seed);
  std::uniform_real_distribution<double> uphase(0, 2 * M_PI);
  MatX raw(3 * m.n_vertices, kShapeRank);
  const auto joints = body::joint_positions(m.skeleton, m.mean_lengths,
                                            m.template_pose);
  for (int k = 0; k < kShapeRank; ++k) {
    const double freq = 1.5 + 0.8 * k;
    const double phase = uphase(rng);
    for (int i = 0; i < m.n_vertices; ++i) {
      const int b = tpl.owner[i];
      const Vec3 axis_point = joints[b];
      Vec3 radial = tpl.verts[i] - axis_point;
      radial.z() = 0;  // horizontal girth change
      if (radial.norm() < 1e-9) radial = Vec3(1, 0, 0);
      radial.normalize();
      const double env =
          std::sin(freq * tpl.verts[i].z() + phase) +
          0.3 * std::cos(freq * tpl.verts[i].x() * 2.0 + phase);
      raw.block<3, 1>(3 * i, k) = opts.shape_amp * env * radial;
    }
  }
  // Project off col(anthro_basis), then orthonormalize.
  Eigen::ColPivHouseholderQR<MatX> qr_l(m.anthro_basis);
  const int rank_l = static_cast<int>(qr_l.rank());
  MatX q_l = MatX(qr_l.householderQ() *
                  MatX::Identity(3 * m.n_vertices, rank_l));
  raw -= q_l * (q_l.transpose() * raw);
  const Eigen::HouseholderQR<MatX> qr_s(raw);
  m.shape_basis = MatX(qr_s.householderQ() *
                       MatX::Identity(3 * m.n_vertices, kShapeRank));

  m.validate();
  return m;
}

std::vector<Vec3> distractor_cloud(DistractorKind kind, unsigned seed,
                                   int points) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1, 1);
  std::uniform_real_distribution<double> u01(0, 1);
  std::vector<Vec3> out;
  out.reserve(points);
  const double sx = 0.5 + 0.4 * u01(rng), sy = 0.4 + 0.4 * u01(rng),
               sz = 0.6 + 0.8 * u01(rng);
  for (int i = 0; i < points; ++i) {
    switch (kind) {
      case DistractorKind::kBox: {
        // Random point on the box surface.
        const int face = static_cast<int>(rng() % 6);
        Vec3 p(u(rng) * sx, u(rng) * sy, u(rng) * sz);
        p[face / 2] = (face % 2 ? 1.0 : -1.0) * (face / 2 == 0 ? sx : face / 2 == 1 ? sy : sz);
        out.push_back(p);
        break;
      }
      case DistractorKind::kSphere: {
        Vec3 p(u(rng), u(rng), u(rng));
        while (p.norm() < 1e-6) p = Vec3(u(rng), u(rng), u(rng));
        out.push_back(p.normalized() * sx);
        break;
      }
      case DistractorKind::kCylinder: {
        const double th = M_PI * 2 * u01(rng);
        out.push_back(
            {sx * std::cos(th), sx * std::sin(th), sz * u(rng)});
        break;
      }
    }
  }
  return out;
}

}  // namespace physmocap::harness
