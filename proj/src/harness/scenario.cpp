#include "physmocap/harness/scenario.hpp"

#include <cmath>
#include <random>

#include "physmocap/body/fit_points.hpp"

namespace physmocap::harness {

MotionScript script_from_name(const std::string& name) {
  if (name == "static") return MotionScript::kStatic;
  if (name == "walk") return MotionScript::kWalk;
  if (name == "squat") return MotionScript::kSquat;
  if (name == "arm-wave" || name == "arm_wave") return MotionScript::kArmWave;
  if (name == "free-fall" || name == "free_fall")
    return MotionScript::kFreeFall;
  throw InvalidInput("unknown motion script: " + name);
}

std::string script_name(MotionScript s) {
  switch (s) {
    case MotionScript::kStatic: return "static";
    case MotionScript::kWalk: return "walk";
    case MotionScript::kSquat: return "squat";
    case MotionScript::kArmWave: return "arm-wave";
    case MotionScript::kFreeFall: return "free-fall";
  }
  return "unknown";
}

namespace {

double smoothstep(double s) { return s * s * (3 - 2 * s); }

// Arms down, knees slightly bent; all scripted motion starts here.
VecX base_pose(const body::Skeleton& skel) {
  VecX q = VecX::Zero(skel.dof_count());
  const auto set = [&](const char* bone, int axis, double v) {
    const int idx = skel.dof_index(skel.bone_index(bone), axis);
    if (idx >= 0) q[idx] = v;
  };
  set("upperarm_l", 1, -M_PI / 2 + 0.15);
  set("upperarm_r", 1, M_PI / 2 - 0.15);
  set("forearm_l", 2, -0.2);
  set("forearm_r", 2, 0.2);
  set("shin_l", 0, 0.15);
  set("shin_r", 0, 0.15);
  set("foot_l", 0, -0.08);
  set("foot_r", 0, -0.08);
  return q;
}

struct LegDofs {
  std::vector<int> dofs;
};

LegDofs leg_dofs(const body::Skeleton& skel) {
  LegDofs out;
  for (const char* name : {"thigh_l", "shin_l", "foot_l", "toe_l", "thigh_r",
                           "shin_r", "foot_r", "toe_r"}) {
    const int b = skel.bone_index(name);
    for (int a = 0; a < 3; ++a) {
      const int idx = skel.dof_index(b, a);
      if (idx >= 0) out.dofs.push_back(idx);
    }
  }
  return out;
}

// Nominal forward position and height of a foot over the gait cycle. The
// foot lifts before it translates so the 5 cm contact-label band sees no
// horizontal travel.
void foot_curve(double cycle_phase, double stride, double duty, double lift,
                double* y, double* z) {
  const double c = std::floor(cycle_phase);
  const double p = cycle_phase - c;
  if (p < duty) {
    *y = c * stride;
    *z = 0;
  } else {
    const double s = (p - duty) / (1 - duty);
    const double travel = std::clamp((s - 0.18) / 0.64, 0.0, 1.0);
    *y = (c + smoothstep(travel)) * stride;
    *z = lift * std::sin(M_PI * s);
  }
}

void solve_legs(const body::Skeleton& skel, const VecX& lengths,
                const std::vector<int>& dofs,
                const std::array<Vec3, 4>& heel_toe_targets, VecX* q) {
  // Targets in contact-point order: left toe, right toe, left heel, right heel.
  const auto pts = contact::default_contact_points(skel);
  std::vector<body::PointTarget> targets;
  for (int i = 0; i < 4; ++i)
    targets.push_back(
        {pts[i].point.bone, pts[i].point.local, heel_toe_targets[i]});
  body::FitOptions opts;
  opts.dofs = dofs;
  opts.max_iterations = 80;
  opts.tolerance = 1e-14;
  *q = body::fit_point_targets(skel, lengths, *q, targets, opts).q;
}

}  // namespace

std::vector<VecX> script_trajectory(const body::Skeleton& skel,
                                    const VecX& lengths, const Scenario& sc) {
  std::vector<VecX> poses;
  poses.reserve(sc.frames);
  VecX q = base_pose(skel);
  const auto legs = leg_dofs(skel);
  const auto arm = [&](const char* bone, int axis) {
    return skel.dof_index(skel.bone_index(bone), axis);
  };

  const double cycle = 1.25, stride = 0.36, duty = 0.62, lift = 0.12;
  const double foot_x = 0.105;

  for (int k = 0; k < sc.frames; ++k) {
    const double t = k / sc.fps;
    switch (sc.script) {
      case MotionScript::kStatic: {
        q[0] = 0;
        q[1] = 0;
        q[2] = 0.95;
        std::array<Vec3, 4> tg = {Vec3(-foot_x, 0.18, 0),
                                  Vec3(foot_x, 0.18, 0),
                                  Vec3(-foot_x, -0.05, 0),
                                  Vec3(foot_x, -0.05, 0)};
        solve_legs(skel, lengths, legs.dofs, tg, &q);
        break;
      }
      case MotionScript::kWalk: {
        const double phase_l = t / cycle, phase_r = t / cycle + 0.5;
        q[0] = 0.015 * std::sin(2 * M_PI * t / cycle);
        q[1] = stride * (t / cycle);
        q[2] = 0.93 + 0.012 * std::sin(4 * M_PI * t / cycle);
        q[arm("upperarm_l", 0)] = 0.25 * std::sin(2 * M_PI * phase_r);
        q[arm("upperarm_r", 0)] = 0.25 * std::sin(2 * M_PI * phase_l);
        double yl, zl, yr, zr;
        foot_curve(phase_l, stride, duty, lift, &yl, &zl);
        foot_curve(phase_r, stride, duty, lift, &yr, &zr);
        yl -= 0.25 * stride;
        yr -= 0.75 * stride;  // right leg trails by half a cycle
        std::array<Vec3, 4> tg = {Vec3(-foot_x, yl + 0.18, zl),
                                  Vec3(foot_x, yr + 0.18, zr),
                                  Vec3(-foot_x, yl - 0.05, zl),
                                  Vec3(foot_x, yr - 0.05, zr)};
        solve_legs(skel, lengths, legs.dofs, tg, &q);
        break;
      }
      case MotionScript::kSquat: {
        q[0] = 0;
        q[1] = 0;
        q[2] = 0.93 - 0.115 * (1 - std::cos(2 * M_PI * t / 2.5));
        std::array<Vec3, 4> tg = {Vec3(-foot_x, 0.18, 0),
                                  Vec3(foot_x, 0.18, 0),
                                  Vec3(-foot_x, -0.05, 0),
                                  Vec3(foot_x, -0.05, 0)};
        solve_legs(skel, lengths, legs.dofs, tg, &q);
        break;
      }
      case MotionScript::kArmWave: {
        q[0] = 0;
        q[1] = 0;
        q[2] = 0.95;
        const double w = 2 * M_PI * t / 1.6;
        q[arm("upperarm_l", 1)] = -M_PI / 2 + 0.15 + 0.9 * (1 + std::sin(w)) / 2;
        q[arm("upperarm_r", 0)] = 0.4 * std::sin(w * 0.7);
        q[arm("forearm_l", 2)] = -0.2 - 0.5 * (1 + std::cos(w)) / 2;
        std::array<Vec3, 4> tg = {Vec3(-foot_x, 0.18, 0),
                                  Vec3(foot_x, 0.18, 0),
                                  Vec3(-foot_x, -0.05, 0),
                                  Vec3(foot_x, -0.05, 0)};
        solve_legs(skel, lengths, legs.dofs, tg, &q);
        break;
      }
      case MotionScript::kFreeFall: {
        q[0] = 0;
        q[1] = 0;
        q[2] = 1.6 - 0.5 * kGravity * t * t;
        q[arm("upperarm_l", 0)] = 0.3;
        q[arm("upperarm_r", 0)] = -0.3;
        break;
      }
    }
    poses.push_back(q);
  }
  return poses;
}

std::array<Vec3, contact::kContactPoints> contact_point_positions(
    const body::Skeleton& skel,
    const std::array<contact::ContactPointSpec, contact::kContactPoints>& pts,
    const VecX& lengths, const VecX& q) {
  const auto world = body::bone_transforms(skel, lengths, q);
  std::array<Vec3, contact::kContactPoints> out;
  for (int i = 0; i < contact::kContactPoints; ++i)
    out[i] = world[pts[i].point.bone] * pts[i].point.local;
  return out;
}

SynthesisResult synthesize(const body::BodyModel& model, const Scenario& sc) {
  body::Theta subject;
  subject.q = model.template_pose;
  subject.lengths = model.mean_lengths;
  subject.beta = VecX::Zero(model.shape_rank());
  return synthesize(model, subject, sc);
}

SynthesisResult synthesize(const body::BodyModel& model,
                           const body::Theta& subject, const Scenario& sc) {
  SynthesisResult out;
  out.truth.subject = subject;
  out.truth.fps = sc.fps;
  out.truth.poses = script_trajectory(model.skeleton, subject.lengths, sc);

  std::mt19937 rng(sc.seed);
  std::normal_distribution<double> noise(0.0, sc.noise_sigma);
  const auto contact_pts = contact::default_contact_points(model.skeleton);

  for (const VecX& q : out.truth.poses) {
    body::Theta th{q, subject.lengths, subject.beta};
    const body::MeshInstance mesh = skin_mesh(model, th);
    const auto normals = body::vertex_normals(mesh.vertices, *model.faces);

    prep::PointCloudFrame frame;
    for (int v = 0; v < mesh.vertex_count(); ++v) {
      const Vec3 p = mesh.vertex(v);
      if (normals[v].dot(p - sc.camera) >= 0) continue;  // back-facing
      Vec3 sample = p;
      if (sc.noise_sigma > 0)
        sample += Vec3(noise(rng), noise(rng), noise(rng));
      frame.push(sample);
    }
    out.frames.push_back(std::move(frame));

    out.truth.joints.push_back(
        body::joint_positions(model.skeleton, subject.lengths, q));

    // Contact labels: the lowest candidate point plus everything within 5 cm
    // of it. Free fall never touches anything by construction.
    std::array<bool, contact::kContactPoints> labels{};
    if (sc.script != MotionScript::kFreeFall) {
      const auto pos =
          contact_point_positions(model.skeleton, contact_pts,
                                  subject.lengths, q);
      double zmin = pos[0].z();
      for (const auto& p : pos) zmin = std::min(zmin, p.z());
      for (int i = 0; i < contact::kContactPoints; ++i)
        labels[i] = pos[i].z() <= zmin + 0.05;
    }
    out.truth.contact.push_back(labels);
  }
  return out;
}

}  // namespace physmocap::harness
