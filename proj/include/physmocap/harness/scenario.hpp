#pragma once

#include <array>
#include <vector>

#include "physmocap/body/model.hpp"
#include "physmocap/contact/classifier.hpp"
#include "physmocap/prep/cloud.hpp"

namespace physmocap::harness {

enum class MotionScript { kStatic, kWalk, kSquat, kArmWave, kFreeFall };

MotionScript script_from_name(const std::string& name);
std::string script_name(MotionScript s);

struct Scenario {
  MotionScript script = MotionScript::kWalk;
  int frames = 100;
  double fps = 30.0;
  double noise_sigma = 0.0;   // meters
  Vec3 camera = {0.0, 3.2, 1.3};
  unsigned seed = 1;
};

struct GroundTruth {
  std::vector<VecX> poses;
  std::vector<std::vector<Vec3>> joints;  // per frame, per bone
  std::vector<std::array<bool, contact::kContactPoints>> contact;
  body::Theta subject;  // parameters the frames were rendered with
  double fps = 30.0;
};

struct SynthesisResult {
  std::vector<prep::PointCloudFrame> frames;
  GroundTruth truth;
};

// Kinematically scripted pose trajectory; walking and squatting solve the leg
// chains against prescribed foot targets so stance feet are genuinely pinned.
std::vector<VecX> script_trajectory(const body::Skeleton& skel,
                                    const VecX& lengths, const Scenario& sc);

// Visible-surface point samples of the skinned mesh (back-face culled from
// the camera) with isotropic Gaussian noise, plus full ground truth. Output
// is deterministic in the scenario seed.
SynthesisResult synthesize(const body::BodyModel& model, const Scenario& sc);
SynthesisResult synthesize(const body::BodyModel& model,
                           const body::Theta& subject, const Scenario& sc);

// World positions of the four candidate contact points.
std::array<Vec3, contact::kContactPoints> contact_point_positions(
    const body::Skeleton& skel,
    const std::array<contact::ContactPointSpec, contact::kContactPoints>& pts,
    const VecX& lengths, const VecX& q);

}  // namespace physmocap::harness
