#pragma once

#include "physmocap/body/model.hpp"

namespace physmocap::harness {

// Procedural ellipsoid-limb humanoid over the default skeleton. The template
// generator is exactly linear in the anthropometrics, so the stored anthro
// basis reproduces it with zero residual; the shape basis holds ten smooth
// orthonormal displacement fields orthogonal to the anthro subspace.
struct HumanoidOptions {
  int rings = 5;
  int sectors = 8;
  unsigned seed = 1234;      // shape-field phases
  double shape_amp = 0.015;  // meters, before orthonormalization
};

body::BodyModel reference_humanoid(const HumanoidOptions& opts = {});

// Simple non-human distractor clouds for detector training/evaluation.
enum class DistractorKind { kBox, kSphere, kCylinder };
std::vector<Vec3> distractor_cloud(DistractorKind kind, unsigned seed,
                                   int points = 600);

}  // namespace physmocap::harness
