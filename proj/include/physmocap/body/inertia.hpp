#pragma once

#include <vector>

#include "physmocap/body/model.hpp"
#include "physmocap/common.hpp"

namespace physmocap::body {

// Signed volume via the divergence theorem; absolute value reported.
// Degenerate (flat or empty) meshes give 0.
double mesh_volume(const VecX& vertices, const std::vector<Triangle>& faces);

// Outward-oriented triangulated convex hull. Returns an empty face list when
// the points are degenerate (fewer than 4, or coplanar within tolerance).
std::vector<Triangle> convex_hull(const std::vector<Vec3>& points);

struct MassProperties {
  double volume = 0;  // signed
  Vec3 com = Vec3::Zero();
  Mat3 inertia_com = Mat3::Zero();  // unit density, about com
};

MassProperties mass_properties(const std::vector<Vec3>& vertices,
                               const std::vector<Triangle>& faces);

struct BoneInertia {
  double mass = 0;               // kg
  Vec3 com = Vec3::Zero();       // bone-local
  Mat3 inertia = Mat3::Zero();   // kg m^2 about com, bone-local axes
  bool fallback = false;         // point-mass substitute used
};

// Per-bone mass, center of mass and inertia from the skinned mesh at theta.
// Vertices go to their maximum-weight bone; each bone's solid is the convex
// hull of its vertices. Bones with a degenerate hull get a 0.1 kg point mass
// with 1e-4 kg m^2 isotropic inertia.
std::vector<BoneInertia> inertial_properties(const BodyModel& model,
                                             const Theta& theta,
                                             double density = 1000.0);

}  // namespace physmocap::body
