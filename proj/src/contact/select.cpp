#include "physmocap/contact/classifier.hpp"

namespace physmocap::contact {

ContactState select_active(
    const Eigen::Matrix<double, kContactPoints, 1>& probabilities,
    const ContactState& previous,
    const std::array<ContactPointSpec, kContactPoints>& points,
    const body::Skeleton& skel, const VecX& lengths, const VecX& q,
    double threshold) {
  ContactState next;
  next.probability = probabilities;
  const auto world = body::bone_transforms(skel, lengths, q);
  for (int i = 0; i < kContactPoints; ++i) {
    if (probabilities[i] >= threshold) {
      next.active[i] = true;
      next.anchor[i] = previous.active[i]
                           ? previous.anchor[i]
                           : Vec3(world[points[i].point.bone] *
                                  points[i].point.local);
    } else {
      next.active[i] = false;
      next.anchor[i] = Vec3::Zero();
    }
  }
  return next;
}

dynamics::ContactConstraintSet to_constraints(
    const ContactState& state,
    const std::array<ContactPointSpec, kContactPoints>& points) {
  dynamics::ContactConstraintSet set;
  for (int i = 0; i < kContactPoints; ++i)
    if (state.active[i])
      set.active.push_back({i, points[i].point, state.anchor[i]});
  return set;
}

}  // namespace physmocap::contact
