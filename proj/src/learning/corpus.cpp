#include "physmocap/learning/corpus.hpp"

#include <random>

namespace physmocap::learning {

RegisteredCorpus make_corpus(const body::BodyModel& model,
                             const CorpusOptions& opts) {
  return make_corpus(model, opts, nullptr);
}

RegisteredCorpus make_corpus(const body::BodyModel& model,
                             const CorpusOptions& opts, CorpusTruth* truth) {
  std::mt19937 rng(opts.seed);
  std::uniform_real_distribution<double> spread(-opts.length_spread,
                                                opts.length_spread);
  std::normal_distribution<double> shape(0.0, opts.shape_spread);
  std::uniform_real_distribution<double> angle(-opts.pose_spread,
                                               opts.pose_spread);
  std::normal_distribution<double> lmnoise(0.0, opts.landmark_noise);

  RegisteredCorpus corpus;
  corpus.n_vertices = model.n_vertices;
  corpus.faces = model.faces;
  if (truth) *truth = CorpusTruth{};

  const auto& skel = model.skeleton;
  for (int s = 0; s < opts.subjects; ++s) {
    Subject subject;
    subject.id = "s" + std::to_string(s);
    VecX lengths = model.mean_lengths;
    for (int b = 0; b < lengths.size(); ++b) lengths[b] *= 1.0 + spread(rng);
    VecX beta(model.shape_rank());
    for (int k = 0; k < beta.size(); ++k) beta[k] = shape(rng);

    std::vector<VecX> subject_poses;
    for (int j = 0; j < opts.poses; ++j) {
      VecX q = VecX::Zero(skel.dof_count());
      if (!(j == 0 && opts.include_template_pose)) {
        for (int d = 6; d < skel.dof_count(); ++d) q[d] = angle(rng);
        q.segment<3>(0) = 0.1 * Vec3(angle(rng), angle(rng), angle(rng));
        q.segment<3>(3) = 0.3 * Vec3(angle(rng), angle(rng), angle(rng));
      }
      body::Theta theta{q, lengths, beta};
      RegisteredMesh mesh;
      mesh.vertices = skin_positions(model, theta);
      const auto joints = body::joint_positions(skel, lengths, q);
      for (int b = 0; b < skel.bone_count(); ++b) {
        Vec3 lm = joints[b];
        if (opts.landmark_noise > 0)
          lm += Vec3(lmnoise(rng), lmnoise(rng), lmnoise(rng));
        mesh.landmarks.push_back({b, lm});
      }
      subject.meshes.push_back(std::move(mesh));
      subject_poses.push_back(q);
    }
    corpus.subjects.push_back(std::move(subject));
    if (truth) {
      truth->lengths.push_back(lengths);
      truth->betas.push_back(beta);
      truth->poses.push_back(std::move(subject_poses));
    }
  }
  return corpus;
}

}  // namespace physmocap::learning
