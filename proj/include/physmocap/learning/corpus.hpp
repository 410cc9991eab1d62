#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "physmocap/body/model.hpp"

namespace physmocap::learning {

// One registered mesh: observed vertex positions plus joint-position
// landmarks (bone id, world position). Meshes without a full landmark set
// are skipped by the initializer.
struct RegisteredMesh {
  VecX vertices;  // 3N
  std::vector<std::pair<int, Vec3>> landmarks;
};

struct Subject {
  std::string id;
  std::vector<RegisteredMesh> meshes;
};

struct RegisteredCorpus {
  int n_vertices = 0;
  std::shared_ptr<const std::vector<Triangle>> faces;
  std::vector<Subject> subjects;

  int total_meshes() const {
    int n = 0;
    for (const auto& s : subjects) n += static_cast<int>(s.meshes.size());
    return n;
  }
};

struct CorpusOptions {
  int subjects = 5;
  int poses = 6;
  unsigned seed = 7;
  double length_spread = 0.08;    // relative anthropometric variation
  double shape_spread = 0.8;      // beta standard deviation
  double pose_spread = 0.35;      // radians
  double landmark_noise = 0.0;    // meters
  bool include_template_pose = true;
};

// Forward-generate a registered corpus from a generative model. Landmarks are
// the true joint positions (optionally noised).
RegisteredCorpus make_corpus(const body::BodyModel& model,
                             const CorpusOptions& opts = {});

// The subject parameters used by make_corpus, for round-trip checks.
struct CorpusTruth {
  std::vector<VecX> lengths;
  std::vector<VecX> betas;
  std::vector<std::vector<VecX>> poses;
};
RegisteredCorpus make_corpus(const body::BodyModel& model,
                             const CorpusOptions& opts, CorpusTruth* truth);

}  // namespace physmocap::learning
