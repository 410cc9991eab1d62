#pragma once

#include <vector>

#include "physmocap/body/model.hpp"
#include "physmocap/learning/corpus.hpp"

namespace physmocap::learning {

struct LearningOptions {
  int iterations = 2;
  double ridge = 1e-8;
  int shape_rank = kShapeRank;
  double rel_tolerance = 1e-5;  // early stop on relative F decrease
  int bfs_depth = 3;            // blend-weight support radius
  int pose_iterations = 60;
};

// Everything the alternation touches. Weights are shared across subjects;
// templates, lengths and poses are per subject / per mesh. Meshes whose
// landmarks were unusable are masked out.
struct LearningState {
  body::Skeleton skeleton;
  std::vector<std::vector<int>> support;                   // per vertex, bones
  std::vector<VecX> weights;                               // per vertex, |support|
  std::vector<VecX> templates;                             // per subject, 3N
  std::vector<VecX> subject_lengths;                       // per subject
  std::vector<std::vector<VecX>> poses;                    // per subject/mesh
  std::vector<std::vector<char>> usable;                   // landmark-complete
  int skipped_meshes = 0;
  double objective = 0;                                    // current F
  std::vector<double> objective_history;                   // after each substep
};

// Landmark-based pose/anthropometrics initialization plus rigid binding and
// per-subject template bootstrap.
LearningState init_state(const RegisteredCorpus& corpus,
                         const body::Skeleton& skel,
                         const LearningOptions& opts = {});

// Global reconstruction error F over subjects with more than one usable mesh.
double global_objective(const LearningState& state,
                        const RegisteredCorpus& corpus);

// Alternation substeps. Each is guaranteed not to increase F.
void fit_blend_weights(LearningState* state, const RegisteredCorpus& corpus,
                       const LearningOptions& opts = {});
void fit_templates(LearningState* state, const RegisteredCorpus& corpus,
                   const LearningOptions& opts = {});
void fit_poses(LearningState* state, const RegisteredCorpus& corpus,
               const LearningOptions& opts = {});

// init_state + `iterations` rounds of (a) weights, (b) templates, (c) poses,
// with early stop on small relative decrease.
LearningState alternate(const RegisteredCorpus& corpus,
                        const body::Skeleton& skel,
                        const LearningOptions& opts = {});
void alternate(LearningState* state, const RegisteredCorpus& corpus,
               const LearningOptions& opts);

struct AnthroFit {
  MatX basis;          // 3N x bone_count
  VecX mean_lengths;   // bone_count
  VecX base_point;     // 3N
  bool underdetermined = false;  // fewer subjects than bones: ridge fit
};

AnthroFit learn_anthro_basis(const std::vector<VecX>& templates,
                             const std::vector<VecX>& lengths,
                             double ridge = 1e-8);

// Rank-limited PCA of template residuals, explicitly projected off the
// anthro column space; zero-padded when the residual rank falls short.
MatX learn_shape_basis(const std::vector<VecX>& templates,
                       const AnthroFit& fit, int rank = kShapeRank);

// Pack the learned pieces into a generative model.
body::BodyModel assemble_model(const LearningState& state,
                               const RegisteredCorpus& corpus,
                               const LearningOptions& opts = {});

// Mean per-vertex reconstruction error over the usable corpus meshes.
double mean_vertex_error(const LearningState& state,
                         const RegisteredCorpus& corpus);

// Landmark-only estimation, exposed for tests: per-mesh poses plus
// per-subject anthropometrics.
struct LandmarkInit {
  std::vector<std::vector<VecX>> poses;
  std::vector<VecX> lengths;
  std::vector<std::vector<char>> usable;
  int skipped = 0;
};
LandmarkInit init_poses_from_landmarks(const RegisteredCorpus& corpus,
                                       const body::Skeleton& skel);

}  // namespace physmocap::learning
