#include "physmocap/learning/learn.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "physmocap/body/fit_points.hpp"
#include "physmocap/learning/solvers.hpp"

namespace physmocap::learning {

namespace {

// Per-bone blend transforms G_b = M_b(l, q) * M_b(l, 0)^-1 for one subject.
std::vector<Iso3> blend_isos(const body::Skeleton& skel, const VecX& lengths,
                             const VecX& q) {
  const auto posed = body::bone_transforms(skel, lengths, q);
  const auto rest =
      body::bone_transforms(skel, lengths, VecX::Zero(skel.dof_count()));
  std::vector<Iso3> g(posed.size());
  for (std::size_t b = 0; b < posed.size(); ++b)
    g[b] = posed[b] * rest[b].inverse();
  return g;
}

Vec3 lmb_point(const LearningState& st, const std::vector<Iso3>& g, int vertex,
               const VecX& tpl) {
  const Vec3 p = tpl.segment<3>(3 * vertex);
  Vec3 out = Vec3::Zero();
  const auto& sup = st.support[vertex];
  for (std::size_t k = 0; k < sup.size(); ++k)
    out += st.weights[vertex][k] * (g[sup[k]] * p);
  return out;
}

double subject_mesh_error(const LearningState& st,
                          const RegisteredCorpus& corpus, int s, int j) {
  const auto g =
      blend_isos(st.skeleton, st.subject_lengths[s], st.poses[s][j]);
  const VecX& obs = corpus.subjects[s].meshes[j].vertices;
  double err = 0;
  for (int i = 0; i < corpus.n_vertices; ++i)
    err += (lmb_point(st, g, i, st.templates[s]) -
            Vec3(obs.segment<3>(3 * i)))
               .squaredNorm();
  return err;
}

int usable_count(const LearningState& st, int s) {
  int n = 0;
  for (char u : st.usable[s]) n += u ? 1 : 0;
  return n;
}

// Skeleton-tree BFS ball around a bone.
std::vector<int> bfs_ball(const body::Skeleton& skel, int center, int depth) {
  std::vector<int> dist(skel.bone_count(), -1);
  std::vector<int> queue = {center};
  dist[center] = 0;
  std::vector<int> out = {center};
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const int b = queue[head];
    if (dist[b] == depth) continue;
    std::vector<int> nbrs;
    if (skel.bones[b].parent >= 0) nbrs.push_back(skel.bones[b].parent);
    for (int c = 0; c < skel.bone_count(); ++c)
      if (skel.bones[c].parent == b) nbrs.push_back(c);
    for (int n : nbrs)
      if (dist[n] < 0) {
        dist[n] = dist[b] + 1;
        queue.push_back(n);
        out.push_back(n);
      }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Distance from a point to the bone's segment (joint to first child joint or
// a leaf extension).
double bone_segment_distance(const body::Skeleton& skel,
                             const std::vector<Vec3>& joints,
                             const VecX& lengths, int b, const Vec3& p) {
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
  const Vec3 seg = tip - joints[b];
  const double len2 = std::max(seg.squaredNorm(), 1e-12);
  const double t = std::clamp((p - joints[b]).dot(seg) / len2, 0.0, 1.0);
  return (p - (joints[b] + t * seg)).norm();
}

}  // namespace

LandmarkInit init_poses_from_landmarks(const RegisteredCorpus& corpus,
                                       const body::Skeleton& skel) {
  LandmarkInit out;
  const int nb = skel.bone_count();
  for (const Subject& subject : corpus.subjects) {
    std::vector<char> usable;
    for (const RegisteredMesh& mesh : subject.meshes) {
      std::vector<char> seen(nb, 0);
      for (const auto& [b, p] : mesh.landmarks)
        if (b >= 0 && b < nb) seen[b] = 1;
      const bool ok =
          std::count(seen.begin(), seen.end(), char(1)) == nb;
      usable.push_back(ok ? 1 : 0);
      if (!ok) ++out.skipped;
    }

    // Anthropometrics from mean landmark bone lengths: a child landmark at
    // distance d from its parent's landmark pins the parent length to
    // d / |offset direction|.
    VecX lengths = skel.mean_lengths();
    std::vector<double> sum(nb, 0);
    std::vector<int> count(nb, 0);
    for (std::size_t j = 0; j < subject.meshes.size(); ++j) {
      if (!usable[j]) continue;
      std::vector<Vec3> lm(nb);
      for (const auto& [b, p] : subject.meshes[j].landmarks) lm[b] = p;
      for (int b = 1; b < nb; ++b) {
        const int parent = skel.bones[b].parent;
        const double dirn = skel.bones[b].offset_per_length.norm();
        if (dirn < 1e-9) continue;
        sum[parent] += (lm[b] - lm[parent]).norm() / dirn;
        ++count[parent];
      }
    }
    for (int b = 0; b < nb; ++b)
      if (count[b] > 0) lengths[b] = sum[b] / count[b];

    // Pose per mesh by nonlinear LS on the landmark positions.
    std::vector<VecX> poses;
    for (std::size_t j = 0; j < subject.meshes.size(); ++j) {
      VecX q = VecX::Zero(skel.dof_count());
      if (usable[j]) {
        std::vector<body::PointTarget> targets;
        for (const auto& [b, p] : subject.meshes[j].landmarks)
          targets.push_back({b, Vec3::Zero(), p});
        for (const auto& [b, p] : subject.meshes[j].landmarks)
          if (b == 0) q.segment<3>(0) = p;
        body::FitOptions opts;
        opts.max_iterations = 120;
        opts.tolerance = 1e-16;
        q = body::fit_point_targets(skel, lengths, q, targets, opts).q;
      }
      poses.push_back(q);
    }
    out.lengths.push_back(lengths);
    out.poses.push_back(std::move(poses));
    out.usable.push_back(std::move(usable));
  }
  return out;
}

LearningState init_state(const RegisteredCorpus& corpus,
                         const body::Skeleton& skel,
                         const LearningOptions& opts) {
  if (corpus.subjects.empty())
    throw InvalidInput("init_state: empty corpus");
  LearningState st;
  st.skeleton = skel;
  auto lm = init_poses_from_landmarks(corpus, skel);
  st.poses = std::move(lm.poses);
  st.subject_lengths = std::move(lm.lengths);
  st.usable = std::move(lm.usable);
  st.skipped_meshes = lm.skipped;

  const int n = corpus.n_vertices;
  const int ns = static_cast<int>(corpus.subjects.size());

  // Nearest bone per vertex, voted across each subject's first usable mesh.
  std::vector<std::vector<int>> votes(n, std::vector<int>(skel.bone_count(), 0));
  for (int s = 0; s < ns; ++s) {
    int j0 = -1;
    for (std::size_t j = 0; j < st.usable[s].size(); ++j)
      if (st.usable[s][j]) {
        j0 = static_cast<int>(j);
        break;
      }
    if (j0 < 0) continue;
    const auto joints =
        body::joint_positions(skel, st.subject_lengths[s], st.poses[s][j0]);
    const VecX& obs = corpus.subjects[s].meshes[j0].vertices;
    for (int i = 0; i < n; ++i) {
      int best = 0;
      double best_d = std::numeric_limits<double>::max();
      for (int b = 0; b < skel.bone_count(); ++b) {
        const double d = bone_segment_distance(skel, joints,
                                               st.subject_lengths[s], b,
                                               obs.segment<3>(3 * i));
        if (d < best_d) {
          best_d = d;
          best = b;
        }
      }
      ++votes[i][best];
    }
  }
  st.support.resize(n);
  st.weights.resize(n);
  std::vector<int> winner(n, 0);
  for (int i = 0; i < n; ++i) {
    int best = 0;
    for (int b = 1; b < skel.bone_count(); ++b)
      if (votes[i][b] > votes[i][best]) best = b;
    winner[i] = best;
    st.support[i] = bfs_ball(skel, best, opts.bfs_depth);
    st.weights[i] = VecX::Zero(st.support[i].size());
    for (std::size_t k = 0; k < st.support[i].size(); ++k)
      if (st.support[i][k] == best) st.weights[i][k] = 1.0;
  }

  // Template bootstrap: rigidly unpose each subject's first usable mesh with
  // the winning bone.
  st.templates.assign(ns, VecX::Zero(3 * n));
  for (int s = 0; s < ns; ++s) {
    int j0 = -1;
    for (std::size_t j = 0; j < st.usable[s].size(); ++j)
      if (st.usable[s][j]) {
        j0 = static_cast<int>(j);
        break;
      }
    if (j0 < 0) {
      st.templates[s] = corpus.subjects[s].meshes.empty()
                            ? VecX::Zero(3 * n)
                            : corpus.subjects[s].meshes[0].vertices;
      continue;
    }
    const auto g = blend_isos(skel, st.subject_lengths[s], st.poses[s][j0]);
    const VecX& obs = corpus.subjects[s].meshes[j0].vertices;
    for (int i = 0; i < n; ++i)
      st.templates[s].segment<3>(3 * i) =
          g[winner[i]].inverse() * Vec3(obs.segment<3>(3 * i));
  }

  st.objective = global_objective(st, corpus);
  return st;
}

double global_objective(const LearningState& st,
                        const RegisteredCorpus& corpus) {
  double f = 0;
  for (std::size_t s = 0; s < corpus.subjects.size(); ++s) {
    if (usable_count(st, s) < 2) continue;  // weight-learning subjects only
    for (std::size_t j = 0; j < corpus.subjects[s].meshes.size(); ++j)
      if (st.usable[s][j]) f += subject_mesh_error(st, corpus, s, j);
  }
  return f;
}

void fit_blend_weights(LearningState* state, const RegisteredCorpus& corpus,
                       const LearningOptions& opts) {
  LearningState& st = *state;
  const int n = corpus.n_vertices;

  // Cache blend transforms per (subject, mesh).
  std::vector<std::vector<std::vector<Iso3>>> gcache(corpus.subjects.size());
  std::vector<char> in_weight_set(corpus.subjects.size(), 0);
  int stacked = 0;
  for (std::size_t s = 0; s < corpus.subjects.size(); ++s) {
    if (usable_count(st, s) < 2) continue;
    in_weight_set[s] = 1;
    gcache[s].resize(corpus.subjects[s].meshes.size());
    for (std::size_t j = 0; j < corpus.subjects[s].meshes.size(); ++j)
      if (st.usable[s][j]) {
        gcache[s][j] =
            blend_isos(st.skeleton, st.subject_lengths[s], st.poses[s][j]);
        ++stacked;
      }
  }
  if (stacked == 0) return;

  for (int i = 0; i < n; ++i) {
    const auto& sup = st.support[i];
    MatX a(3 * stacked, sup.size());
    VecX b(3 * stacked);
    int row = 0;
    for (std::size_t s = 0; s < corpus.subjects.size(); ++s) {
      if (!in_weight_set[s]) continue;
      const Vec3 tpl = st.templates[s].segment<3>(3 * i);
      for (std::size_t j = 0; j < corpus.subjects[s].meshes.size(); ++j) {
        if (!st.usable[s][j]) continue;
        for (std::size_t k = 0; k < sup.size(); ++k)
          a.block<3, 1>(row, k) = gcache[s][j][sup[k]] * tpl;
        b.segment<3>(row) =
            corpus.subjects[s].meshes[j].vertices.segment<3>(3 * i);
        row += 3;
      }
    }
    const bool deficient =
        Eigen::ColPivHouseholderQR<MatX>(a).rank() <
        static_cast<Eigen::Index>(sup.size());
    const double ridge = deficient ? opts.ridge : 0.0;
    st.weights[i] = simplex_ls(a, b, ridge, st.weights[i]);
  }
  st.objective = global_objective(st, corpus);
  st.objective_history.push_back(st.objective);
}

void fit_templates(LearningState* state, const RegisteredCorpus& corpus,
                   const LearningOptions& opts) {
  LearningState& st = *state;
  const int n = corpus.n_vertices;
  for (std::size_t s = 0; s < corpus.subjects.size(); ++s) {
    std::vector<std::vector<Iso3>> g(corpus.subjects[s].meshes.size());
    int used = 0;
    for (std::size_t j = 0; j < corpus.subjects[s].meshes.size(); ++j)
      if (st.usable[s][j]) {
        g[j] = blend_isos(st.skeleton, st.subject_lengths[s], st.poses[s][j]);
        ++used;
      }
    if (used == 0) continue;

    for (int i = 0; i < n; ++i) {
      const auto& sup = st.support[i];
      Mat3 normal = Mat3::Zero();
      Vec3 rhs = Vec3::Zero();
      double old_err = 0;
      const Vec3 old_tpl = st.templates[s].segment<3>(3 * i);
      for (std::size_t j = 0; j < corpus.subjects[s].meshes.size(); ++j) {
        if (!st.usable[s][j]) continue;
        Mat3 t = Mat3::Zero();
        Vec3 shift = Vec3::Zero();
        for (std::size_t k = 0; k < sup.size(); ++k) {
          t += st.weights[i][k] * g[j][sup[k]].linear();
          shift += st.weights[i][k] * g[j][sup[k]].translation();
        }
        const Vec3 obs =
            corpus.subjects[s].meshes[j].vertices.segment<3>(3 * i);
        normal += t.transpose() * t;
        rhs += t.transpose() * (obs - shift);
        old_err += (t * old_tpl + shift - obs).squaredNorm();
      }
      Mat3 reg = normal;
      if (std::abs(normal.determinant()) < 1e-12)
        reg.diagonal().array() += opts.ridge;
      const Vec3 solved = reg.ldlt().solve(rhs);
      // Accept only improvements so the ridge never pushes F up.
      double new_err = 0;
      for (std::size_t j = 0; j < corpus.subjects[s].meshes.size(); ++j) {
        if (!st.usable[s][j]) continue;
        Mat3 t = Mat3::Zero();
        Vec3 shift = Vec3::Zero();
        for (std::size_t k = 0; k < sup.size(); ++k) {
          t += st.weights[i][k] * g[j][sup[k]].linear();
          shift += st.weights[i][k] * g[j][sup[k]].translation();
        }
        const Vec3 obs =
            corpus.subjects[s].meshes[j].vertices.segment<3>(3 * i);
        new_err += (t * solved + shift - obs).squaredNorm();
      }
      if (new_err <= old_err && solved.allFinite())
        st.templates[s].segment<3>(3 * i) = solved;
    }
  }
  st.objective = global_objective(st, corpus);
  st.objective_history.push_back(st.objective);
}

namespace {

// Objective and gradient of the per-mesh data term for the pose step.
double pose_objective(const LearningState& st, const RegisteredCorpus& corpus,
                      int s, int j, const VecX& q,
                      const std::vector<std::vector<int>>& anc, VecX* grad) {
  const body::Skeleton& skel = st.skeleton;
  const auto fk = body::forward_kinematics(skel, st.subject_lengths[s], q);
  const auto rest = body::bone_transforms(skel, st.subject_lengths[s],
                                          VecX::Zero(skel.dof_count()));
  std::vector<Iso3> g(rest.size());
  for (std::size_t b = 0; b < rest.size(); ++b)
    g[b] = fk.world[b] * rest[b].inverse();

  if (grad) grad->setZero();
  const VecX& obs = corpus.subjects[s].meshes[j].vertices;
  double obj = 0;
  for (int i = 0; i < corpus.n_vertices; ++i) {
    const auto& sup = st.support[i];
    const Vec3 tpl = st.templates[s].segment<3>(3 * i);
    Vec3 p = Vec3::Zero();
    for (std::size_t k = 0; k < sup.size(); ++k)
      p += st.weights[i][k] * (g[sup[k]] * tpl);
    const Vec3 r = p - Vec3(obs.segment<3>(3 * i));
    obj += r.squaredNorm();
    if (!grad) continue;
    for (std::size_t k = 0; k < sup.size(); ++k) {
      const double w = st.weights[i][k];
      if (w == 0) continue;
      const int b = sup[k];
      const Vec3 y = g[b] * tpl;
      for (int d : anc[b]) {
        const Vec3 dp = fk.dof_translational[d]
                            ? fk.dof_axis[d]
                            : Vec3(fk.dof_axis[d].cross(y - fk.dof_origin[d]));
        (*grad)[d] += 2.0 * w * dp.dot(r);
      }
    }
  }
  return obj;
}

}  // namespace

void fit_poses(LearningState* state, const RegisteredCorpus& corpus,
               const LearningOptions& opts) {
  LearningState& st = *state;
  const int dim = st.skeleton.dof_count();
  const auto anc = body::ancestor_dofs(st.skeleton);
  for (std::size_t s = 0; s < corpus.subjects.size(); ++s) {
    for (std::size_t j = 0; j < corpus.subjects[s].meshes.size(); ++j) {
      if (!st.usable[s][j]) continue;
      VecX q = st.poses[s][j];
      VecX grad(dim);
      double obj = pose_objective(st, corpus, s, j, q, anc, &grad);
      MatX hinv = MatX::Identity(dim, dim);

      for (int it = 0; it < opts.pose_iterations; ++it) {
        if (grad.lpNorm<Eigen::Infinity>() < 1e-11 * std::max(1.0, obj)) break;
        VecX dir = -(hinv * grad);
        if (dir.dot(grad) >= 0) {  // reset on a non-descent direction
          hinv.setIdentity();
          dir = -grad;
        }
        double alpha = 1.0;
        bool accepted = false;
        for (int halving = 0; halving < 20; ++halving) {
          const VecX q_try = q + alpha * dir;
          const double obj_try =
              pose_objective(st, corpus, s, j, q_try, anc, nullptr);
          if (obj_try <= obj + 1e-4 * alpha * grad.dot(dir)) {
            VecX grad_new(dim);
            const double obj_new =
                pose_objective(st, corpus, s, j, q_try, anc, &grad_new);
            const VecX step = alpha * dir;
            const VecX yv = grad_new - grad;
            const double sy = step.dot(yv);
            if (sy > 1e-12) {
              const MatX outer = step * yv.transpose();
              hinv = hinv - (outer * hinv + hinv * outer.transpose()) / sy +
                     (1.0 + yv.dot(hinv * yv) / sy) *
                         (step * step.transpose()) / sy;
            }
            q = q_try;
            obj = obj_new;
            grad = grad_new;
            accepted = true;
            break;
          }
          alpha /= 2;
        }
        if (!accepted) break;  // 20 halvings without a decrease
      }
      st.poses[s][j] = q;
    }
  }
  st.objective = global_objective(st, corpus);
  st.objective_history.push_back(st.objective);
}

void alternate(LearningState* state, const RegisteredCorpus& corpus,
               const LearningOptions& opts) {
  double prev = state->objective;
  for (int it = 0; it < opts.iterations; ++it) {
    fit_blend_weights(state, corpus, opts);
    fit_templates(state, corpus, opts);
    fit_poses(state, corpus, opts);
    if (prev > 0 &&
        (prev - state->objective) < opts.rel_tolerance * std::max(prev, 1e-12))
      break;
    prev = state->objective;
  }
}

LearningState alternate(const RegisteredCorpus& corpus,
                        const body::Skeleton& skel,
                        const LearningOptions& opts) {
  LearningState st = init_state(corpus, skel, opts);
  alternate(&st, corpus, opts);
  return st;
}

AnthroFit learn_anthro_basis(const std::vector<VecX>& templates,
                             const std::vector<VecX>& lengths, double ridge) {
  if (templates.empty() || templates.size() != lengths.size())
    throw InvalidInput("learn_anthro_basis: bad inputs");
  const int ns = static_cast<int>(templates.size());
  const int rows = static_cast<int>(templates[0].size());
  const int nb = static_cast<int>(lengths[0].size());

  AnthroFit fit;
  fit.mean_lengths = VecX::Zero(nb);
  fit.base_point = VecX::Zero(rows);
  for (int s = 0; s < ns; ++s) {
    fit.mean_lengths += lengths[s];
    fit.base_point += templates[s];
  }
  fit.mean_lengths /= ns;
  fit.base_point /= ns;

  MatX lc(nb, ns), pc(rows, ns);
  for (int s = 0; s < ns; ++s) {
    lc.col(s) = lengths[s] - fit.mean_lengths;
    pc.col(s) = templates[s] - fit.base_point;
  }
  fit.underdetermined = ns < nb + 1;
  MatX normal = lc * lc.transpose();
  normal.diagonal().array() += fit.underdetermined ? std::max(ridge, 1e-10)
                                                   : ridge + 1e-14;
  fit.basis = pc * lc.transpose() * normal.inverse();
  return fit;
}

MatX learn_shape_basis(const std::vector<VecX>& templates,
                       const AnthroFit& fit, int rank) {
  const int ns = static_cast<int>(templates.size());
  const int rows = static_cast<int>(fit.base_point.size());
  MatX residuals(rows, ns);
  for (int s = 0; s < ns; ++s)
    residuals.col(s) = templates[s] - fit.base_point;
  // Remove everything the anthro subspace explains. Note: the residual of the
  // regression is already orthogonal to lc rows, not to col(basis), so project
  // explicitly.
  Eigen::ColPivHouseholderQR<MatX> qr(fit.basis);
  const int rank_l = static_cast<int>(qr.rank());
  if (rank_l > 0) {
    const MatX q =
        MatX(qr.householderQ() * MatX::Identity(rows, rank_l));
    residuals -= q * (q.transpose() * residuals);
  }

  Eigen::JacobiSVD<MatX> svd(residuals, Eigen::ComputeThinU);
  const double scale = svd.singularValues().size()
                           ? svd.singularValues()[0]
                           : 0.0;
  int keep = 0;
  for (int k = 0; k < svd.singularValues().size() && keep < rank; ++k)
    if (svd.singularValues()[k] > 1e-9 * std::max(scale, 1.0)) ++keep;

  MatX basis = MatX::Zero(rows, rank);
  if (keep > 0) basis.leftCols(keep) = svd.matrixU().leftCols(keep);
  return basis;
}

body::BodyModel assemble_model(const LearningState& st,
                               const RegisteredCorpus& corpus,
                               const LearningOptions& opts) {
  body::BodyModel m;
  m.skeleton = st.skeleton;
  m.n_vertices = corpus.n_vertices;
  m.faces = corpus.faces ? corpus.faces
                         : std::make_shared<const std::vector<Triangle>>();

  m.w_offsets.push_back(0);
  for (int i = 0; i < corpus.n_vertices; ++i) {
    double sum = 0;
    for (std::size_t k = 0; k < st.support[i].size(); ++k) {
      const double w = st.weights[i][k];
      if (w <= 1e-12) continue;
      m.w_bones.push_back(static_cast<std::uint32_t>(st.support[i][k]));
      m.w_vals.push_back(w);
      sum += w;
    }
    if (m.w_offsets.back() == m.w_bones.size()) {  // fully clamped row
      m.w_bones.push_back(0);
      m.w_vals.push_back(1.0);
      sum = 1.0;
    }
    for (std::size_t k = m.w_offsets.back(); k < m.w_vals.size(); ++k)
      m.w_vals[k] /= sum;
    m.w_offsets.push_back(static_cast<std::uint32_t>(m.w_bones.size()));
  }

  const AnthroFit fit =
      learn_anthro_basis(st.templates, st.subject_lengths, opts.ridge);
  m.anthro_basis = fit.basis;
  m.mean_lengths = fit.mean_lengths;
  m.base_point = fit.base_point;
  m.shape_basis = learn_shape_basis(st.templates, fit, opts.shape_rank);
  m.template_pose = VecX::Zero(st.skeleton.dof_count());
  for (int b = 0; b < m.skeleton.bone_count(); ++b)
    m.skeleton.bones[b].mean_length = fit.mean_lengths[b];
  m.validate();
  return m;
}

double mean_vertex_error(const LearningState& st,
                         const RegisteredCorpus& corpus) {
  double sum = 0;
  std::size_t n = 0;
  for (std::size_t s = 0; s < corpus.subjects.size(); ++s)
    for (std::size_t j = 0; j < corpus.subjects[s].meshes.size(); ++j) {
      if (!st.usable[s][j]) continue;
      const auto g =
          blend_isos(st.skeleton, st.subject_lengths[s], st.poses[s][j]);
      const VecX& obs = corpus.subjects[s].meshes[j].vertices;
      for (int i = 0; i < corpus.n_vertices; ++i) {
        sum += (lmb_point(st, g, i, st.templates[s]) -
                Vec3(obs.segment<3>(3 * i)))
                   .norm();
        ++n;
      }
    }
  return n ? sum / n : 0.0;
}

}  // namespace physmocap::learning
