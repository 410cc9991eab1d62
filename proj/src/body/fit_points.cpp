#include "physmocap/body/fit_points.hpp"

#include <Eigen/Dense>

namespace physmocap::body {

namespace {

double residual_vec(const Skeleton& skel, const VecX& lengths, const VecX& q,
                    const std::vector<PointTarget>& targets, VecX* out) {
  const auto world = bone_transforms(skel, lengths, q);
  double sum = 0;
  for (std::size_t t = 0; t < targets.size(); ++t) {
    const Vec3 r = world[targets[t].bone] * targets[t].local - targets[t].world;
    if (out) out->segment<3>(3 * t) = r;
    sum += r.squaredNorm();
  }
  return sum;
}

}  // namespace

FitResult fit_point_targets(const Skeleton& skel, const VecX& lengths,
                            const VecX& q_init,
                            const std::vector<PointTarget>& targets,
                            const FitOptions& opts) {
  FitResult res;
  res.q = q_init;
  if (targets.empty()) {
    res.converged = true;
    return res;
  }
  std::vector<int> dofs = opts.dofs;
  if (dofs.empty())
    for (int j = 0; j < skel.dof_count(); ++j) dofs.push_back(j);

  const auto anc = ancestor_dofs(skel);
  VecX r(3 * targets.size());
  double cost = residual_vec(skel, lengths, res.q, targets, &r);
  double mu = opts.damping;

  for (res.iterations = 0; res.iterations < opts.max_iterations;
       ++res.iterations) {
    const auto fk = forward_kinematics(skel, lengths, res.q);
    MatX jac_full = MatX::Zero(3 * targets.size(), skel.dof_count());
    for (std::size_t t = 0; t < targets.size(); ++t) {
      auto block = jac_full.middleRows<3>(3 * t);
      accumulate_point_jacobian(skel, fk, anc, targets[t].bone,
                                fk.world[targets[t].bone] * targets[t].local,
                                1.0, block);
    }
    MatX jac(3 * targets.size(), dofs.size());
    for (std::size_t c = 0; c < dofs.size(); ++c)
      jac.col(c) = jac_full.col(dofs[c]);

    const MatX jtj = jac.transpose() * jac;
    const VecX jtr = jac.transpose() * r;
    bool stepped = false;
    for (int attempt = 0; attempt < 12; ++attempt) {
      MatX h = jtj;
      h.diagonal().array() += mu + 1e-12;
      VecX dq = h.ldlt().solve(-jtr);
      const double dq_max = dq.lpNorm<Eigen::Infinity>();
      if (dq_max > opts.step_limit) dq *= opts.step_limit / dq_max;
      VecX q_try = res.q;
      for (std::size_t c = 0; c < dofs.size(); ++c) q_try[dofs[c]] += dq[c];
      VecX r_try(r.size());
      const double cost_try =
          residual_vec(skel, lengths, q_try, targets, &r_try);
      if (cost_try < cost) {
        const double improvement = cost - cost_try;
        res.q = q_try;
        r = r_try;
        cost = cost_try;
        mu = std::max(mu * 0.3, 1e-12);
        stepped = true;
        if (improvement < opts.tolerance * std::max(1.0, cost)) {
          res.residual = cost;
          res.converged = true;
          return res;
        }
        break;
      }
      mu = mu == 0 ? 1e-8 : mu * 10;
    }
    if (!stepped) break;  // no descent direction left at this damping scale
  }
  res.residual = cost;
  res.converged = cost < opts.tolerance || res.iterations < opts.max_iterations;
  return res;
}

}  // namespace physmocap::body
