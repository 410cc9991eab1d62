#include "physmocap/contact/classifier.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace physmocap::contact {

std::array<ContactPointSpec, kContactPoints> default_contact_points(
    const body::Skeleton& skel) {
  const auto need = [&](const std::string& name) {
    const int b = skel.bone_index(name);
    if (b < 0) throw InvalidInput("contact points: missing bone " + name);
    return b;
  };
  // Heel hangs below and behind the ankle; the toe pad sits under the toe
  // bone tip.
  const Vec3 toe_local(0, 0.05, -0.03);
  const Vec3 heel_local(0, -0.05, -0.08);
  return {ContactPointSpec{"left_toe", {need("toe_l"), toe_local}},
          ContactPointSpec{"right_toe", {need("toe_r"), toe_local}},
          ContactPointSpec{"left_heel", {need("foot_l"), heel_local}},
          ContactPointSpec{"right_heel", {need("foot_r"), heel_local}}};
}

Eigen::Matrix<double, kContactPoints, 1> ContactClassifier::predict(
    const VecX& f) const {
  if (f.size() != weights.cols())
    throw InvalidInput("predict_contact: feature dimension mismatch");
  Eigen::Matrix<double, kContactPoints, 1> p;
  for (int i = 0; i < kContactPoints; ++i) {
    const double logit = bias[i] + weights.row(i).dot(f);
    p[i] = 1.0 / (1.0 + std::exp(-logit));
  }
  return p;
}

namespace {

// Newton iterations on the penalized negative log-likelihood of one point.
void fit_point(const MatX& x, const VecX& y, double l2, double* bias,
               VecX* weights) {
  const int n = static_cast<int>(x.rows());
  const int d = static_cast<int>(x.cols());
  VecX theta = VecX::Zero(d + 1);  // [bias, weights]
  for (int it = 0; it < 100; ++it) {
    VecX grad = VecX::Zero(d + 1);
    MatX hess = MatX::Zero(d + 1, d + 1);
    for (int i = 0; i < n; ++i) {
      const double logit = theta[0] + x.row(i).dot(theta.tail(d));
      const double p = 1.0 / (1.0 + std::exp(-logit));
      const double err = p - y[i];
      grad[0] += err;
      grad.tail(d) += err * x.row(i).transpose();
      const double s = std::max(p * (1 - p), 1e-12);
      VecX xi(d + 1);
      xi[0] = 1.0;
      xi.tail(d) = x.row(i).transpose();
      hess.noalias() += s * xi * xi.transpose();
    }
    grad.tail(d) += l2 * theta.tail(d);
    hess.diagonal().tail(d).array() += l2;
    hess.diagonal().array() += 1e-10;
    const VecX step = hess.ldlt().solve(grad);
    theta -= step;
    if (step.lpNorm<Eigen::Infinity>() < 1e-10) break;
  }
  *bias = theta[0];
  *weights = theta.tail(d);
}

}  // namespace

ContactClassifier train_classifier(
    const MatX& forces,
    const Eigen::Matrix<double, Eigen::Dynamic, kContactPoints>& labels,
    double l2) {
  if (forces.rows() != labels.rows() || forces.rows() == 0)
    throw InvalidInput("train_classifier: bad sample shapes");
  ContactClassifier c;
  c.weights = MatX::Zero(kContactPoints, forces.cols());
  for (int pt = 0; pt < kContactPoints; ++pt) {
    const VecX y = labels.col(pt);
    const double pos = y.sum();
    if (pos == 0 || pos == static_cast<double>(y.size())) {
      // Constant-rate fallback, Laplace-smoothed.
      const double rate = (pos + 1.0) / (y.size() + 2.0);
      c.bias[pt] = std::log(rate / (1.0 - rate));
      c.single_class[pt] = true;
      continue;
    }
    VecX w;
    fit_point(forces, y, l2, &c.bias[pt], &w);
    c.weights.row(pt) = w.transpose();
  }
  return c;
}

}  // namespace physmocap::contact
