#include <cmath>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "physmocap/dynamics/contact_solve.hpp"
#include "physmocap/dynamics/dynamics.hpp"

using namespace physmocap;
using dynamics::DynamicsContext;

namespace {

body::Skeleton root_only() {
  body::Skeleton s;
  body::Bone root;
  root.name = "root";
  root.parent = -1;
  root.mean_length = 1.0;
  s.bones.push_back(root);
  s.finalize();
  return s;
}

std::vector<body::BoneInertia> point_mass(double m) {
  body::BoneInertia bi;
  bi.mass = m;
  bi.com = Vec3::Zero();
  bi.inertia = 1e-3 * Mat3::Identity();
  return {bi};
}

}  // namespace

TEST_CASE("discrete lagrangian of a free point mass") {
  const auto s = root_only();
  const double h = 1.0 / 30.0;
  DynamicsContext ctx(s, s.mean_lengths(), point_mass(1.0), h);

  VecX q = VecX::Zero(6);
  q[2] = 2.0;  // 2 m up
  // Static: kinetic term zero, Ld = -h V.
  CHECK(dynamics::discrete_lagrangian(ctx, q, q) ==
        doctest::Approx(-h * 1.0 * kGravity * 2.0).epsilon(1e-12));

  DynamicsContext free_ctx(s, s.mean_lengths(), point_mass(1.0), h,
                           Vec3::Zero());
  VecX qb = q;
  qb[0] += h * 1.0;  // 1 m/s along x
  CHECK(dynamics::discrete_lagrangian(free_ctx, q, qb) ==
        doctest::Approx(h * 0.5).epsilon(1e-12));
}

TEST_CASE("D1/D2 of the discrete lagrangian match central differences") {
  const auto s = body::default_skeleton();
  const auto inertias = testutil::random_inertias(s.bone_count(), 5);
  DynamicsContext ctx(s, s.mean_lengths(), inertias, 1.0 / 30.0);

  for (unsigned trial = 0; trial < 3; ++trial) {
    const VecX qa = testutil::random_vec(69, 40 + trial, 0.3);
    const VecX qb = qa + testutil::random_vec(69, 60 + trial, 0.02);
    const VecX d1 = dynamics::d1_discrete_lagrangian(ctx, qa, qb);
    const VecX d2 = dynamics::d2_discrete_lagrangian(ctx, qa, qb);
    const double h = 1e-6;
    for (int j = 0; j < 69; ++j) {
      VecX p = qa, m = qa;
      p[j] += h;
      m[j] -= h;
      const double fd1 = (dynamics::discrete_lagrangian(ctx, p, qb) -
                          dynamics::discrete_lagrangian(ctx, m, qb)) /
                         (2 * h);
      CHECK(std::abs(d1[j] - fd1) / std::max(1.0, std::abs(fd1)) < 1e-4);
      p = qb;
      m = qb;
      p[j] += h;
      m[j] -= h;
      const double fd2 = (dynamics::discrete_lagrangian(ctx, qa, p) -
                          dynamics::discrete_lagrangian(ctx, qa, m)) /
                         (2 * h);
      CHECK(std::abs(d2[j] - fd2) / std::max(1.0, std::abs(fd2)) < 1e-4);
    }
  }
}

TEST_CASE("free body in uniform translation has zero residual") {
  const auto s = root_only();
  for (double h : {1.0 / 30.0, 1.0 / 60.0}) {
    DynamicsContext ctx(s, s.mean_lengths(), point_mass(2.2), h, Vec3::Zero());
    const Vec3 v(0.7, -0.4, 0.2);
    VecX q0 = VecX::Zero(6), q1 = VecX::Zero(6), q2 = VecX::Zero(6);
    q0.head<3>() = Vec3(0.1, 0.2, 0.3);
    q1.head<3>() = q0.head<3>() + h * v;
    q2.head<3>() = q0.head<3>() + 2 * h * v;
    const auto e = dynamics::euler_lagrange_residual(ctx, q0, q1, q2);
    CHECK(e.f.norm() < 1e-9);
  }
}

TEST_CASE("discrete free fall is force-free; raw residual is the gravity impulse") {
  const auto s = root_only();
  const double h = 1.0 / 30.0, m = 2.5;
  DynamicsContext grav(s, s.mean_lengths(), point_mass(m), h);
  DynamicsContext nograv(s, s.mean_lengths(), point_mass(m), h, Vec3::Zero());

  const auto fall = [&](int k) {
    VecX q = VecX::Zero(6);
    q[2] = 5.0 - 0.5 * kGravity * (k * h) * (k * h);
    return q;
  };
  const auto e = dynamics::euler_lagrange_residual(grav, fall(3), fall(4), fall(5));
  CHECK(e.f.norm() < 1e-9);

  const auto raw =
      dynamics::euler_lagrange_residual(nograv, fall(3), fall(4), fall(5));
  CHECK(raw.f[2] == doctest::Approx(m * kGravity * h).epsilon(1e-9));
  CHECK(raw.f.head<2>().norm() < 1e-12);
}

TEST_CASE("two-link pendulum matches the symbolic lagrangian") {
  const double l1 = 0.8, c1 = 0.5, c2 = 0.35, m1 = 1.4, m2 = 0.9;
  const auto s = testutil::pendulum_two_link(l1);
  std::vector<body::BoneInertia> in(3);
  in[0].mass = 1.0;
  in[0].inertia = Mat3::Zero();
  in[1].mass = m1;
  in[1].com = Vec3(0, 0, -c1);
  in[1].inertia = Mat3::Zero();
  in[2].mass = m2;
  in[2].com = Vec3(0, 0, -c2);
  in[2].inertia = Mat3::Zero();
  DynamicsContext ctx(s, s.mean_lengths(), in, 1.0 / 30.0);

  std::mt19937 rng(9);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int trial = 0; trial < 10; ++trial) {
    const double q1 = u(rng), q2 = u(rng), w1 = u(rng), w2 = u(rng);
    VecX q = VecX::Zero(8), qd = VecX::Zero(8);
    q[6] = q1;
    q[7] = q2;
    qd[6] = w1;
    qd[7] = w2;

    const double t_sym =
        0.5 * m1 * c1 * c1 * w1 * w1 +
        0.5 * m2 *
            (l1 * l1 * w1 * w1 + c2 * c2 * (w1 + w2) * (w1 + w2) +
             2 * l1 * c2 * w1 * (w1 + w2) * std::cos(q2));
    const double v_sym = -m1 * kGravity * c1 * std::cos(q1) -
                         m2 * kGravity * (l1 * std::cos(q1) + c2 * std::cos(q1 + q2));
    CHECK(ctx.lagrangian(q, qd) ==
          doctest::Approx(t_sym - v_sym).epsilon(1e-10));

    // Midpoint rule: Ld(qa, qb) evaluates L at the average pose and the
    // divided difference.
    const double h = ctx.timestep();
    VecX qb = q + h * qd;
    const double ld = dynamics::discrete_lagrangian(ctx, q, qb);
    VecX mid = (q + qb) / 2;
    CHECK(ld == doctest::Approx(h * ctx.lagrangian(mid, qd)).epsilon(1e-10));
  }
}

TEST_CASE("variational integrator keeps the pendulum residual at zero") {
  const auto s = testutil::pendulum_two_link(0.7);
  std::vector<body::BoneInertia> in(3);
  in[0].mass = 5.0;
  in[0].inertia = 1e-2 * Mat3::Identity();
  in[1].mass = 1.2;
  in[1].com = Vec3(0, 0, -0.35);
  in[1].inertia = 1e-3 * Mat3::Identity();
  in[2].mass = 0.8;
  in[2].com = Vec3(0, 0, -0.3);
  in[2].inertia = 1e-3 * Mat3::Identity();
  const double h = 1.0 / 60.0;
  DynamicsContext ctx(s, s.mean_lengths(), in, h);

  // Root pinned: integrate the two link angles by solving the discrete
  // Euler-Lagrange equations for the next pose (Newton, FD jacobian).
  VecX q0 = VecX::Zero(8), q1 = VecX::Zero(8);
  q0[6] = 0.9;
  q1[6] = 0.9 + 0.4 * h;
  q1[7] = -0.2 * h;

  double max_resid = 0;
  for (int step = 0; step < 100; ++step) {
    VecX q2 = q1 + (q1 - q0);
    for (int it = 0; it < 50; ++it) {
      const VecX e = dynamics::euler_lagrange_residual(ctx, q0, q1, q2).f;
      const Eigen::Vector2d r(e[6], e[7]);
      if (r.norm() < 1e-12) break;
      Eigen::Matrix2d jac;
      const double fd = 1e-7;
      for (int c = 0; c < 2; ++c) {
        VecX qp = q2, qm = q2;
        qp[6 + c] += fd;
        qm[6 + c] -= fd;
        const VecX ep = dynamics::euler_lagrange_residual(ctx, q0, q1, qp).f;
        const VecX em = dynamics::euler_lagrange_residual(ctx, q0, q1, qm).f;
        jac(0, c) = (ep[6] - em[6]) / (2 * fd);
        jac(1, c) = (ep[7] - em[7]) / (2 * fd);
      }
      const Eigen::Vector2d dq = jac.fullPivLu().solve(-r);
      q2[6] += dq[0];
      q2[7] += dq[1];
    }
    const VecX e = dynamics::euler_lagrange_residual(ctx, q0, q1, q2).f;
    max_resid = std::max(max_resid, std::hypot(e[6], e[7]));
    q0 = q1;
    q1 = q2;
  }
  CHECK(max_resid < 1e-8);
  CHECK(std::isfinite(q1[6]));
  CHECK(std::abs(q1[6]) < 3.0);  // bounded oscillation, no blow-up
}

TEST_CASE("constraint jacobian: empty, root contact, finite differences") {
  const auto s = body::default_skeleton();
  const VecX l = s.mean_lengths();

  dynamics::ContactConstraintSet none;
  CHECK(dynamics::constraint_jacobian(s, l, none, VecX::Zero(69)).rows() == 0);

  dynamics::ContactConstraintSet root_contact;
  root_contact.active.push_back({0, {0, Vec3::Zero()}, Vec3::Zero()});
  const VecX q = testutil::random_vec(69, 77, 0.2);
  const MatX j0 = dynamics::constraint_jacobian(s, l, root_contact, q);
  CHECK((j0.block<3, 3>(0, 0) - Mat3::Identity()).norm() < 1e-12);
  CHECK(j0.block<3, 3>(0, 3).norm() < 1e-12);  // point at the root origin

  dynamics::ContactConstraintSet distal;
  const int foot = s.bone_index("foot_l");
  distal.active.push_back({0, {foot, Vec3(0.01, -0.05, -0.08)}, Vec3::Zero()});
  const MatX jac = dynamics::constraint_jacobian(s, l, distal, q);
  const double h = 1e-6;
  for (int c = 0; c < 69; ++c) {
    VecX qp = q, qm = q;
    qp[c] += h;
    qm[c] -= h;
    const VecX gp = dynamics::constraint_values(s, l, distal, qp);
    const VecX gm = dynamics::constraint_values(s, l, distal, qm);
    const VecX fd = (gp - gm) / (2 * h);
    CHECK((jac.col(c) - fd).norm() / std::max(1.0, fd.norm()) < 1e-4);
  }
}

TEST_CASE("contact multipliers minimize root forces") {
  const auto s = body::default_skeleton();
  const VecX l = s.mean_lengths();
  const VecX q = testutil::random_vec(69, 123, 0.25);
  const VecX e = testutil::random_vec(69, 321, 2.0);

  SUBCASE("no contacts leaves forces untouched") {
    const auto sol = dynamics::solve_contact_multipliers(e, MatX(0, 69));
    CHECK(sol.lambda.size() == 0);
    CHECK((dynamics::net_forces(e, MatX(0, 69), sol.lambda).f - e).norm() == 0);
  }

  SUBCASE("contact at the root origin cancels root translational force") {
    dynamics::ContactConstraintSet set;
    set.active.push_back({0, {0, Vec3::Zero()}, Vec3::Zero()});
    const MatX jac = dynamics::constraint_jacobian(s, l, set, q);
    const auto sol = dynamics::solve_contact_multipliers(e, jac);
    const auto f = dynamics::net_forces(e, jac, sol.lambda);
    CHECK(f.f.head<3>().norm() < 1e-6 * e.norm());
  }

  SUBCASE("objective never worse than no contact force, matches CG oracle") {
    std::mt19937 rng(55);
    for (int trial = 0; trial < 12; ++trial) {
      const int contacts = 1 + static_cast<int>(rng() % 3);
      MatX jac(3 * contacts, 69);
      for (int r = 0; r < jac.rows(); ++r)
        jac.row(r) = testutil::random_vec(69, rng(), 1.0).transpose();
      const VecX ee = testutil::random_vec(69, rng(), 3.0);
      const auto sol = dynamics::solve_contact_multipliers(ee, jac);
      const double at_star = dynamics::root_force_objective(ee, jac, sol.lambda);
      const double at_zero =
          dynamics::root_force_objective(ee, jac, VecX::Zero(jac.rows()));
      CHECK(at_star <= at_zero + 1e-9);

      // Independent minimizer: conjugate gradient on the quadratic.
      const MatX a = jac.transpose();  // 69 x c
      VecX w = VecX::Zero(69);
      w.head<6>().setOnes();
      const auto hv = [&](const VecX& p) {
        return VecX(2.0 * (a.transpose() * w.asDiagonal() * (a * p)));
      };
      const VecX b = -2.0 * (a.transpose() * (w.asDiagonal() * ee));
      const VecX lam_cg = testutil::cg_minimize(hv, b, 6 * contacts + 20);
      const double at_cg = dynamics::root_force_objective(ee, jac, lam_cg);
      CHECK(std::abs(at_star - at_cg) < 1e-6);
    }
  }

  SUBCASE("duplicated contact is degenerate but gives the same forces") {
    dynamics::ContactConstraintSet one;
    const int foot = s.bone_index("foot_r");
    one.active.push_back({0, {foot, Vec3(0, 0.02, -0.07)}, Vec3::Zero()});
    const MatX j1 = dynamics::constraint_jacobian(s, l, one, q);
    MatX j2(6, 69);
    j2 << j1, j1;
    const auto s1 = dynamics::solve_contact_multipliers(e, j1);
    const auto s2 = dynamics::solve_contact_multipliers(e, j2);
    CHECK(!s1.degenerate);
    CHECK(s2.degenerate);
    CHECK(s2.lambda.allFinite());
    const double o1 = dynamics::root_force_objective(e, j1, s1.lambda);
    const double o2 = dynamics::root_force_objective(e, j2, s2.lambda);
    CHECK(std::abs(o1 - o2) < 1e-6);
  }

  SUBCASE("row permutation and anchor translation do not change the answer") {
    dynamics::ContactConstraintSet set;
    set.active.push_back({0, {s.bone_index("toe_l"), Vec3(0, 0.03, 0)},
                          Vec3(0.1, 0.2, 0.0)});
    set.active.push_back({1, {s.bone_index("foot_r"), Vec3(0, -0.04, -0.06)},
                          Vec3(-0.1, 0.4, 0.0)});
    const MatX jac = dynamics::constraint_jacobian(s, l, set, q);

    dynamics::ContactConstraintSet shifted = set;
    for (auto& a : shifted.active) a.anchor += Vec3(10, -3, 7);
    const MatX jac_shifted = dynamics::constraint_jacobian(s, l, shifted, q);
    CHECK((jac - jac_shifted).norm() == 0);  // environment-free

    MatX perm(6, 69);
    perm << jac.middleRows<3>(3), jac.middleRows<3>(0);
    const auto sa = dynamics::solve_contact_multipliers(e, jac);
    const auto sp = dynamics::solve_contact_multipliers(e, perm);
    const VecX fa = dynamics::net_forces(e, jac, sa.lambda).f;
    const VecX fp = dynamics::net_forces(e, perm, sp.lambda).f;
    CHECK((fa - fp).norm() < 1e-8);
  }
}
