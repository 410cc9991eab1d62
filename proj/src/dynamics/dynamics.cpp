#include "physmocap/dynamics/dynamics.hpp"

#include <array>

#include "physmocap/dynamics/dual.hpp"

namespace physmocap::dynamics {

namespace {

template <typename S>
struct V3 {
  S x{}, y{}, z{};

  V3 operator+(const V3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  V3 operator-(const V3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  V3& operator+=(const V3& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  V3 cross(const V3& o) const {
    return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
  }
  S dot(const V3& o) const { return x * o.x + y * o.y + z * o.z; }
};

template <typename S>
V3<S> scale(const S& s, const V3<S>& v) {
  return {s * v.x, s * v.y, s * v.z};
}

// Row-major 3x3.
template <typename S>
struct M3 {
  std::array<S, 9> m{};

  static M3 identity() {
    M3 r;
    r.m = {S(1), S(0), S(0), S(0), S(1), S(0), S(0), S(0), S(1)};
    return r;
  }
  V3<S> operator*(const V3<S>& v) const {
    return {m[0] * v.x + m[1] * v.y + m[2] * v.z,
            m[3] * v.x + m[4] * v.y + m[5] * v.z,
            m[6] * v.x + m[7] * v.y + m[8] * v.z};
  }
  M3 operator*(const M3& o) const {
    M3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        r.m[3 * i + j] = m[3 * i] * o.m[j] + m[3 * i + 1] * o.m[3 + j] +
                         m[3 * i + 2] * o.m[6 + j];
    return r;
  }
  V3<S> col(int j) const { return {m[j], m[3 + j], m[6 + j]}; }
  // this * diag-free symmetric double matrix * this^T applied to v:
  // returns (R A R^T) v for a constant double 3x3 A.
  V3<S> sandwich(const Mat3& a, const V3<S>& v) const {
    // w = R^T v
    V3<S> w{m[0] * v.x + m[3] * v.y + m[6] * v.z,
            m[1] * v.x + m[4] * v.y + m[7] * v.z,
            m[2] * v.x + m[5] * v.y + m[8] * v.z};
    V3<S> aw{a(0, 0) * w.x + a(0, 1) * w.y + a(0, 2) * w.z,
             a(1, 0) * w.x + a(1, 1) * w.y + a(1, 2) * w.z,
             a(2, 0) * w.x + a(2, 1) * w.y + a(2, 2) * w.z};
    return (*this) * aw;
  }
};

template <typename S>
M3<S> axis_rotation(int axis, const S& angle) {
  using std::cos;
  using std::sin;
  const S c = cos(angle), s = sin(angle);
  M3<S> r = M3<S>::identity();
  switch (axis) {
    case 0:
      r.m = {S(1), S(0), S(0), S(0), c, -s, S(0), s, c};
      break;
    case 1:
      r.m = {c, S(0), s, S(0), S(1), S(0), -s, S(0), c};
      break;
    default:
      r.m = {c, -s, S(0), s, c, S(0), S(0), S(0), S(1)};
      break;
  }
  return r;
}

template <typename S>
V3<S> promote(const Vec3& v) {
  return {S(v.x()), S(v.y()), S(v.z())};
}

// T - V via a single forward velocity-propagation pass.
template <typename S>
S lagrangian_impl(const std::vector<DynamicsContext::BoneParams>& bones,
                  const Vec3& gravity, const S* q, const S* qd) {
  struct Frame {
    M3<S> rot;
    V3<S> pos, omega, vel;
  };
  std::vector<Frame> frames(bones.size());
  S kinetic{}, potential{};

  int cursor = 0;
  for (std::size_t b = 0; b < bones.size(); ++b) {
    const auto& bone = bones[b];
    Frame f;
    if (bone.parent < 0) {
      f.pos = {q[0], q[1], q[2]};
      f.vel = {qd[0], qd[1], qd[2]};
      f.rot = M3<S>::identity();
      f.omega = {S(0), S(0), S(0)};
      cursor = 3;
    } else {
      const Frame& p = frames[bone.parent];
      const V3<S> off_w = p.rot * promote<S>(bone.offset);
      f.pos = p.pos + off_w;
      f.vel = p.vel + p.omega.cross(off_w);
      f.rot = p.rot;
      f.omega = p.omega;
    }
    for (int axis : bone.axes) {
      const V3<S> axis_w = f.rot.col(axis);
      f.omega += scale(qd[cursor], axis_w);
      f.rot = f.rot * axis_rotation(axis, q[cursor]);
      ++cursor;
    }
    frames[b] = f;

    const V3<S> com_arm = f.rot * promote<S>(bone.com);
    const V3<S> com_w = f.pos + com_arm;
    const V3<S> vcom = f.vel + f.omega.cross(com_arm);
    kinetic += S(0.5 * bone.mass) * vcom.dot(vcom);
    kinetic += S(0.5) * f.omega.dot(f.rot.sandwich(bone.inertia, f.omega));
    potential -= S(bone.mass) * com_w.dot(promote<S>(gravity));
  }
  return kinetic - potential;
}

template <typename S>
S discrete_lagrangian_impl(const DynamicsContext& ctx,
                           const std::vector<DynamicsContext::BoneParams>& bones,
                           const S* qa, const S* qb) {
  const int n = ctx.dof_count();
  std::vector<S> mid(n), vel(n);
  const double h = ctx.timestep();
  for (int i = 0; i < n; ++i) {
    mid[i] = (qa[i] + qb[i]) / 2.0;
    vel[i] = (qb[i] - qa[i]) / h;
  }
  return S(h) * lagrangian_impl(bones, ctx.gravity(), mid.data(), vel.data());
}

}  // namespace

DynamicsContext::DynamicsContext(const body::Skeleton& skel,
                                 const VecX& lengths,
                                 const std::vector<body::BoneInertia>& inertia,
                                 double timestep, const Vec3& gravity)
    : h_(timestep), gravity_(gravity) {
  if (!(timestep > 0)) throw InvalidInput("dynamics: timestep must be > 0");
  if (static_cast<int>(inertia.size()) != skel.bone_count())
    throw InvalidInput("dynamics: inertia list size mismatch");
  bones_.resize(skel.bone_count());
  for (int b = 0; b < skel.bone_count(); ++b) {
    BoneParams& p = bones_[b];
    const auto& bone = skel.bones[b];
    p.parent = bone.parent;
    p.offset = bone.parent >= 0
                   ? Vec3(bone.offset_per_length * lengths[bone.parent])
                   : Vec3::Zero();
    if (b == 0) {
      p.axes = {0, 1, 2};
    } else {
      for (int a = 0; a < 3; ++a)
        if (bone.dof[a]) p.axes.push_back(a);
    }
    if (!(inertia[b].mass > 0))
      throw InvalidInput("dynamics: non-positive bone mass");
    p.mass = inertia[b].mass;
    p.com = inertia[b].com;
    p.inertia = inertia[b].inertia;
  }
  dofs_ = skel.dof_count();
}

double DynamicsContext::total_mass() const {
  double m = 0;
  for (const auto& b : bones_) m += b.mass;
  return m;
}

double DynamicsContext::lagrangian(const VecX& q, const VecX& qdot) const {
  if (q.size() != dofs_ || qdot.size() != dofs_)
    throw InvalidInput("lagrangian: dimension mismatch");
  return lagrangian_impl<double>(bones_, gravity_, q.data(), qdot.data());
}

double discrete_lagrangian(const DynamicsContext& ctx, const VecX& qa,
                           const VecX& qb) {
  if (qa.size() != ctx.dof_count() || qb.size() != ctx.dof_count())
    throw InvalidInput("discrete_lagrangian: dimension mismatch");
  if (!qa.allFinite() || !qb.allFinite())
    throw InvalidInput("discrete_lagrangian: non-finite pose");
  return discrete_lagrangian_impl<double>(ctx, ctx.bones_, qa.data(),
                                          qb.data());
}

namespace {

VecX dual_gradient(const DynamicsContext& ctx, const VecX& qa, const VecX& qb,
                   bool wrt_first) {
  const int n = ctx.dof_count();
  std::vector<Dual> a(n), b(n);
  for (int i = 0; i < n; ++i) {
    a[i] = qa[i];
    b[i] = qb[i];
  }
  VecX grad(n);
  std::vector<Dual>& seed = wrt_first ? a : b;
  for (int i = 0; i < n; ++i) {
    seed[i].d = 1.0;
    grad[i] =
        discrete_lagrangian_impl<Dual>(ctx, ctx.bones(), a.data(), b.data()).d;
    seed[i].d = 0.0;
  }
  return grad;
}

}  // namespace

VecX d1_discrete_lagrangian(const DynamicsContext& ctx, const VecX& qa,
                            const VecX& qb) {
  return dual_gradient(ctx, qa, qb, true);
}

VecX d2_discrete_lagrangian(const DynamicsContext& ctx, const VecX& qa,
                            const VecX& qb) {
  return dual_gradient(ctx, qa, qb, false);
}

GeneralizedForces euler_lagrange_residual(const DynamicsContext& ctx,
                                          const VecX& q_prev, const VecX& q_cur,
                                          const VecX& q_next) {
  GeneralizedForces out;
  out.f = d1_discrete_lagrangian(ctx, q_cur, q_next) +
          d2_discrete_lagrangian(ctx, q_prev, q_cur);
  return out;
}

}  // namespace physmocap::dynamics
