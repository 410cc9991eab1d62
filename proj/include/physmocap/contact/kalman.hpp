#pragma once

#include "physmocap/common.hpp"

namespace physmocap::contact {

// Scalar constant-state Kalman filter.
struct Kalman1D {
  double x = 0;
  double p = 1;
  bool initialized = false;

  double step(double z, double q, double r) {
    if (!initialized) {
      x = z;
      p = r > 0 ? r : 1.0;
      initialized = true;
      return x;
    }
    p += q;
    const double k = p / (p + r);
    x += k * (z - x);
    p *= 1.0 - k;
    return x;
  }
};

// Per-DOF denoising of the generalized force signal. Measurement noise can be
// fixed up front or estimated from the variance of the first `warmup` frames,
// during which the input passes through unfiltered.
class ForceFilter {
 public:
  ForceFilter(int dims, double process_noise, double measurement_noise);
  ForceFilter(int dims, double process_noise = 1e-2, int warmup = 30);

  VecX step(const VecX& f);

  int dims() const { return static_cast<int>(filters_.size()); }
  double process_noise() const { return q_; }
  // Per-DOF measurement noise; NaN entries while still warming up.
  const VecX& measurement_noise() const { return r_; }
  bool warmed_up() const { return seen_ >= warmup_; }
  void reset();

 private:
  std::vector<Kalman1D> filters_;
  double q_ = 1e-2;
  VecX r_;
  int warmup_ = 0;  // 0 = fixed R
  int seen_ = 0;
  VecX sum_, sum_sq_;
};

}  // namespace physmocap::contact
