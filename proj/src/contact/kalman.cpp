#include "physmocap/contact/kalman.hpp"

#include <cmath>

namespace physmocap::contact {

ForceFilter::ForceFilter(int dims, double process_noise,
                         double measurement_noise)
    : filters_(dims), q_(process_noise), r_(VecX::Constant(dims,
                                            measurement_noise)) {
  if (dims <= 0) throw InvalidInput("ForceFilter: dims must be positive");
  if (!(process_noise > 0) || !(measurement_noise >= 0))
    throw InvalidInput("ForceFilter: invalid noise parameters");
}

ForceFilter::ForceFilter(int dims, double process_noise, int warmup)
    : filters_(dims),
      q_(process_noise),
      r_(VecX::Constant(dims, std::nan(""))),
      warmup_(warmup),
      sum_(VecX::Zero(dims)),
      sum_sq_(VecX::Zero(dims)) {
  if (dims <= 0) throw InvalidInput("ForceFilter: dims must be positive");
  if (!(process_noise > 0) || warmup < 2)
    throw InvalidInput("ForceFilter: invalid parameters");
}

VecX ForceFilter::step(const VecX& f) {
  if (f.size() != dims()) throw InvalidInput("ForceFilter: dimension mismatch");
  if (warmup_ > 0 && seen_ < warmup_) {
    sum_ += f;
    sum_sq_ += f.cwiseProduct(f);
    ++seen_;
    if (seen_ == warmup_) {
      const VecX mean = sum_ / warmup_;
      r_ = (sum_sq_ / warmup_ - mean.cwiseProduct(mean))
               .cwiseMax(1e-8);  // variance floor
    }
    return f;  // pass-through until R is known
  }
  ++seen_;
  VecX out(f.size());
  for (int i = 0; i < f.size(); ++i)
    out[i] = filters_[i].step(f[i], q_, r_[i]);
  return out;
}

void ForceFilter::reset() {
  for (auto& k : filters_) k = Kalman1D();
  seen_ = 0;
  if (warmup_ > 0) {
    sum_.setZero();
    sum_sq_.setZero();
    r_.setConstant(std::nan(""));
  }
}

}  // namespace physmocap::contact
