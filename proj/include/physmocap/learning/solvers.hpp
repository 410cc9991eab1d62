#pragma once

#include "physmocap/common.hpp"

namespace physmocap::learning {

// Lawson-Hanson non-negative least squares: min |Ax - b| s.t. x >= 0.
VecX nnls(const MatX& a, const VecX& b, double ridge = 0.0);

// min |Ax - b|^2 + ridge |x|^2 s.t. x >= 0, sum x = 1. Active-set on the
// equality-constrained KKT system; never returns a point worse than the
// feasible `init` (falls back to it when the iteration stalls).
VecX simplex_ls(const MatX& a, const VecX& b, double ridge, const VecX& init);

}  // namespace physmocap::learning
