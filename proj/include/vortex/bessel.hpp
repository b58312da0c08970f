#pragma once

#include <vector>

namespace vortex {

/// Positive zeros of J_nu in ascending order, up to and including `limit`.
std::vector<double> bessel_j_zeros_below(int nu, double limit);

/// First `count` positive zeros of J_nu.
std::vector<double> bessel_j_zeros(int nu, int count);

}  // namespace vortex
