#pragma once

namespace vortex {

/// Frequency of tangent mode n in the linear theory: n sqrt(n^2 - 1), odd in n,
/// zero for n = 0 and |n| = 1.
double dispersion(int n);

/// g_n = 2 (n sqrt(n^2 - 1) - n^2 + 1/2), the factor in conj(j_{-n}) = g_n j_n.
/// g_n g_{-n} = 1, g_0 = 1 and g_{+-1} = -1.
double coupling_factor(int n);

}  // namespace vortex
