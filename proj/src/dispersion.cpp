#include "vortex/dispersion.hpp"

#include <cmath>
#include <cstdlib>

namespace vortex {

double dispersion(int n) {
  if (n == 0) return 0.0;
  const double a = std::abs(static_cast<double>(n));
  const double w = a * std::sqrt(a * a - 1.0);
  return n > 0 ? w : -w;
}

double coupling_factor(int n) {
  const double nn = static_cast<double>(n);
  // for n > 0 the direct form cancels down to about -1 / (4 n^2)
  if (n > 0) return -0.5 / (dispersion(n) + nn * nn - 0.5);
  return 2.0 * (dispersion(n) - nn * nn + 0.5);
}

}  // namespace vortex
