#pragma once

// Data-parallel inner loops. Every kernel has a scalar reference in
// `kernels::scalar`; vector variants live in `kernels::avx2` and
// `kernels::neon` and are picked once at runtime. The free functions in
// `kernels` forward to the active variant.
//
// Bit-exact agreement with the scalar path holds for element-wise kernels
// (axpy, cross, stencil5, sqrt_ratio). Reductions (dot, pairwise_cross_sum)
// agree to rounding because the lane-wise summation order differs.

#include <cstddef>
#include <span>

#include "vortex/types.hpp"

namespace vortex::kernels {

enum class Isa { scalar, avx2, neon };

const char* isa_name(Isa isa);
bool isa_supported(Isa isa);

/// Best supported ISA unless overridden by `set_isa` or the VORTEX_KERNELS
/// environment variable (scalar|avx2|neon).
Isa active_isa();

/// Throws std::invalid_argument for an ISA the host cannot run.
void set_isa(Isa isa);

/// Padded 5-point operator on an (nx+2) x (ny+2) row-major box.
/// y = weight * (diag*x - x_w - x_e - x_s - x_n) * inv_h2 on rows/cols 1..n;
/// weight is 1 on unknowns and 0 elsewhere, the padding ring of y is untouched.
struct Stencil5 {
  int nx = 0;
  int ny = 0;
  double inv_h2 = 1.0;
  std::span<const double> diag;
  std::span<const double> weight;

  int stride() const { return nx + 2; }
  std::size_t padded_size() const { return static_cast<std::size_t>(nx + 2) * static_cast<std::size_t>(ny + 2); }
};

/// Structure-of-arrays view of n 3-vectors.
struct Soa3View {
  std::span<const double> x, y, z;
};
struct Soa3Span {
  std::span<double> x, y, z;
};

#define VORTEX_KERNEL_DECLS                                                            \
  double dot(std::span<const double> a, std::span<const double> b);                   \
  void axpy(double alpha, std::span<const double> x, std::span<double> y);            \
  void cross(Soa3View a, Soa3View b, Soa3Span out);                                   \
  void stencil5(const Stencil5& op, std::span<const double> x, std::span<double> y);  \
  Vec3 pairwise_cross_sum(Soa3View j);                                                \
  void sqrt_ratio(std::span<const double> num, std::span<const double> den, std::span<double> out);

VORTEX_KERNEL_DECLS

// pairwise_cross_sum returns sum_i sum_{k>i} j_k x j_i.

namespace scalar {
VORTEX_KERNEL_DECLS
}
namespace avx2 {
VORTEX_KERNEL_DECLS
}
namespace neon {
VORTEX_KERNEL_DECLS
}

#undef VORTEX_KERNEL_DECLS

}  // namespace vortex::kernels
