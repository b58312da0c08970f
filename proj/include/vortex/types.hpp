#pragma once

#include <complex>
#include <numbers>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace vortex {

using Vec3 = Eigen::Vector3d;
using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace vortex
