#pragma once

#include <memory>
#include <span>
#include <vector>

#include "vortex/types.hpp"

namespace vortex {

/// Uniform periodic grid xi_i = 2 pi i / N with FFT-based analysis, synthesis
/// and spectral calculus. Coefficients follow f(xi_j) = sum_k c_k e^{i k xi_j},
/// stored in FFT order (index i <-> wavenumber `wavenumber(i)`).
///
/// Plans are created with FFTW_ESTIMATE so repeated runs are bit-identical.
/// Transforms on one grid may run concurrently.
class FourierGrid {
 public:
  explicit FourierGrid(int n);
  ~FourierGrid();
  FourierGrid(FourierGrid&&) noexcept;
  FourierGrid& operator=(FourierGrid&&) noexcept;
  FourierGrid(const FourierGrid&) = delete;
  FourierGrid& operator=(const FourierGrid&) = delete;

  int size() const { return n_; }
  double spacing() const;
  double node(int i) const;

  /// Signed wavenumber of FFT slot `index`; the Nyquist slot maps to +n/2.
  int wavenumber(int index) const;

  std::vector<Complex> analyze(std::span<const Complex> samples) const;
  std::vector<Complex> analyze(std::span<const double> samples) const;
  std::vector<Complex> synthesize(std::span<const Complex> coeffs) const;

  /// Spectral derivative of the given order. The Nyquist coefficient is dropped
  /// for odd orders.
  std::vector<double> derivative(std::span<const double> f, int order) const;
  std::vector<Complex> derivative(std::span<const Complex> f, int order) const;

  /// F(xi_i) = integral_0^{xi_i} f, exact for band-limited f including the
  /// linear growth of a nonzero mean.
  std::vector<double> integral_from_zero(std::span<const double> f) const;

  /// Zero coefficients with |k| > n/3 (two-thirds rule).
  void dealias(std::span<double> f) const;

  /// Trapezoidal integral over one period (spectrally exact).
  double period_integral(std::span<const double> f) const;

 private:
  struct Plans;
  int n_ = 0;
  std::unique_ptr<Plans> plans_;
};

}  // namespace vortex
