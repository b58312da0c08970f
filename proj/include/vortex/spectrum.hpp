#pragma once

#include <string>
#include <vector>

#include "vortex/constants.hpp"
#include "vortex/eigen.hpp"

namespace vortex {

struct QuantumNumbers {
  int n = 1;  ///< axial
  int m = 1;  ///< cross-section eigen index (1-based)
  int k = 0;  ///< oscillator occupation
};

struct CirculationLevel {
  QuantumNumbers qn;
  double lambda = 0.0;          ///< 1/length
  double gamma_exact = 0.0;
  double gamma_series = 0.0;
  double base = 0.0;            ///< hbar n / mu_v
  double form_factor = 0.0;     ///< (1/2)(L lambda / pi n)^2
  double fine_structure = 0.0;  ///< -4 hbar k / (mu0 v0 R0)
  double residual = 0.0;        ///< |gamma_exact - gamma_series|
  double reduced = 0.0;         ///< mu_v gamma_exact / hbar
  int multiplicity = 1;
  std::vector<std::string> warnings;  ///< selection-rule violations

  std::string sector() const;  ///< "H(n,m,k)"
};

/// Positive root of the quantisation condition, evaluated from the
/// dimensional expression (hbar / (pi alpha rho0 R^2)) sqrt((pi n/L)^2 +
/// eps^2 lambda^2) / sqrt(1 + 8 eps^2 beta k).
double gamma_exact(const QuantumNumbers& qn, double lambda, const PhysicalConstants& c, double R);

/// Fills every field. Violated selection rules are recorded in `warnings`.
/// For n = 0 the series fields are NaN (the expansion is in 1/n).
CirculationLevel gamma_series(const QuantumNumbers& qn, double lambda, const PhysicalConstants& c, double R);

/// True when lambda <= pi n / L and 8 beta k <= 1, each to relative 1e-12.
bool admissible(const QuantumNumbers& qn, double lambda, const PhysicalConstants& c);

/// Largest k allowed by 8 beta k <= 1.
int max_k(const PhysicalConstants& c);

struct EnumerateOptions {
  int n_max = 16;
  int k_max = -1;          ///< -1: the selection-rule limit; larger values are clamped to it
  bool include_n0 = false; ///< add the lambda-only n = 0 levels (outside the admissible set)
};

/// Admissible levels sorted by (gamma_exact, n, m, k). Eigenvalues in `eig`
/// are in 1/R0^2 and are rescaled by R0 here. Degenerate clusters produce one
/// level, with m the first index of the cluster and its multiplicity.
/// Throws IncompleteSpectrumError when eig stops before lambda > pi n_max / L.
std::vector<CirculationLevel> enumerate_levels(const PhysicalConstants& c, double R, const EigenResult& eig,
                                               const EnumerateOptions& opt);

struct HistogramBin {
  double center = 0.0;
  long count = 0;
};

struct PeakHistogram {
  std::vector<HistogramBin> bins;  ///< occupied bins only, ascending
  std::vector<double> offsets;     ///< per level: reduced - nearest integer
};

/// Bins mu_v Gamma / hbar with bin centres on multiples of `bin_width`
/// (integers are centres when 1/bin_width is an integer). Counts include
/// multiplicity.
PeakHistogram peak_histogram(const std::vector<CirculationLevel>& levels, double bin_width);

struct PeakCluster {
  int integer = 0;
  int levels = 0;             ///< admissible (m, k) combinations, one per degenerate cluster
  int distinct = 0;           ///< distinct reduced values (relative 1e-12)
  double max_rel_offset = 0;  ///< max |reduced / integer - 1|
  double bound = 0;           ///< eps^2 max over members of max(form_factor, 4 beta k)
};

/// Levels grouped by their axial number n.
std::vector<PeakCluster> peak_clusters(const std::vector<CirculationLevel>& levels, const PhysicalConstants& c);

}  // namespace vortex
