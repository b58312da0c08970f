#pragma once

#include <string>
#include <utility>
#include <vector>

#include "vortex/domain.hpp"

namespace vortex {

enum class EigenMethod { analytic, grid };

/// Dirichlet eigenvalues of -Laplacian on the cross-section, ascending, in
/// units of 1/R0^2. Degenerate eigenvalues keep one entry per eigenfunction;
/// `multiplicity[i]` is the size of the cluster entry i belongs to.
struct EigenResult {
  std::vector<double> lambda_sq;
  std::vector<double> lambdas;
  std::vector<double> error_estimate;
  std::vector<int> multiplicity;
  std::vector<int> cluster;  ///< cluster id per entry, nondecreasing
  EigenMethod method = EigenMethod::analytic;

  // Grid runs only.
  double h = 0.0;
  std::vector<double> coarse;  ///< lambda^2 at h
  std::vector<double> fine;    ///< lambda^2 at h/2
  int iterations = 0;

  std::size_t size() const { return lambda_sq.size(); }

  /// (first index, size) of each cluster of equal eigenvalues.
  std::vector<std::pair<int, int>> clusters() const;
};

/// Disk (Bessel zeros) or rectangle (closed form). Throws ValidationError for
/// other shapes.
EigenResult eigen_analytic(const DomainSpec& d, int M);

/// Every analytic eigenvalue with lambda <= lambda_limit, plus the next
/// cluster above it so callers can tell the list is complete.
EigenResult eigen_analytic_covering(const DomainSpec& d, double lambda_limit);

struct GridSolve {
  std::vector<double> lambda_sq;
  int iterations = 0;
  int unknowns = 0;
};

/// Smallest M eigenvalues of the cut-cell 5-point operator at spacing h.
/// Throws ConvergenceError after the restart budget is exhausted.
GridSolve grid_eigenvalues(const DomainSpec& d, int M, double h);

/// Grid solves at h and h/2 combined by Richardson extrapolation,
/// error_estimate = |lambda^2(h) - lambda^2(h/2)| / 3. Requires at least 32
/// cells across the narrower side of the domain at h.
EigenResult eigen_grid(const DomainSpec& d, int M, double h);

/// h giving `cells` cells across the narrower side of the domain (for masks,
/// the mask spacing refined by the smallest integer factor that reaches it).
double default_grid_h(const DomainSpec& d, int cells = 128);

}  // namespace vortex
