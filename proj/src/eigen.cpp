#include "vortex/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include "vortex/bessel.hpp"
#include "vortex/errors.hpp"
#include "vortex/kernels.hpp"
#include "vortex/types.hpp"

namespace vortex {

namespace {

constexpr int kBlock = 4;
constexpr int kMaxCycles = 100;
constexpr double kResidualTol = 1e-10;
constexpr int kDenseLimit = 400;

struct Entry {
  double value;  // lambda^2
  int family;    // ties broken by construction order
};

void assign_clusters(EigenResult& r, double rel_tol) {
  const std::size_t n = r.lambda_sq.size();
  r.cluster.assign(n, 0);
  r.multiplicity.assign(n, 1);
  int id = 0;
  std::size_t start = 0;
  for (std::size_t i = 1; i <= n; ++i) {
    const bool split = i == n || std::abs(r.lambda_sq[i] - r.lambda_sq[start]) > rel_tol * r.lambda_sq[start];
    if (!split) continue;
    for (std::size_t k = start; k < i; ++k) r.cluster[k] = id, r.multiplicity[k] = static_cast<int>(i - start);
    ++id;
    start = i;
  }
}

// Every analytic eigenvalue with lambda <= limit.
std::vector<Entry> analytic_below(const DomainSpec& d, double limit) {
  std::vector<Entry> out;
  if (const auto* disk = std::get_if<Disk>(&d)) {
    const double zlim = limit * disk->radius;
    for (int nu = 0; nu < zlim; ++nu) {
      for (double z : bessel_j_zeros_below(nu, zlim)) {
        const double v = (z / disk->radius) * (z / disk->radius);
        out.push_back({v, nu});
        if (nu > 0) out.push_back({v, nu});
      }
    }
  } else if (const auto* rect = std::get_if<Rectangle>(&d)) {
    const double l2 = limit * limit;
    for (int i = 1; kPi * i / rect->a <= limit; ++i)
      for (int j = 1;; ++j) {
        const double v = kPi * kPi * (double(i) * i / (rect->a * rect->a) + double(j) * j / (rect->b * rect->b));
        if (v > l2) break;
        out.push_back({v, i * 100000 + j});
      }
  } else {
    throw ValidationError("domain.shape", std::string("no closed form for shape '") + shape_name(d) +
                                              "'; use the grid solver");
  }
  std::sort(out.begin(), out.end(), [](const Entry& a, const Entry& b) {
    return a.value != b.value ? a.value < b.value : a.family < b.family;
  });
  return out;
}

double first_lambda_guess(const DomainSpec& d) {
  if (const auto* disk = std::get_if<Disk>(&d)) return 2.5 / disk->radius;
  if (const auto* rect = std::get_if<Rectangle>(&d)) return kPi * std::hypot(1.0 / rect->a, 1.0 / rect->b) * 1.01;
  return 1.0;
}

EigenResult from_entries(const std::vector<Entry>& e, std::size_t count) {
  EigenResult r;
  r.method = EigenMethod::analytic;
  for (std::size_t i = 0; i < count && i < e.size(); ++i) {
    r.lambda_sq.push_back(e[i].value);
    r.lambdas.push_back(std::sqrt(e[i].value));
    r.error_estimate.push_back(0.0);
  }
  assign_clusters(r, 1e-12);
  return r;
}

class GridOperator {
 public:
  explicit GridOperator(const Raster& r) : r_(r), xp_(r.diag.size(), 0.0), yp_(r.diag.size(), 0.0) {
    for (std::size_t p = 0; p < r.index.size(); ++p)
      if (r.index[p] >= 0) slots_.push_back(p);
  }

  int size() const { return r_.unknowns; }

  void apply(const Eigen::VectorXd& x, Eigen::VectorXd& y) {
    for (std::size_t k = 0; k < slots_.size(); ++k) xp_[slots_[k]] = x[static_cast<Eigen::Index>(k)];
    kernels::Stencil5 op{r_.nx, r_.ny, 1.0 / (r_.h * r_.h), r_.diag, r_.weight};
    kernels::stencil5(op, xp_, yp_);
    y.resize(size());
    for (std::size_t k = 0; k < slots_.size(); ++k) y[static_cast<Eigen::Index>(k)] = yp_[slots_[k]];
  }

  Eigen::SparseMatrix<double> matrix() const {
    std::vector<Eigen::Triplet<double>> t;
    const double s = 1.0 / (r_.h * r_.h);
    const int stride = r_.stride();
    for (std::size_t p : slots_) {
      const int row = r_.index[p];
      t.emplace_back(row, row, s * r_.diag[p]);
      for (long off : {1L, -1L, static_cast<long>(stride), -static_cast<long>(stride)}) {
        const int col = r_.index[static_cast<std::size_t>(static_cast<long>(p) + off)];
        if (col >= 0) t.emplace_back(row, col, -s);
      }
    }
    Eigen::SparseMatrix<double> A(size(), size());
    A.setFromTriplets(t.begin(), t.end());
    return A;
  }

 private:
  const Raster& r_;
  std::vector<std::size_t> slots_;
  std::vector<double> xp_, yp_;
};

// Appends the columns of `block`, orthonormalised against basis[:, :cols],
// and returns the new column count. Classical Gram-Schmidt, applied twice.
int append_orthonormal(Eigen::MatrixXd& basis, int cols, const Eigen::MatrixXd& block) {
  for (Eigen::Index c = 0; c < block.cols() && cols < basis.cols(); ++c) {
    Eigen::VectorXd v = block.col(c);
    const double before = v.norm();
    if (before == 0.0) continue;
    for (int pass = 0; pass < 2; ++pass) {
      if (cols == 0) break;
      const Eigen::VectorXd coef = basis.leftCols(cols).transpose() * v;
      v -= basis.leftCols(cols) * coef;
    }
    const double after = v.norm();
    if (after < 1e-12 * before) continue;
    basis.col(cols++) = v / after;
  }
  return cols;
}

Eigen::MatrixXd random_block(int n, int p, std::mt19937_64& gen) {
  Eigen::MatrixXd X(n, p);
  for (int c = 0; c < p; ++c)
    for (int i = 0; i < n; ++i) X(i, c) = static_cast<double>(gen() >> 11) * 0x1.0p-53 - 0.5;
  return X;
}

GridSolve dense_solve(GridOperator& op, int M) {
  const Eigen::MatrixXd A = Eigen::MatrixXd(op.matrix());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A, Eigen::EigenvaluesOnly);
  GridSolve g;
  g.unknowns = op.size();
  for (int i = 0; i < M && i < op.size(); ++i) g.lambda_sq.push_back(es.eigenvalues()[i]);
  return g;
}

}  // namespace

std::vector<std::pair<int, int>> EigenResult::clusters() const {
  std::vector<std::pair<int, int>> out;
  for (std::size_t i = 0; i < cluster.size(); ++i) {
    if (i == 0 || cluster[i] != cluster[i - 1])
      out.push_back({static_cast<int>(i), 1});
    else
      ++out.back().second;
  }
  return out;
}

EigenResult eigen_analytic(const DomainSpec& d, int M) {
  validate_domain(d, 0.0);
  if (M <= 0) throw ValidationError("M", "must be positive");
  double limit = first_lambda_guess(d);
  std::vector<Entry> e;
  while (true) {
    e = analytic_below(d, limit);
    if (static_cast<int>(e.size()) > M) break;
    limit *= 1.5;
  }
  // Extend a cluster cut by the truncation so multiplicities are exact.
  EigenResult full = from_entries(e, e.size());
  EigenResult r = from_entries(e, static_cast<std::size_t>(M));
  for (int i = 0; i < M; ++i) r.multiplicity[i] = full.multiplicity[i];
  return r;
}

EigenResult eigen_analytic_covering(const DomainSpec& d, double lambda_limit) {
  validate_domain(d, 0.0);
  double limit = std::max(lambda_limit, first_lambda_guess(d));
  std::vector<Entry> e;
  while (true) {
    e = analytic_below(d, limit * 1.25 + 1.0);
    const auto above = std::find_if(e.begin(), e.end(), [&](const Entry& x) { return std::sqrt(x.value) > lambda_limit; });
    if (above != e.end()) {
      EigenResult full = from_entries(e, e.size());
      const auto idx = static_cast<std::size_t>(above - e.begin());
      std::size_t end = idx;
      while (end < e.size() && full.cluster[end] == full.cluster[idx]) ++end;
      return from_entries(e, end);
    }
    limit *= 1.5;
  }
}

GridSolve grid_eigenvalues(const DomainSpec& d, int M, double h) {
  if (M <= 0) throw ValidationError("M", "must be positive");
  const Raster raster = rasterize(d, h);
  GridOperator op(raster);
  const int n = op.size();
  if (M > n) throw ValidationError("M", "more eigenvalues requested than grid unknowns");
  if (n <= kDenseLimit) return dense_solve(op, M);

  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> chol(op.matrix());
  if (chol.info() != Eigen::Success) throw NumericalError("Cholesky factorisation of the grid Laplacian failed");

  const int ncv = std::min(n, std::max(2 * M + 2 * kBlock, 24));
  Eigen::MatrixXd basis(n, ncv);
  Eigen::MatrixXd ritz;
  std::mt19937_64 gen(0x5eed1234abcdULL);
  Eigen::MatrixXd block = random_block(n, kBlock, gen);
  int kept = 0;
  Eigen::VectorXd Ax(n);

  int cycle = 1;
  for (; cycle <= kMaxCycles; ++cycle) {
    if (kept > 0) basis.leftCols(kept) = ritz.leftCols(kept);
    int cols = kept;
    while (cols < ncv) {
      const int before = cols;
      cols = append_orthonormal(basis, cols, block);
      // a fully deflated block restarts the expansion from fresh directions
      if (cols == before) cols = append_orthonormal(basis, cols, random_block(n, kBlock, gen));
      if (cols == before) break;
      block = chol.solve(basis.middleCols(before, cols - before));
    }
    if (cols < M + kBlock) break;  // basis cannot grow any further
    // Rayleigh-Ritz for A on the Krylov space of A^{-1}.
    Eigen::MatrixXd AQ(n, cols);
    for (int c = 0; c < cols; ++c) {
      op.apply(basis.col(c), Ax);
      AQ.col(c) = Ax;
    }
    Eigen::MatrixXd H = basis.leftCols(cols).transpose() * AQ;
    H = 0.5 * (H + H.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
    ritz = basis.leftCols(cols) * es.eigenvectors();
    const Eigen::MatrixXd Aritz = AQ * es.eigenvectors();

    int first_bad = -1;
    for (int i = 0; i < M; ++i) {
      const double theta = es.eigenvalues()[i];
      const double res = (Aritz.col(i) - theta * ritz.col(i)).norm();
      if (res > kResidualTol * std::abs(theta)) {
        first_bad = i;
        break;
      }
    }
    if (first_bad < 0) {
      GridSolve g;
      g.iterations = cycle;
      g.unknowns = n;
      for (int i = 0; i < M; ++i) g.lambda_sq.push_back(es.eigenvalues()[i]);
      return g;
    }
    kept = std::min(M + kBlock, cols - kBlock);
    const int take = std::min(kBlock, cols - first_bad);
    block = chol.solve(ritz.middleCols(first_bad, take));
  }
  std::ostringstream msg;
  const int used = std::min(cycle, kMaxCycles);
  msg << "grid eigensolver did not reach residual " << kResidualTol << " relative in " << used
      << " restarts (" << n << " unknowns)";
  throw ConvergenceError(msg.str(), used);
}

EigenResult eigen_grid(const DomainSpec& d, int M, double h) {
  const Eigen::Vector2d ext = domain_extent(d);
  const double across = std::min(ext.x(), ext.y()) / h;
  if (across < 32.0 * (1.0 - 1e-12)) {
    std::ostringstream msg;
    msg << "h = " << h << " gives " << across << " cells across; at least 32 are needed";
    throw ValidationError("grid.h", msg.str());
  }
  const GridSolve c = grid_eigenvalues(d, M, h);
  const GridSolve f = grid_eigenvalues(d, M, 0.5 * h);

  std::vector<std::pair<double, double>> ext_err(M);
  for (int i = 0; i < M; ++i)
    ext_err[i] = {(4.0 * f.lambda_sq[i] - c.lambda_sq[i]) / 3.0, std::abs(c.lambda_sq[i] - f.lambda_sq[i]) / 3.0};
  std::vector<int> order(M);
  for (int i = 0; i < M; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return ext_err[a].first < ext_err[b].first; });

  EigenResult r;
  r.method = EigenMethod::grid;
  r.h = h;
  r.iterations = c.iterations + f.iterations;
  for (int i : order) {
    r.lambda_sq.push_back(ext_err[i].first);
    r.lambdas.push_back(std::sqrt(std::max(0.0, ext_err[i].first)));
    r.error_estimate.push_back(ext_err[i].second);
    r.coarse.push_back(c.lambda_sq[i]);
    r.fine.push_back(f.lambda_sq[i]);
  }
  // Clusters: entries closer than their combined error bars.
  r.cluster.assign(M, 0);
  r.multiplicity.assign(M, 1);
  int id = 0, start = 0;
  for (int i = 1; i <= M; ++i) {
    const bool split = i == M || std::abs(r.lambda_sq[i] - r.lambda_sq[i - 1]) >
                                     r.error_estimate[i] + r.error_estimate[i - 1] + 1e-8 * r.lambda_sq[i];
    if (!split) continue;
    for (int k = start; k < i; ++k) r.cluster[k] = id, r.multiplicity[k] = i - start;
    ++id;
    start = i;
  }
  return r;
}

double default_grid_h(const DomainSpec& d, int cells) {
  const Eigen::Vector2d ext = domain_extent(d);
  const double narrow = std::min(ext.x(), ext.y());
  if (const auto* m = std::get_if<GridMask>(&d)) {
    const int s = std::max(1, static_cast<int>(std::ceil(cells * m->h / narrow - 1e-9)));
    return m->h / s;
  }
  return narrow / cells;
}

}  // namespace vortex
