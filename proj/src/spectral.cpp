#include "elvar/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "elvar/kernels.hpp"

namespace elvar {

namespace {

constexpr double kOffDiagRelTol = 1e-12;
constexpr int kMaxSweeps = 100;
constexpr double kFormSlackRel = 1e-10;

PdCertificate certificate_from(const kernels::CholeskyOutcome& outcome) {
  PdCertificate cert;
  cert.positive_definite = outcome.success;
  cert.pivots = outcome.pivots;
  if (!outcome.success) cert.first_nonpositive_pivot = outcome.first_bad_pivot;
  return cert;
}

}  // namespace

SpectrumSummary eigen_extremes(const SystemMatrix& matrix) {
  auto jacobi =
      kernels::jacobi_eigenvalues(matrix.dense(), matrix.order(), kMaxSweeps, kOffDiagRelTol);
  if (!jacobi.converged)
    raise(Errc::jacobi_nonconvergent,
          "off-diagonal norm still above threshold after " + std::to_string(kMaxSweeps) +
              " sweeps");

  // Sort by value, ties by original diagonal index.
  std::vector<int> idx(jacobi.eigenvalues.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](int a, int b) {
    const double va = jacobi.eigenvalues[static_cast<std::size_t>(a)];
    const double vb = jacobi.eigenvalues[static_cast<std::size_t>(b)];
    if (va != vb) return va < vb;
    return a < b;
  });
  std::vector<double> sorted(jacobi.eigenvalues.size());
  for (std::size_t k = 0; k < idx.size(); ++k)
    sorted[k] = jacobi.eigenvalues[static_cast<std::size_t>(idx[k])];

  SpectrumSummary summary;
  summary.lambda_min = sorted.front();
  summary.lambda_max = sorted.back();
  summary.full_spectrum = std::move(sorted);
  summary.jacobi_sweeps = jacobi.sweeps;
  summary.pd = certify_positive_definite(matrix);
  return summary;
}

PdCertificate certify_positive_definite(const SystemMatrix& matrix) {
  return certificate_from(kernels::banded_cholesky(matrix.order(), matrix.half_bandwidth(),
                                                   matrix.bands().data()));
}

PdCertificate certify_positive_definite_dense(const std::vector<double>& dense, int order) {
  if (dense.size() != static_cast<std::size_t>(order) * order)
    raise(Errc::shape_mismatch, "dense matrix size does not match order");
  // Repack as a full-bandwidth symmetric band.
  const int hb = order - 1;
  std::vector<double> bands(static_cast<std::size_t>(hb + 1) * order, 0.0);
  for (int d = 0; d <= hb; ++d)
    for (int k = 0; k + d < order; ++k)
      bands[static_cast<std::size_t>(d) * order + k] =
          dense[static_cast<std::size_t>(k) * order + (k + d)];
  return certificate_from(kernels::banded_cholesky(order, hb, bands.data()));
}

QuadraticFormCheck quadratic_form_lower_bound_check(const WeightGrid& grid,
                                                    const GridFunction& x) {
  const int m = grid.m();
  const int n = grid.n();
  if (x.m() != m || x.n() != n)
    raise(Errc::shape_mismatch, "grid function shape does not match the weight grid");

  QuadraticFormCheck check;
  const SystemMatrix matrix = assemble_M(grid);
  check.lhs = kernels::quadratic_form(matrix.order(), matrix.half_bandwidth(),
                                      matrix.bands().data(), x.flat().data());

  double rhs = 0.0;
  for (int j = 1; j <= n - 1; ++j)
    for (int i = 1; i <= m; ++i) {
      const double d = x.at(i, j) - x.at(i, j + 1);
      rhs += grid.p(i, j) * d * d;
    }
  for (int i = 1; i <= m; ++i) rhs += grid.p(i, n) * x.at(i, n) * x.at(i, n);
  check.rhs = rhs;
  check.holds = check.lhs >= rhs - kFormSlackRel * std::abs(check.lhs);

  // Per-block inequality X_j^T L_j X_j >= sum_i (p(i,j)+p(i,j-1)) x_{i,j}^2.
  for (int j = 1; j <= n; ++j) {
    const std::vector<double> lj = assemble_L(grid, j);
    BlockFormCheck blk;
    blk.j = j;
    for (int a = 1; a <= m; ++a) {
      double row = 0.0;
      for (int b = 1; b <= m; ++b)
        row += lj[static_cast<std::size_t>(a - 1) * m + (b - 1)] * x.at(b, j);
      blk.lhs += x.at(a, j) * row;
      blk.rhs += (grid.p(a, j) + grid.p(a, j - 1)) * x.at(a, j) * x.at(a, j);
    }
    blk.holds = blk.lhs >= blk.rhs - kFormSlackRel * std::abs(blk.lhs);
    if (!blk.holds && !check.first_block_violation) check.first_block_violation = blk;
    check.blocks.push_back(blk);
  }
  return check;
}

}  // namespace elvar
