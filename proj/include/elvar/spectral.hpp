#pragma once

#include <optional>
#include <vector>

#include "elvar/assembly.hpp"
#include "elvar/grid_problem.hpp"

namespace elvar {

struct PdCertificate {
  bool positive_definite = false;
  std::vector<double> pivots;                    // diagonal of the Cholesky factor
  std::optional<int> first_nonpositive_pivot;    // 1-based, when factorization fails
};

struct SpectrumSummary {
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  std::optional<std::vector<double>> full_spectrum;  // ascending
  PdCertificate pd;
  int jacobi_sweeps = 0;
};

/// Full symmetric eigendecomposition by cyclic Jacobi rotations with
/// off-diagonal norm threshold 1e-12 * ||M||_F; throws JacobiNonconvergent
/// after 100 sweeps. Ties in the ascending sort are broken by the original
/// diagonal index; only values are exposed.
SpectrumSummary eigen_extremes(const SystemMatrix& matrix);

/// Cholesky-type certificate: success with all pivots positive, or the
/// 1-based index of the first nonpositive pivot. Failure is a return value,
/// not an error.
PdCertificate certify_positive_definite(const SystemMatrix& matrix);

/// Test-only escape hatch: certificate for an arbitrary dense symmetric
/// matrix (row-major), e.g. matrices not constructible from any admissible
/// grid.
PdCertificate certify_positive_definite_dense(const std::vector<double>& dense, int order);

struct BlockFormCheck {
  int j = 0;           // block index, 1-based
  double lhs = 0.0;    // X_j^T L_j X_j
  double rhs = 0.0;    // sum_i (p(i,j) + p(i,j-1)) x_{i,j}^2
  bool holds = false;
};

struct QuadraticFormCheck {
  double lhs = 0.0;   // X^T M X
  double rhs = 0.0;   // telescoped lower bound
  bool holds = false;
  std::vector<BlockFormCheck> blocks;                 // per-block inequality
  std::optional<BlockFormCheck> first_block_violation;
};

/// Executes the positive-definiteness proof inequalities as runtime checks:
/// X^T M X >= sum_{j<n} sum_i p(i,j)(x_{i,j}-x_{i,j+1})^2 + sum_i p(i,n) x_{i,n}^2,
/// with slack 1e-10 relative, plus the per-block bound
/// X_j^T L_j X_j >= sum_i (p(i,j)+p(i,j-1)) x_{i,j}^2.
QuadraticFormCheck quadratic_form_lower_bound_check(const WeightGrid& grid,
                                                    const GridFunction& x);

}  // namespace elvar
