#pragma once

#include <span>
#include <vector>

#include "elvar/grid_problem.hpp"

namespace elvar {

/// The mn x mn symmetric block-tridiagonal system matrix: diagonal blocks L_j
/// tridiagonal, off-diagonal blocks -P_j diagonal. Stored as a symmetric band
/// with half-bandwidth m (capped at mn-1 for single-block grids); within a
/// block row the only nonzero offsets are {-m,-1,0,1,m}.
class SystemMatrix {
 public:
  int order() const { return order_; }
  int half_bandwidth() const { return hb_; }
  int block_size() const { return block_; }

  /// 0-based symmetric accessor.
  double at(int k, int l) const;

  /// kernels-layout band storage: bands()[d*order + k] = M(k, k+d).
  std::span<const double> bands() const { return bands_; }

  /// Row-major dense export.
  std::vector<double> dense() const;

  double trace() const;
  double inf_norm() const;
  double frobenius_norm() const;

 private:
  friend SystemMatrix assemble_M(const WeightGrid& grid);
  SystemMatrix() = default;

  int order_ = 0;
  int hb_ = 0;
  int block_ = 0;
  std::vector<double> bands_;
};

/// Diagonal block L_j, dense row-major m x m. Diagonal entries
/// p(k-1,j) + 2p(k,j) + p(k,j-1); sub/superdiagonal entries -p(k,j).
std::vector<double> assemble_L(const WeightGrid& grid, int j);

/// Coupling block P_j = diag(p(1,j),...,p(m,j)), j in [1,n-1];
/// returned as the diagonal. Grids with n = 1 have no coupling blocks.
std::vector<double> assemble_P(const WeightGrid& grid, int j);

SystemMatrix assemble_M(const WeightGrid& grid);

/// Five-point weighted stencil applied directly from the grid data with zero
/// boundary values; agrees with M*U up to round-off but never touches the
/// assembled matrix (the two routes stay independent for cross-checking).
GridFunction apply_stencil(const WeightGrid& grid, const GridFunction& u);

/// H(U): componentwise f((i,j), u(i,j)) under the fixed flattening.
GridFunction nonlinear_map(const ProblemInstance& instance, const GridFunction& u);

/// M*U through the banded storage.
GridFunction matvec(const SystemMatrix& matrix, const GridFunction& u);

/// Residual of the algebraic system: M*U - lambda*H(U), computed componentwise
/// as apply_stencil(U) - lambda*nonlinear_map(U).
GridFunction residual(const ProblemInstance& instance, const GridFunction& u, double lambda);

}  // namespace elvar
