#pragma once

#include <cstdint>
#include <exception>
#include <vector>

#include "elvar/errors.hpp"

namespace elvar::kernels {

// Symmetric banded layout used throughout: bands[d * order + k] = M(k, k+d)
// for d in [0, hb], k in [0, order-1-d]; the lower triangle is implied.
// Unused band tails are zero.

/// y = M x for a symmetric banded matrix. Rows are independent, so the
/// parallel version is deterministic for any thread count.
void banded_matvec(int order, int hb, const double* bands, const double* x, double* y);

/// x^T M x via one banded matrix-vector product and a serial dot.
double quadratic_form(int order, int hb, const double* bands, const double* x);

/// Serial, deterministic reductions.
double dot(int count, const double* a, const double* b);
double sum(int count, const double* values);
double sup_norm(int count, const double* values);
double two_norm(int count, const double* values);

/// Parallel map over an index range into a caller-owned buffer; reductions
/// over `out` stay serial so results do not depend on the thread count.
/// Exceptions from `fn` are captured and rethrown after the region ends
/// (throwing across an OpenMP boundary is undefined).
template <class Fn>
void map_indexed(int count, double* out, Fn&& fn) {
  std::exception_ptr err = nullptr;
#pragma omp parallel for schedule(static)
  for (int k = 0; k < count; ++k) {
    try {
      out[k] = fn(k);
    } catch (...) {
#pragma omp critical(elvar_map_indexed_err)
      {
        if (!err) err = std::current_exception();
      }
      out[k] = 0.0;
    }
  }
  if (err) std::rethrow_exception(err);
}

struct JacobiResult {
  std::vector<double> eigenvalues;  // unsorted (final diagonal order)
  int sweeps = 0;
  bool converged = false;
};

/// Cyclic Jacobi eigenvalues of a dense symmetric matrix (row-major).
/// Stops when the off-diagonal Frobenius norm falls below
/// rel_off_tol * ||A||_F of the input, or after max_sweeps sweeps.
///
/// The parallel version uses a round-robin tournament ordering: each round
/// rotates a maximal set of disjoint pivot pairs at once by forming the full
/// two-sided update into a fresh buffer, element-parallel and deterministic.
/// The serial reference applies the classic cyclic-by-row rotations in place.
JacobiResult jacobi_eigenvalues(std::vector<double> dense, int order, int max_sweeps,
                                double rel_off_tol);

struct CholeskyOutcome {
  bool success = false;
  std::vector<double> pivots;        // diagonal of the factor (as far as computed)
  int first_bad_pivot = 0;           // 1-based; 0 when success
};

/// Banded Cholesky attempt; fails at the first nonpositive pivot.
CholeskyOutcome banded_cholesky(int order, int hb, const double* bands);

/// LU with partial pivoting for J = M + diag(shift), M symmetric banded.
/// Fill grows the upper bandwidth to 2*hb (LAPACK-style band storage).
class BandLU {
 public:
  /// Returns false when a pivot is negligible (singular to working precision).
  bool factor(int order, int hb, const double* sym_bands, const double* diag_add);
  void solve(double* rhs) const;

 private:
  int order_ = 0;
  int hb_ = 0;
  std::vector<double> w_;    // (3*hb + 1) x order, row rg = i - j + 2*hb
  std::vector<int> pivot_row_;
};

namespace serial {

void banded_matvec(int order, int hb, const double* bands, const double* x, double* y);
double quadratic_form(int order, int hb, const double* bands, const double* x);
JacobiResult jacobi_eigenvalues(std::vector<double> dense, int order, int max_sweeps,
                                double rel_off_tol);

}  // namespace serial

}  // namespace elvar::kernels
