#include "elvar/assembly.hpp"

#include <algorithm>
#include <cmath>

#include "elvar/kernels.hpp"

namespace elvar {

double SystemMatrix::at(int k, int l) const {
  if (k < 0 || k >= order_ || l < 0 || l >= order_)
    raise(Errc::index_out_of_range, "matrix index outside [0,mn)");
  const int d = std::abs(k - l);
  if (d > hb_) return 0.0;
  return bands_[static_cast<std::size_t>(d) * order_ + std::min(k, l)];
}

std::vector<double> SystemMatrix::dense() const {
  std::vector<double> a(static_cast<std::size_t>(order_) * order_, 0.0);
  for (int d = 0; d <= hb_; ++d)
    for (int k = 0; k + d < order_; ++k) {
      const double v = bands_[static_cast<std::size_t>(d) * order_ + k];
      a[static_cast<std::size_t>(k) * order_ + (k + d)] = v;
      a[static_cast<std::size_t>(k + d) * order_ + k] = v;
    }
  return a;
}

double SystemMatrix::trace() const {
  return kernels::sum(order_, bands_.data());
}

double SystemMatrix::inf_norm() const {
  double best = 0.0;
  for (int k = 0; k < order_; ++k) {
    double acc = 0.0;
    for (int l = std::max(0, k - hb_); l <= std::min(order_ - 1, k + hb_); ++l)
      acc += std::abs(at(k, l));
    best = std::max(best, acc);
  }
  return best;
}

double SystemMatrix::frobenius_norm() const {
  double acc = 0.0;
  for (int d = 0; d <= hb_; ++d)
    for (int k = 0; k + d < order_; ++k) {
      const double v = bands_[static_cast<std::size_t>(d) * order_ + k];
      acc += (d == 0 ? 1.0 : 2.0) * v * v;
    }
  return std::sqrt(acc);
}

std::vector<double> assemble_L(const WeightGrid& grid, int j) {
  const int m = grid.m();
  if (j < 1 || j > grid.n())
    raise(Errc::index_out_of_range, "L block index j=" + std::to_string(j) + " outside [1,n]");
  std::vector<double> block(static_cast<std::size_t>(m) * m, 0.0);
  for (int k = 1; k <= m; ++k) {
    block[static_cast<std::size_t>(k - 1) * m + (k - 1)] =
        grid.p(k - 1, j) + 2.0 * grid.p(k, j) + grid.p(k, j - 1);
    if (k < m) {
      block[static_cast<std::size_t>(k - 1) * m + k] = -grid.p(k, j);
      block[static_cast<std::size_t>(k) * m + (k - 1)] = -grid.p(k, j);
    }
  }
  return block;
}

std::vector<double> assemble_P(const WeightGrid& grid, int j) {
  if (grid.n() < 2 || j < 1 || j > grid.n() - 1)
    raise(Errc::index_out_of_range,
          "P block index j=" + std::to_string(j) + " outside [1,n-1]");
  std::vector<double> diag(static_cast<std::size_t>(grid.m()));
  for (int i = 1; i <= grid.m(); ++i) diag[static_cast<std::size_t>(i - 1)] = grid.p(i, j);
  return diag;
}

SystemMatrix assemble_M(const WeightGrid& grid) {
  const int m = grid.m();
  const int n = grid.n();
  const int order = m * n;
  SystemMatrix mat;
  mat.order_ = order;
  mat.block_ = m;
  mat.hb_ = std::min(m, order - 1);
  mat.bands_.assign(static_cast<std::size_t>(mat.hb_ + 1) * order, 0.0);

  auto band = [&](int d) { return mat.bands_.data() + static_cast<std::size_t>(d) * order; };
  for (int j = 1; j <= n; ++j) {
    const int base = (j - 1) * m;
    for (int i = 1; i <= m; ++i)
      band(0)[base + i - 1] = grid.p(i - 1, j) + 2.0 * grid.p(i, j) + grid.p(i, j - 1);
    if (m >= 2)
      for (int i = 1; i < m; ++i) band(1)[base + i - 1] = -grid.p(i, j);
  }
  for (int j = 1; j <= n - 1; ++j) {
    const int base = (j - 1) * m;
    for (int i = 1; i <= m; ++i) band(m)[base + i - 1] = -grid.p(i, j);
  }
  return mat;
}

GridFunction apply_stencil(const WeightGrid& grid, const GridFunction& u) {
  const int m = grid.m();
  const int n = grid.n();
  if (u.m() != m || u.n() != n)
    raise(Errc::shape_mismatch, "grid function shape does not match the weight grid");
  GridFunction out(m, n);
  auto uval = [&](int i, int j) -> double {  // zero Dirichlet boundary
    if (i < 1 || i > m || j < 1 || j > n) return 0.0;
    return u[(j - 1) * m + (i - 1)];
  };
  kernels::map_indexed(m * n, out.flat().data(), [&](int k) {
    const int i = k % m + 1;
    const int j = k / m + 1;
    return -grid.p(i - 1, j) * uval(i - 1, j) +
           (grid.p(i - 1, j) + 2.0 * grid.p(i, j) + grid.p(i, j - 1)) * uval(i, j) -
           grid.p(i, j) * uval(i + 1, j) - grid.p(i, j - 1) * uval(i, j - 1) -
           grid.p(i, j) * uval(i, j + 1);
  });
  return out;
}

GridFunction nonlinear_map(const ProblemInstance& instance, const GridFunction& u) {
  const int m = instance.m();
  const int n = instance.n();
  if (u.m() != m || u.n() != n)
    raise(Errc::shape_mismatch, "grid function shape does not match the instance");
  GridFunction out(m, n);
  const NonlinearitySpec& nl = instance.nonlinearity();
  kernels::map_indexed(m * n, out.flat().data(), [&](int k) {
    const int i = k % m + 1;
    const int j = k / m + 1;
    return nl.eval_f(i, j, u[k]);
  });
  return out;
}

GridFunction matvec(const SystemMatrix& matrix, const GridFunction& u) {
  if (matrix.order() != u.size())
    raise(Errc::shape_mismatch, "matrix order does not match the grid function");
  GridFunction out(u.m(), u.n());
  kernels::banded_matvec(matrix.order(), matrix.half_bandwidth(), matrix.bands().data(),
                         u.flat().data(), out.flat().data());
  return out;
}

GridFunction residual(const ProblemInstance& instance, const GridFunction& u, double lambda) {
  GridFunction mu = apply_stencil(instance.grid(), u);
  const GridFunction h = nonlinear_map(instance, u);
  for (int k = 0; k < mu.size(); ++k) mu[k] -= lambda * h[k];
  return mu;
}

}  // namespace elvar
