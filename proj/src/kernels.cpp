#include "elvar/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace elvar::kernels {

namespace {

// Rotation zeroing A[p][q]; returns (c, s) for the plane rotation with
// column p -> c*e_p - s*e_q, column q -> s*e_p + c*e_q.
inline void rotation_params(double app, double aqq, double apq, double& c, double& s) {
  const double theta = (aqq - app) / (2.0 * apq);
  const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  c = 1.0 / std::sqrt(t * t + 1.0);
  s = t * c;
}

double frobenius(const std::vector<double>& a) {
  double acc = 0.0;
  for (double v : a) acc += v * v;
  return std::sqrt(acc);
}

// Off-diagonal Frobenius norm, per-row partials mapped in parallel.
double off_diagonal_norm(const std::vector<double>& a, int n, std::vector<double>& row_partials) {
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    const double* row = a.data() + static_cast<std::size_t>(i) * n;
    for (int j = i + 1; j < n; ++j) acc += row[j] * row[j];
    row_partials[static_cast<std::size_t>(i)] = acc;
  }
  double acc = 0.0;
  for (int i = 0; i < n; ++i) acc += row_partials[static_cast<std::size_t>(i)];
  return std::sqrt(2.0 * acc);
}

}  // namespace

void banded_matvec(int order, int hb, const double* bands, const double* x, double* y) {
#pragma omp parallel for schedule(static)
  for (int k = 0; k < order; ++k) {
    double acc = bands[k] * x[k];
    for (int d = 1; d <= hb; ++d) {
      const double* band = bands + static_cast<std::size_t>(d) * order;
      if (k + d < order) acc += band[k] * x[k + d];
      if (k - d >= 0) acc += band[k - d] * x[k - d];
    }
    y[k] = acc;
  }
}

double quadratic_form(int order, int hb, const double* bands, const double* x) {
  std::vector<double> y(static_cast<std::size_t>(order));
  banded_matvec(order, hb, bands, x, y.data());
  return dot(order, x, y.data());
}

double dot(int count, const double* a, const double* b) {
  double acc = 0.0;
  for (int k = 0; k < count; ++k) acc += a[k] * b[k];
  return acc;
}

double sum(int count, const double* values) {
  double acc = 0.0;
  for (int k = 0; k < count; ++k) acc += values[k];
  return acc;
}

double sup_norm(int count, const double* values) {
  double acc = 0.0;
  for (int k = 0; k < count; ++k) acc = std::max(acc, std::abs(values[k]));
  return acc;
}

double two_norm(int count, const double* values) {
  double acc = 0.0;
  for (int k = 0; k < count; ++k) acc += values[k] * values[k];
  return std::sqrt(acc);
}

JacobiResult jacobi_eigenvalues(std::vector<double> dense, int order, int max_sweeps,
                                double rel_off_tol) {
  JacobiResult result;
  if (order == 1) {
    result.eigenvalues = {dense[0]};
    result.converged = true;
    return result;
  }

  const double off_tol = rel_off_tol * frobenius(dense);
  const int np = (order % 2 == 0) ? order : order + 1;  // pad with a dummy player
  std::vector<double> next(dense.size());
  std::vector<double> row_partials(static_cast<std::size_t>(order));
  std::vector<int> partner(static_cast<std::size_t>(order));
  std::vector<double> alpha(static_cast<std::size_t>(order));
  std::vector<double> beta(static_cast<std::size_t>(order));

  auto at = [&](const std::vector<double>& a, int i, int j) -> double {
    return a[static_cast<std::size_t>(i) * order + j];
  };

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    if (off_diagonal_norm(dense, order, row_partials) <= off_tol) {
      result.converged = true;
      break;
    }
    // One sweep = np-1 tournament rounds; each round rotates a maximal set of
    // disjoint pivot pairs jointly, so every pair is visited once per sweep.
    for (int round = 0; round < np - 1; ++round) {
      for (int i = 0; i < order; ++i) {
        partner[static_cast<std::size_t>(i)] = i;
        alpha[static_cast<std::size_t>(i)] = 1.0;
        beta[static_cast<std::size_t>(i)] = 0.0;
      }
      auto player = [&](int slot) -> int {
        return slot == 0 ? 0 : (round + slot - 1) % (np - 1) + 1;
      };
      for (int slot = 0; slot < np / 2; ++slot) {
        int p = player(slot);
        int q = player(np - 1 - slot);
        if (p >= order || q >= order) continue;  // dummy pairing
        if (p > q) std::swap(p, q);
        const double apq = at(dense, p, q);
        if (apq == 0.0) continue;
        double c = 1.0, s = 0.0;
        rotation_params(at(dense, p, p), at(dense, q, q), apq, c, s);
        partner[static_cast<std::size_t>(p)] = q;
        partner[static_cast<std::size_t>(q)] = p;
        alpha[static_cast<std::size_t>(p)] = c;
        beta[static_cast<std::size_t>(p)] = -s;
        alpha[static_cast<std::size_t>(q)] = c;
        beta[static_cast<std::size_t>(q)] = s;
      }
      // B = J^T A J, element-parallel into a fresh buffer (deterministic).
#pragma omp parallel for schedule(static)
      for (int i = 0; i < order; ++i) {
        const int pi = partner[static_cast<std::size_t>(i)];
        const double ai = alpha[static_cast<std::size_t>(i)];
        const double bi = beta[static_cast<std::size_t>(i)];
        double* out = next.data() + static_cast<std::size_t>(i) * order;
        for (int j = 0; j < order; ++j) {
          const int pj = partner[static_cast<std::size_t>(j)];
          const double aj = alpha[static_cast<std::size_t>(j)];
          const double bj = beta[static_cast<std::size_t>(j)];
          out[j] = ai * (aj * at(dense, i, j) + bj * at(dense, i, pj)) +
                   bi * (aj * at(dense, pi, j) + bj * at(dense, pi, pj));
        }
      }
      dense.swap(next);
    }
    result.sweeps = sweep + 1;
  }
  if (!result.converged && off_diagonal_norm(dense, order, row_partials) <= off_tol)
    result.converged = true;

  result.eigenvalues.resize(static_cast<std::size_t>(order));
  for (int i = 0; i < order; ++i) result.eigenvalues[static_cast<std::size_t>(i)] = at(dense, i, i);
  return result;
}

CholeskyOutcome banded_cholesky(int order, int hb, const double* bands) {
  CholeskyOutcome out;
  // Lower factor in band layout: low[d*order + k] = L(k+d, k).
  std::vector<double> low(static_cast<std::size_t>(hb + 1) * order, 0.0);
  auto lat = [&](int i, int j) -> double& {
    return low[static_cast<std::size_t>(i - j) * order + j];
  };
  auto mat = [&](int i, int j) -> double {  // i >= j, |i-j| <= hb
    return bands[static_cast<std::size_t>(i - j) * order + j];
  };
  for (int k = 0; k < order; ++k) {
    double d = mat(k, k);
    const int j0 = std::max(0, k - hb);
    for (int j = j0; j < k; ++j) d -= lat(k, j) * lat(k, j);
    if (!(d > 0.0)) {
      out.success = false;
      out.first_bad_pivot = k + 1;
      return out;
    }
    const double piv = std::sqrt(d);
    lat(k, k) = piv;
    out.pivots.push_back(piv);
    const int ilim = std::min(order - 1, k + hb);
    for (int i = k + 1; i <= ilim; ++i) {
      double v = mat(i, k);
      const int jj0 = std::max(0, i - hb);
      for (int j = std::max(jj0, j0); j < k; ++j) v -= lat(i, j) * lat(k, j);
      lat(i, k) = v / piv;
    }
  }
  out.success = true;
  return out;
}

bool BandLU::factor(int order, int hb, const double* sym_bands, const double* diag_add) {
  order_ = order;
  hb_ = hb;
  const int b = hb;
  w_.assign(static_cast<std::size_t>(3 * b + 1) * order, 0.0);
  pivot_row_.assign(static_cast<std::size_t>(order), 0);
  auto wat = [&](int i, int j) -> double& {
    return w_[static_cast<std::size_t>(i - j + 2 * b) * order + j];
  };
  double amax = 0.0;
  for (int j = 0; j < order; ++j) {
    for (int i = std::max(0, j - b); i <= std::min(order - 1, j + b); ++i) {
      const int d = std::abs(i - j);
      double v = sym_bands[static_cast<std::size_t>(d) * order + std::min(i, j)];
      if (i == j && diag_add) v += diag_add[i];
      wat(i, j) = v;
      amax = std::max(amax, std::abs(v));
    }
  }
  const double tol = 1e-13 * amax;

  for (int k = 0; k < order; ++k) {
    const int ilim = std::min(order - 1, k + b);
    int imax = k;
    double vmax = std::abs(wat(k, k));
    for (int i = k + 1; i <= ilim; ++i) {
      const double v = std::abs(wat(i, k));
      if (v > vmax) {
        vmax = v;
        imax = i;
      }
    }
    if (vmax <= tol) return false;
    pivot_row_[static_cast<std::size_t>(k)] = imax;
    const int jlim = std::min(order - 1, k + 2 * b);
    if (imax != k)
      for (int j = k; j <= jlim; ++j) std::swap(wat(k, j), wat(imax, j));
    const double piv = wat(k, k);
    for (int i = k + 1; i <= ilim; ++i) {
      const double mult = wat(i, k) / piv;
      wat(i, k) = mult;
      if (mult != 0.0)
        for (int j = k + 1; j <= jlim; ++j) wat(i, j) -= mult * wat(k, j);
    }
  }
  return true;
}

void BandLU::solve(double* rhs) const {
  const int b = hb_;
  auto wat = [&](int i, int j) -> double {
    return w_[static_cast<std::size_t>(i - j + 2 * b) * order_ + j];
  };
  for (int k = 0; k < order_; ++k) {
    const int pr = pivot_row_[static_cast<std::size_t>(k)];
    if (pr != k) std::swap(rhs[k], rhs[pr]);
    const int ilim = std::min(order_ - 1, k + b);
    for (int i = k + 1; i <= ilim; ++i) rhs[i] -= wat(i, k) * rhs[k];
  }
  for (int k = order_ - 1; k >= 0; --k) {
    double v = rhs[k];
    const int jlim = std::min(order_ - 1, k + 2 * b);
    for (int j = k + 1; j <= jlim; ++j) v -= wat(k, j) * rhs[j];
    rhs[k] = v / wat(k, k);
  }
}

namespace serial {

void banded_matvec(int order, int hb, const double* bands, const double* x, double* y) {
  for (int k = 0; k < order; ++k) y[k] = bands[k] * x[k];
  for (int d = 1; d <= hb; ++d) {
    const double* band = bands + static_cast<std::size_t>(d) * order;
    for (int k = 0; k + d < order; ++k) {
      y[k] += band[k] * x[k + d];
      y[k + d] += band[k] * x[k];
    }
  }
}

double quadratic_form(int order, int hb, const double* bands, const double* x) {
  std::vector<double> y(static_cast<std::size_t>(order));
  banded_matvec(order, hb, bands, x, y.data());
  return kernels::dot(order, x, y.data());
}

JacobiResult jacobi_eigenvalues(std::vector<double> dense, int order, int max_sweeps,
                                double rel_off_tol) {
  JacobiResult result;
  auto at = [&](int i, int j) -> double& {
    return dense[static_cast<std::size_t>(i) * order + j];
  };
  if (order == 1) {
    result.eigenvalues = {dense[0]};
    result.converged = true;
    return result;
  }
  const double off_tol = rel_off_tol * frobenius(dense);
  auto off_norm = [&]() {
    double acc = 0.0;
    for (int i = 0; i < order; ++i)
      for (int j = i + 1; j < order; ++j) acc += at(i, j) * at(i, j);
    return std::sqrt(2.0 * acc);
  };
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    if (off_norm() <= off_tol) {
      result.converged = true;
      break;
    }
    for (int p = 0; p < order - 1; ++p) {
      for (int q = p + 1; q < order; ++q) {
        const double apq = at(p, q);
        if (apq == 0.0) continue;
        double c = 1.0, s = 0.0;
        rotation_params(at(p, p), at(q, q), apq, c, s);
        const double app = at(p, p);
        const double aqq = at(q, q);
        at(p, p) = c * c * app - 2.0 * c * s * apq + s * s * aqq;
        at(q, q) = s * s * app + 2.0 * c * s * apq + c * c * aqq;
        at(p, q) = at(q, p) = 0.0;
        for (int k = 0; k < order; ++k) {
          if (k == p || k == q) continue;
          const double akp = at(k, p);
          const double akq = at(k, q);
          at(k, p) = at(p, k) = c * akp - s * akq;
          at(k, q) = at(q, k) = s * akp + c * akq;
        }
      }
    }
    result.sweeps = sweep + 1;
  }
  if (!result.converged && off_norm() <= off_tol) result.converged = true;
  result.eigenvalues.resize(static_cast<std::size_t>(order));
  for (int i = 0; i < order; ++i) result.eigenvalues[static_cast<std::size_t>(i)] = at(i, i);
  return result;
}

}  // namespace serial

}  // namespace elvar::kernels
