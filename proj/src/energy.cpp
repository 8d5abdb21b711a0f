#include "elvar/energy.hpp"

#include <cmath>
#include <vector>

#include "elvar/kernels.hpp"

namespace elvar {

namespace {
constexpr double kBoundsSlackRel = 1e-10;
}

double phi(const SystemMatrix& matrix, const GridFunction& u) {
  if (matrix.order() != u.size())
    raise(Errc::shape_mismatch, "matrix order does not match the grid function");
  return 0.5 * kernels::quadratic_form(matrix.order(), matrix.half_bandwidth(),
                                       matrix.bands().data(), u.flat().data());
}

double psi(const ProblemInstance& instance, const GridFunction& u) {
  const int m = instance.m();
  const int n = instance.n();
  if (u.m() != m || u.n() != n)
    raise(Errc::shape_mismatch, "grid function shape does not match the instance");
  const NonlinearitySpec& nl = instance.nonlinearity();
  std::vector<double> terms(static_cast<std::size_t>(m) * n);
  kernels::map_indexed(m * n, terms.data(), [&](int k) {
    const int i = k % m + 1;
    const int j = k / m + 1;
    return nl.eval_F(i, j, u[k]);
  });
  return kernels::sum(m * n, terms.data());
}

EnergyBreakdown energy(const ProblemInstance& instance, const SystemMatrix& matrix,
                       const GridFunction& u, double lambda) {
  EnergyBreakdown breakdown;
  breakdown.phi = phi(matrix, u);
  breakdown.psi = psi(instance, u);
  breakdown.lambda = lambda;
  breakdown.total = breakdown.phi - lambda * breakdown.psi;
  return breakdown;
}

GridFunction gradient(const ProblemInstance& instance, const SystemMatrix& matrix,
                      const GridFunction& u, double lambda) {
  if (matrix.order() != u.size())
    raise(Errc::shape_mismatch, "matrix order does not match the grid function");
  return residual(instance, u, lambda);
}

double euclidean_norm(const GridFunction& u) {
  return kernels::two_norm(u.size(), u.flat().data());
}

double max_norm(const GridFunction& u) {
  return kernels::sup_norm(u.size(), u.flat().data());
}

EnergyBoundsReport check_bounds(const SystemMatrix& matrix, const SpectrumSummary& spectrum,
                                const GridFunction& u) {
  EnergyBoundsReport report;
  const double norm_sq = kernels::dot(u.size(), u.flat().data(), u.flat().data());
  report.phi_value = phi(matrix, u);
  report.lower = 0.5 * spectrum.lambda_min * norm_sq;
  report.upper = 0.5 * spectrum.lambda_max * norm_sq;
  const double slack = kBoundsSlackRel * std::abs(report.phi_value);
  report.norm_chain_holds =
      report.lower <= report.phi_value + slack && report.phi_value <= report.upper + slack;

  const double sup = max_norm(u);
  report.max_norm_sq = sup * sup;
  report.max_norm_bound = 2.0 / spectrum.lambda_min * report.phi_value;
  report.max_chain_holds = report.max_norm_sq <= report.max_norm_bound + slack;

  report.pass = report.norm_chain_holds && report.max_chain_holds;
  return report;
}

}  // namespace elvar
