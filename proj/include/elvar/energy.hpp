#pragma once

#include "elvar/assembly.hpp"
#include "elvar/grid_problem.hpp"
#include "elvar/spectral.hpp"

namespace elvar {

struct EnergyBreakdown {
  double phi = 0.0;    // quadratic part, (1/2) U^T M U
  double psi = 0.0;    // potential part, sum of primitives
  double total = 0.0;  // phi - lambda * psi, in exactly that evaluation order
  double lambda = 0.0;
};

/// (1/2) U^T M U via one banded matrix-vector product.
double phi(const SystemMatrix& matrix, const GridFunction& u);

/// sum_{i,j} F((i,j), u(i,j)).
double psi(const ProblemInstance& instance, const GridFunction& u);

EnergyBreakdown energy(const ProblemInstance& instance, const SystemMatrix& matrix,
                       const GridFunction& u, double lambda);

/// Gradient of the energy: M U - lambda H(U). Identical to assembly::residual;
/// the matrix argument only pins the shape contract.
GridFunction gradient(const ProblemInstance& instance, const SystemMatrix& matrix,
                      const GridFunction& u, double lambda);

/// The two norms of the variational framework.
double euclidean_norm(const GridFunction& u);
double max_norm(const GridFunction& u);

struct EnergyBoundsReport {
  // (1/2) lambda_1 ||U||^2 <= phi(U) <= (1/2) lambda_mn ||U||^2
  double lower = 0.0;
  double phi_value = 0.0;
  double upper = 0.0;
  bool norm_chain_holds = false;
  // ||U||_inf^2 <= (2 / lambda_1) phi(U)
  double max_norm_sq = 0.0;
  double max_norm_bound = 0.0;
  bool max_chain_holds = false;
  bool pass = false;
};

/// Evaluates both norm/energy inequality chains with 1e-10 relative slack.
EnergyBoundsReport check_bounds(const SystemMatrix& matrix, const SpectrumSummary& spectrum,
                                const GridFunction& u);

}  // namespace elvar
