#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "elvar/energy.hpp"
#include "elvar/grid_problem.hpp"

namespace elvar {

enum class SolveMethod { global_min, sublevel_min, mountain_pass, newton };

std::string_view solve_method_name(SolveMethod method);
SolveMethod solve_method_from_name(std::string_view name);

struct SolveOptions {
  double grad_tol = 1e-10;        // stop when ||gradient||_inf <= grad_tol
  long max_iters = 100000;
  double armijo_c = 1e-4;
  double backtrack_ratio = 0.5;
  double initial_step = 1.0;
  double nontrivial_tol = 1e-6;   // ||U||_inf threshold for the nontrivial flag
  std::uint64_t seed = 0;
  int restarts = 5;
  bool record_trace = false;

  void validate() const;
};

struct SublevelOptions {
  double alpha = 1.0;       // ball parameter; r = lambda_1 * alpha^2 / 2, always recomputed
  double shrink_eps = 1e-3;

  void validate() const;
};

struct MountainPassOptions {
  std::optional<GridFunction> endpoint;  // the u-hat with I_lambda < 0; generated when absent
  int path_points = 64;
  long deform_steps = 10000;

  void validate() const;
};

struct TracePoint {
  long iteration = 0;
  double energy = 0.0;
  double grad_norm = 0.0;
};

struct SolveReport {
  GridFunction u;
  SolveMethod method = SolveMethod::global_min;
  double lambda = 0.0;
  double residual_inf = 0.0;
  EnergyBreakdown energy;
  long iterations = 0;
  bool converged = false;   // implies residual_inf <= grad_tol
  bool nontrivial = false;  // ||U||_inf > nontrivial_tol
  std::optional<std::vector<TracePoint>> trace;

  // sublevel extras
  std::optional<double> sublevel_radius;   // r
  std::optional<double> sublevel_phi;      // phi at the returned point
  std::optional<bool> sublevel_interior;   // phi(U) < r strictly
};

/// Armijo-backtracking gradient descent from 0 plus `restarts` random points
/// (entries uniform in [-2,2]); best final energy wins, then a Newton polish.
SolveReport minimize_global(const ProblemInstance& instance, double lambda,
                            const SolveOptions& opts, const GridFunction* warm_start = nullptr);

/// Projected descent inside the sublevel ellipsoid phi(U) < r: any accepted
/// step landing at phi >= r is pulled back radially to phi = r(1-shrink_eps).
SolveReport minimize_sublevel(const ProblemInstance& instance, double lambda,
                              const SublevelOptions& sub, const SolveOptions& opts,
                              const GridFunction* warm_start = nullptr);

/// Choi-McKenna-style deformation of the discretized segment 0 -> endpoint:
/// repeatedly push the interior path maximum one descent step until its
/// gradient norm reaches grad_tol or deform_steps is exhausted, then polish
/// with Newton. Requires I_lambda(endpoint) < 0 (EndpointNotBelowZero).
SolveReport mountain_pass(const ProblemInstance& instance, double lambda,
                          const MountainPassOptions& mp, const SolveOptions& opts,
                          const GridFunction* warm_start = nullptr);

/// Damped Newton on the residual M U - lambda H(U) with Jacobian
/// M - lambda diag(f'); at most 100 iterations, step halving until the
/// residual norm decreases, up to 10 gradient-step fallbacks on singular
/// Jacobians before SingularJacobian is raised.
SolveReport newton_refine(const ProblemInstance& instance, double lambda,
                          const GridFunction& u0, const SolveOptions& opts);

/// Scale a random direction, doubling the amplitude until the energy turns
/// negative (at most max_doublings, else EndpointNotBelowZero). An optional
/// direction overrides the seeded random one.
GridFunction make_negative_energy_endpoint(const ProblemInstance& instance,
                                           const SystemMatrix& matrix, double lambda,
                                           std::uint64_t seed, int max_doublings = 60,
                                           const GridFunction* direction = nullptr);

struct MethodConfig {
  SolveMethod method = SolveMethod::global_min;
  SolveOptions options;
  SublevelOptions sublevel;
  MountainPassOptions mountain;
};

struct SweepEntry {
  double lambda = 0.0;
  std::optional<SolveReport> report;
  std::optional<std::string> error;  // per-entry failures do not stop the sweep
};

/// One solve per lambda, reports in lambda order. With threads == 1 the sweep
/// runs sequentially and warm-starts each solve from the previous nontrivial
/// solution; with threads > 1 entries run concurrently from cold starts with
/// deterministic per-entry seeds.
std::vector<SweepEntry> sweep_lambda(const ProblemInstance& instance,
                                     const std::vector<double>& lambdas,
                                     const MethodConfig& config, int threads = 1);

}  // namespace elvar
