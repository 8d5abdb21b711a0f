#include "elvar/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "elvar/kernels.hpp"
#include "elvar/rng.hpp"

namespace elvar {

namespace {

constexpr double kMinArmijoStep = 1e-18;
constexpr double kMinNewtonDamping = 1e-12;
constexpr int kNewtonMaxIters = 100;
constexpr int kNewtonMaxFallbacks = 10;

struct SolveContext {
  const ProblemInstance& instance;
  SystemMatrix matrix;
  double lambda;

  SolveContext(const ProblemInstance& inst, double lam)
      : instance(inst), matrix(assemble_M(inst.grid())), lambda(lam) {}

  double total_energy(const GridFunction& u) const {
    return phi(matrix, u) - lambda * psi(instance, u);
  }
  GridFunction grad(const GridFunction& u) const { return residual(instance, u, lambda); }
};

enum class DescentStatus { converged, max_iters, stalled };

struct DescentResult {
  GridFunction u;
  double energy = 0.0;
  long iterations = 0;
  DescentStatus status = DescentStatus::max_iters;
  std::vector<TracePoint> trace;
};

// Armijo-backtracking steepest descent. `project` (when given) is applied
// after every accepted step and must leave the energy finite. Besides the
// grad_tol stop, the loop bails out once the energy decrease stays below
// machine noise for a stretch; the Newton polish owns the endgame.
template <class Projector>
DescentResult descend(const SolveContext& ctx, GridFunction u, const SolveOptions& opts,
                      Projector&& project) {
  constexpr double kStallRel = 1e-14;
  constexpr int kStallWindow = 25;
  DescentResult res;
  double e = ctx.total_energy(u);
  long it = 0;
  int stall_count = 0;
  for (; it < opts.max_iters; ++it) {
    const GridFunction g = ctx.grad(u);
    const double gn = kernels::sup_norm(g.size(), g.flat().data());
    if (opts.record_trace) res.trace.push_back({it, e, gn});
    if (gn <= opts.grad_tol) {
      res.status = DescentStatus::converged;
      break;
    }
    const double gsq = kernels::dot(g.size(), g.flat().data(), g.flat().data());
    double step = opts.initial_step;
    bool accepted = false;
    GridFunction trial = u;
    double et = e;
    while (step >= kMinArmijoStep) {
      for (int k = 0; k < u.size(); ++k) trial[k] = u[k] - step * g[k];
      et = ctx.total_energy(trial);
      if (et <= e - opts.armijo_c * step * gsq) {
        u = trial;
        accepted = true;
        break;
      }
      step *= opts.backtrack_ratio;
    }
    if (!accepted) {
      res.status = DescentStatus::stalled;
      break;
    }
    stall_count = (e - et <= kStallRel * (1.0 + std::abs(et))) ? stall_count + 1 : 0;
    e = et;
    if (project(u)) e = ctx.total_energy(u);
    if (stall_count >= kStallWindow) {
      ++it;
      res.status = DescentStatus::stalled;
      break;
    }
  }
  res.u = std::move(u);
  res.energy = e;
  res.iterations = it;
  return res;
}

GridFunction random_point(const ProblemInstance& instance, Rng& rng, double lo, double hi) {
  GridFunction u(instance.m(), instance.n());
  for (int k = 0; k < u.size(); ++k) u[k] = rng.uniform(lo, hi);
  return u;
}

// Central-difference f' for kinds without a closed form; falls back to a
// one-sided difference at the edge of a tabulated lattice.
double numeric_f_derivative(const NonlinearitySpec& nl, double t) {
  const double h = 1e-7 * (1.0 + std::abs(t));
  auto try_eval = [&](double x, double& out) {
    try {
      out = nl.f(x);
      return true;
    } catch (const Error& e) {
      if (e.code() == Errc::tabulated_out_of_range) return false;
      throw;
    }
  };
  double fp = 0.0, fm = 0.0;
  const bool has_p = try_eval(t + h, fp);
  const bool has_m = try_eval(t - h, fm);
  if (has_p && has_m) return (fp - fm) / (2.0 * h);
  const double f0 = nl.f(t);
  if (has_p) return (fp - f0) / h;
  if (has_m) return (f0 - fm) / h;
  raise(Errc::tabulated_out_of_range, "cannot difference f at the lattice edge");
}

struct NewtonOutcome {
  GridFunction u;
  double residual_inf = 0.0;
  long iterations = 0;
  bool converged = false;
  std::vector<TracePoint> trace;
};

NewtonOutcome newton_impl(const SolveContext& ctx, GridFunction u, const SolveOptions& opts) {
  NewtonOutcome out;
  const int order = ctx.matrix.order();
  const NonlinearitySpec& nl = ctx.instance.nonlinearity();
  const int m = ctx.instance.m();
  std::vector<double> diag_add(static_cast<std::size_t>(order));
  std::vector<double> step(static_cast<std::size_t>(order));
  kernels::BandLU lu;
  int fallbacks = 0;
  long it = 0;

  GridFunction r = ctx.grad(u);
  double rn = kernels::sup_norm(order, r.flat().data());
  if (!std::isfinite(rn))
    raise(Errc::invalid_argument, "residual is not finite at the Newton starting point");

  auto gradient_fallback = [&]() {
    if (++fallbacks > kNewtonMaxFallbacks)
      raise(Errc::singular_jacobian,
            "Jacobian singular after " + std::to_string(kNewtonMaxFallbacks) +
                " gradient-step fallbacks");
    double alpha = opts.initial_step;
    GridFunction trial = u;
    while (alpha >= kMinArmijoStep) {
      for (int k = 0; k < order; ++k) trial[k] = u[k] - alpha * r[k];
      const GridFunction rt = ctx.grad(trial);
      if (kernels::sup_norm(order, rt.flat().data()) < rn) {
        u = trial;
        return;
      }
      alpha *= 0.5;
    }
    // No residual decrease along the gradient; nudge off the singular set.
    for (int k = 0; k < order; ++k) u[k] -= 1e-12 * r[k];
  };

  for (; it < kNewtonMaxIters; ++it) {
    r = ctx.grad(u);
    rn = kernels::sup_norm(order, r.flat().data());
    if (opts.record_trace) out.trace.push_back({it, ctx.total_energy(u), rn});
    if (rn <= opts.grad_tol) {
      out.converged = true;
      break;
    }

    bool finite_jacobian = true;
    for (int k = 0; k < order; ++k) {
      const int i = k % m + 1;
      const int j = k / m + 1;
      const auto closed = nl.f_derivative(u[k]);
      const double fp = closed ? *closed : numeric_f_derivative(nl, u[k]);
      const double v = -ctx.lambda * nl.coefficient(i, j) * fp;
      if (!std::isfinite(v)) {
        finite_jacobian = false;
        break;
      }
      diag_add[static_cast<std::size_t>(k)] = v;
    }

    if (!finite_jacobian ||
        !lu.factor(order, ctx.matrix.half_bandwidth(), ctx.matrix.bands().data(),
                   diag_add.data())) {
      gradient_fallback();
      continue;
    }

    for (int k = 0; k < order; ++k) step[static_cast<std::size_t>(k)] = -r[k];
    lu.solve(step.data());

    double alpha = 1.0;
    bool improved = false;
    GridFunction trial = u;
    while (alpha >= kMinNewtonDamping) {
      for (int k = 0; k < order; ++k) trial[k] = u[k] + alpha * step[static_cast<std::size_t>(k)];
      const GridFunction rt = ctx.grad(trial);
      if (kernels::sup_norm(order, rt.flat().data()) < rn) {
        u = trial;
        improved = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!improved) gradient_fallback();
  }

  r = ctx.grad(u);
  out.residual_inf = kernels::sup_norm(order, r.flat().data());
  out.converged = out.residual_inf <= opts.grad_tol;
  out.u = std::move(u);
  out.iterations = it;
  return out;
}

SolveReport finalize_report(const SolveContext& ctx, GridFunction u, SolveMethod method,
                            const SolveOptions& opts, long iterations,
                            std::vector<TracePoint> trace) {
  SolveReport report;
  const GridFunction r = ctx.grad(u);
  report.residual_inf = kernels::sup_norm(r.size(), r.flat().data());
  report.converged = report.residual_inf <= opts.grad_tol;
  report.nontrivial = max_norm(u) > opts.nontrivial_tol;
  report.energy = energy(ctx.instance, ctx.matrix, u, ctx.lambda);
  report.u = std::move(u);
  report.method = method;
  report.lambda = ctx.lambda;
  report.iterations = iterations;
  if (opts.record_trace) report.trace = std::move(trace);
  return report;
}

void require_lambda(double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    raise(Errc::invalid_argument, "lambda must be a finite nonnegative real");
}

}  // namespace

std::string_view solve_method_name(SolveMethod method) {
  switch (method) {
    case SolveMethod::global_min: return "global_min";
    case SolveMethod::sublevel_min: return "sublevel_min";
    case SolveMethod::mountain_pass: return "mountain_pass";
    case SolveMethod::newton: return "newton";
  }
  return "unknown";
}

SolveMethod solve_method_from_name(std::string_view name) {
  if (name == "global" || name == "global_min") return SolveMethod::global_min;
  if (name == "sublevel" || name == "sublevel_min") return SolveMethod::sublevel_min;
  if (name == "mountain-pass" || name == "mountain_pass") return SolveMethod::mountain_pass;
  if (name == "newton") return SolveMethod::newton;
  raise(Errc::validation_error, "unknown solve method '" + std::string(name) + "'");
}

void SolveOptions::validate() const {
  if (!(grad_tol > 0.0)) raise(Errc::invalid_argument, "grad_tol must be positive");
  if (max_iters < 1) raise(Errc::invalid_argument, "max_iters must be >= 1");
  if (!(armijo_c > 0.0 && armijo_c < 1.0))
    raise(Errc::invalid_argument, "armijo_c must lie in (0,1)");
  if (!(backtrack_ratio > 0.0 && backtrack_ratio < 1.0))
    raise(Errc::invalid_argument, "backtrack_ratio must lie in (0,1)");
  if (!(initial_step > 0.0)) raise(Errc::invalid_argument, "initial_step must be positive");
  if (!(nontrivial_tol > 0.0)) raise(Errc::invalid_argument, "nontrivial_tol must be positive");
  if (restarts < 0) raise(Errc::invalid_argument, "restarts must be >= 0");
}

void SublevelOptions::validate() const {
  if (!(alpha > 0.0)) raise(Errc::invalid_argument, "alpha must be positive");
  if (!(shrink_eps > 0.0 && shrink_eps < 1.0))
    raise(Errc::invalid_argument, "shrink_eps must lie in (0,1)");
}

void MountainPassOptions::validate() const {
  if (path_points < 3) raise(Errc::invalid_argument, "path_points must be >= 3");
  if (deform_steps < 1) raise(Errc::invalid_argument, "deform_steps must be >= 1");
}

SolveReport minimize_global(const ProblemInstance& instance, double lambda,
                            const SolveOptions& opts, const GridFunction* warm_start) {
  opts.validate();
  require_lambda(lambda);
  SolveContext ctx(instance, lambda);
  Rng rng(opts.seed);

  std::vector<GridFunction> starts;
  starts.emplace_back(instance.m(), instance.n());  // the origin
  if (warm_start) {
    if (warm_start->m() != instance.m() || warm_start->n() != instance.n())
      raise(Errc::shape_mismatch, "warm start shape does not match the instance");
    starts.push_back(*warm_start);
  }
  for (int s = 0; s < opts.restarts; ++s) starts.push_back(random_point(instance, rng, -2.0, 2.0));

  auto no_project = [](GridFunction&) { return false; };
  std::optional<DescentResult> best;
  long total_iters = 0;
  for (auto& start : starts) {
    DescentResult res = descend(ctx, std::move(start), opts, no_project);
    total_iters += res.iterations;
    if (!best || res.energy < best->energy) best = std::move(res);
  }

  GridFunction chosen = std::move(best->u);
  {
    const GridFunction r0 = ctx.grad(chosen);
    const double rn0 = kernels::sup_norm(r0.size(), r0.flat().data());
    const double e0 = best->energy;
    try {
      NewtonOutcome polished = newton_impl(ctx, chosen, opts);
      total_iters += polished.iterations;
      const double ep = ctx.total_energy(polished.u);
      if (polished.residual_inf <= rn0 && ep <= e0 + 1e-9 * std::abs(e0) + 1e-12)
        chosen = std::move(polished.u);
    } catch (const Error& e) {
      if (e.code() != Errc::singular_jacobian) throw;  // keep the descent iterate
    }
  }
  return finalize_report(ctx, std::move(chosen), SolveMethod::global_min, opts, total_iters,
                         std::move(best->trace));
}

SolveReport minimize_sublevel(const ProblemInstance& instance, double lambda,
                              const SublevelOptions& sub, const SolveOptions& opts,
                              const GridFunction* warm_start) {
  opts.validate();
  sub.validate();
  require_lambda(lambda);
  SolveContext ctx(instance, lambda);
  const SpectrumSummary spectrum = eigen_extremes(ctx.matrix);
  const double r = 0.5 * spectrum.lambda_min * sub.alpha * sub.alpha;

  // phi-sublevel sets are ellipsoids centered at 0, so radial scaling is an
  // exact projection back inside.
  auto project = [&](GridFunction& u) {
    const double ph = phi(ctx.matrix, u);
    if (ph >= r) {
      const double scale = std::sqrt(r * (1.0 - sub.shrink_eps) / ph);
      for (int k = 0; k < u.size(); ++k) u[k] *= scale;
      return true;
    }
    return false;
  };

  Rng rng(opts.seed);
  std::vector<GridFunction> starts;
  starts.emplace_back(instance.m(), instance.n());
  if (warm_start) {
    if (warm_start->m() != instance.m() || warm_start->n() != instance.n())
      raise(Errc::shape_mismatch, "warm start shape does not match the instance");
    starts.push_back(*warm_start);
  }
  for (int s = 0; s < opts.restarts; ++s) starts.push_back(random_point(instance, rng, -2.0, 2.0));
  for (auto& s : starts) project(s);

  std::optional<DescentResult> best;
  long total_iters = 0;
  for (auto& start : starts) {
    DescentResult res = descend(ctx, std::move(start), opts, project);
    total_iters += res.iterations;
    if (!best || res.energy < best->energy) best = std::move(res);
  }

  GridFunction chosen = std::move(best->u);
  {
    const GridFunction r0 = ctx.grad(chosen);
    const double rn0 = kernels::sup_norm(r0.size(), r0.flat().data());
    const double e0 = best->energy;
    try {
      NewtonOutcome polished = newton_impl(ctx, chosen, opts);
      total_iters += polished.iterations;
      const double ep = ctx.total_energy(polished.u);
      if (polished.residual_inf <= rn0 && phi(ctx.matrix, polished.u) < r &&
          ep <= e0 + 1e-6 * std::abs(e0) + 1e-9)
        chosen = std::move(polished.u);
    } catch (const Error& e) {
      if (e.code() != Errc::singular_jacobian) throw;
    }
  }

  SolveReport report = finalize_report(ctx, std::move(chosen), SolveMethod::sublevel_min, opts,
                                       total_iters, std::move(best->trace));
  report.sublevel_radius = r;
  report.sublevel_phi = phi(ctx.matrix, report.u);
  report.sublevel_interior = *report.sublevel_phi < r;
  return report;
}

SolveReport mountain_pass(const ProblemInstance& instance, double lambda,
                          const MountainPassOptions& mp, const SolveOptions& opts,
                          const GridFunction* warm_start) {
  opts.validate();
  mp.validate();
  require_lambda(lambda);
  SolveContext ctx(instance, lambda);

  GridFunction endpoint =
      mp.endpoint ? *mp.endpoint
                  : make_negative_energy_endpoint(instance, ctx.matrix, lambda, opts.seed, 60,
                                                  warm_start);
  if (endpoint.m() != instance.m() || endpoint.n() != instance.n())
    raise(Errc::shape_mismatch, "endpoint shape does not match the instance");
  const double endpoint_energy = ctx.total_energy(endpoint);
  if (!(endpoint_energy < 0.0))
    raise(Errc::endpoint_not_below_zero,
          "I_lambda(endpoint) = " + std::to_string(endpoint_energy) + " is not negative");

  const int points = mp.path_points;
  const int dim = instance.node_count();
  std::vector<GridFunction> path;
  path.reserve(static_cast<std::size_t>(points));
  std::vector<double> energies(static_cast<std::size_t>(points));
  for (int k = 0; k < points; ++k) {
    const double s = static_cast<double>(k) / (points - 1);
    GridFunction state(instance.m(), instance.n());
    for (int q = 0; q < dim; ++q) state[q] = s * endpoint[q];
    path.push_back(std::move(state));
  }

  auto recompute_energies = [&]() {
    for (int k = 0; k < points; ++k)
      energies[static_cast<std::size_t>(k)] = ctx.total_energy(path[static_cast<std::size_t>(k)]);
  };

  // Pushing nodes downhill lets them slide off the ridge; redistributing the
  // states uniformly by arc length keeps the polyline's crossing sampled, as
  // the path-maintenance step of the deformation requires.
  std::vector<double> cumlen(static_cast<std::size_t>(points));
  auto reparameterize = [&]() {
    cumlen[0] = 0.0;
    for (int k = 1; k < points; ++k) {
      double seg = 0.0;
      for (int q = 0; q < dim; ++q) {
        const double d = path[static_cast<std::size_t>(k)][q] - path[static_cast<std::size_t>(k - 1)][q];
        seg += d * d;
      }
      cumlen[static_cast<std::size_t>(k)] = cumlen[static_cast<std::size_t>(k - 1)] + std::sqrt(seg);
    }
    const double total = cumlen[static_cast<std::size_t>(points - 1)];
    if (total <= 0.0) return;
    std::vector<GridFunction> fresh;
    fresh.reserve(static_cast<std::size_t>(points));
    fresh.push_back(path.front());
    int seg = 0;
    for (int k = 1; k < points - 1; ++k) {
      const double target = total * k / (points - 1);
      while (seg < points - 2 && cumlen[static_cast<std::size_t>(seg + 1)] < target) ++seg;
      const double lo = cumlen[static_cast<std::size_t>(seg)];
      const double hi = cumlen[static_cast<std::size_t>(seg + 1)];
      const double w = hi > lo ? (target - lo) / (hi - lo) : 0.0;
      GridFunction state(instance.m(), instance.n());
      for (int q = 0; q < dim; ++q)
        state[q] = (1.0 - w) * path[static_cast<std::size_t>(seg)][q] +
                   w * path[static_cast<std::size_t>(seg + 1)][q];
      fresh.push_back(std::move(state));
    }
    fresh.push_back(path.back());
    path = std::move(fresh);
  };

  recompute_energies();

  constexpr double kPassStallRel = 1e-14;
  constexpr int kPassStallWindow = 50;
  std::vector<TracePoint> trace;
  long steps = 0;
  int kmax = 1;
  int stall_count = 0;
  double prev_pass = std::numeric_limits<double>::infinity();
  for (; steps < mp.deform_steps; ++steps) {
    kmax = 1;
    for (int k = 2; k <= points - 2; ++k)
      if (energies[static_cast<std::size_t>(k)] > energies[static_cast<std::size_t>(kmax)])
        kmax = k;
    const double pass_value = energies[static_cast<std::size_t>(kmax)];
    GridFunction& peak = path[static_cast<std::size_t>(kmax)];
    const GridFunction g = ctx.grad(peak);
    const double gn = kernels::sup_norm(g.size(), g.flat().data());
    if (opts.record_trace) trace.push_back({steps, pass_value, gn});
    if (gn <= opts.grad_tol) break;
    if (std::abs(prev_pass - pass_value) <= kPassStallRel * (1.0 + std::abs(pass_value))) {
      if (++stall_count >= kPassStallWindow) break;  // polyline has stabilized
    } else {
      stall_count = 0;
    }
    prev_pass = pass_value;

    const double gsq = kernels::dot(g.size(), g.flat().data(), g.flat().data());
    // Cap the push at the local node spacing: a node that outruns its
    // neighbors down an unbounded descent direction stretches the polyline
    // until redistribution pulls every state off the ridge.
    double max_move = 0.0;
    for (int side = -1; side <= 1; side += 2) {
      double seg = 0.0;
      for (int q = 0; q < dim; ++q) {
        const double d = path[static_cast<std::size_t>(kmax + side)][q] - peak[q];
        seg += d * d;
      }
      max_move = std::max(max_move, std::sqrt(seg));
    }
    double step = opts.initial_step;
    if (max_move > 0.0) step = std::min(step, max_move / std::sqrt(gsq));
    bool accepted = false;
    GridFunction trial = peak;
    while (step >= kMinArmijoStep) {
      for (int q = 0; q < dim; ++q) trial[q] = peak[q] - step * g[q];
      const double et = ctx.total_energy(trial);
      if (et <= pass_value - opts.armijo_c * step * gsq) {
        peak = trial;
        accepted = true;
        break;
      }
      step *= opts.backtrack_ratio;
    }
    if (!accepted) break;  // peak state is numerically critical already
    reparameterize();
    recompute_energies();
  }

  // The polyline's maximum generally falls between nodes; sample the two
  // segments adjacent to the max node densely before handing off to Newton.
  GridFunction candidate = path[static_cast<std::size_t>(kmax)];
  {
    double best = energies[static_cast<std::size_t>(kmax)];
    constexpr int kFine = 64;
    for (int side = -1; side <= 1; side += 2) {
      const int other = kmax + side;
      if (other < 0 || other > points - 1) continue;
      for (int q = 1; q < kFine; ++q) {
        const double w = static_cast<double>(q) / kFine;
        GridFunction state(instance.m(), instance.n());
        for (int d = 0; d < dim; ++d)
          state[d] = (1.0 - w) * path[static_cast<std::size_t>(kmax)][d] +
                     w * path[static_cast<std::size_t>(other)][d];
        const double e = ctx.total_energy(state);
        if (e > best) {
          best = e;
          candidate = std::move(state);
        }
      }
    }
  }
  long total_iters = steps;
  try {
    NewtonOutcome polished = newton_impl(ctx, std::move(candidate), opts);
    total_iters += polished.iterations;
    candidate = std::move(polished.u);
  } catch (const Error& e) {
    if (e.code() != Errc::singular_jacobian) throw;
    candidate = path[static_cast<std::size_t>(kmax)];
  }
  return finalize_report(ctx, std::move(candidate), SolveMethod::mountain_pass, opts, total_iters,
                         std::move(trace));
}

SolveReport newton_refine(const ProblemInstance& instance, double lambda, const GridFunction& u0,
                          const SolveOptions& opts) {
  opts.validate();
  require_lambda(lambda);
  if (u0.m() != instance.m() || u0.n() != instance.n())
    raise(Errc::shape_mismatch, "initial guess shape does not match the instance");
  SolveContext ctx(instance, lambda);
  NewtonOutcome outcome = newton_impl(ctx, u0, opts);
  SolveReport report = finalize_report(ctx, std::move(outcome.u), SolveMethod::newton, opts,
                                       outcome.iterations, std::move(outcome.trace));
  return report;
}

GridFunction make_negative_energy_endpoint(const ProblemInstance& instance,
                                           const SystemMatrix& matrix, double lambda,
                                           std::uint64_t seed, int max_doublings,
                                           const GridFunction* direction) {
  GridFunction dir(instance.m(), instance.n());
  if (direction && max_norm(*direction) > 0.0) {
    dir = *direction;
  } else {
    Rng rng(seed);
    for (int k = 0; k < dir.size(); ++k) dir[k] = rng.uniform(-1.0, 1.0);
  }
  const double norm = euclidean_norm(dir);
  if (norm == 0.0) raise(Errc::invalid_argument, "endpoint direction must be nonzero");
  for (int k = 0; k < dir.size(); ++k) dir[k] /= norm;

  double t = 1.0;
  for (int attempt = 0; attempt <= max_doublings; ++attempt, t *= 2.0) {
    GridFunction candidate(instance.m(), instance.n());
    for (int k = 0; k < candidate.size(); ++k) candidate[k] = t * dir[k];
    const double e = phi(matrix, candidate) - lambda * psi(instance, candidate);
    if (e < 0.0) return candidate;
  }
  raise(Errc::endpoint_not_below_zero,
        "no negative-energy endpoint found after " + std::to_string(max_doublings) +
            " doublings along the chosen direction");
}

std::vector<SweepEntry> sweep_lambda(const ProblemInstance& instance,
                                     const std::vector<double>& lambdas,
                                     const MethodConfig& config, int threads) {
  if (lambdas.empty()) raise(Errc::empty_sweep, "lambda list must be nonempty");
  for (std::size_t k = 0; k < lambdas.size(); ++k) {
    if (!(lambdas[k] > 0.0) || !std::isfinite(lambdas[k]))
      raise(Errc::invalid_argument, "sweep lambdas must be positive finite reals");
    if (k > 0 && !(lambdas[k] > lambdas[k - 1]))
      raise(Errc::invalid_argument, "sweep lambdas must be strictly ascending");
  }
  config.options.validate();

  auto solve_one = [&](double lambda, const SolveOptions& opts,
                       const GridFunction* warm) -> SolveReport {
    switch (config.method) {
      case SolveMethod::global_min:
        return minimize_global(instance, lambda, opts, warm);
      case SolveMethod::sublevel_min:
        return minimize_sublevel(instance, lambda, config.sublevel, opts, warm);
      case SolveMethod::mountain_pass:
        return mountain_pass(instance, lambda, config.mountain, opts, warm);
      case SolveMethod::newton: {
        if (warm) return newton_refine(instance, lambda, *warm, opts);
        Rng rng(opts.seed);
        GridFunction u0(instance.m(), instance.n());
        for (int k = 0; k < u0.size(); ++k) u0[k] = rng.uniform(-2.0, 2.0);
        return newton_refine(instance, lambda, u0, opts);
      }
    }
    raise(Errc::invalid_argument, "unknown solve method");
  };

  std::vector<SweepEntry> entries(lambdas.size());
  for (std::size_t k = 0; k < lambdas.size(); ++k) entries[k].lambda = lambdas[k];

  if (threads <= 1) {
    std::optional<GridFunction> warm;
    for (std::size_t k = 0; k < lambdas.size(); ++k) {
      try {
        SolveReport report = solve_one(lambdas[k], config.options, warm ? &*warm : nullptr);
        if (report.converged && report.nontrivial) warm = report.u;
        entries[k].report = std::move(report);
      } catch (const Error& e) {
        entries[k].error = e.what();
      }
    }
    return entries;
  }

  const int count = static_cast<int>(lambdas.size());
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (int k = 0; k < count; ++k) {
    SolveOptions opts = config.options;
    opts.seed = config.options.seed + static_cast<std::uint64_t>(k);
    try {
      entries[static_cast<std::size_t>(k)].report =
          solve_one(lambdas[static_cast<std::size_t>(k)], opts, nullptr);
    } catch (const Error& e) {
      entries[static_cast<std::size_t>(k)].error = e.what();
    } catch (const std::exception& e) {
      entries[static_cast<std::size_t>(k)].error = e.what();
    }
  }
  return entries;
}

}  // namespace elvar
