#include <cmath>

#include "doctest.h"

#include "elvar/solvers.hpp"
#include "elvar/verify.hpp"
#include "test_support.hpp"

using namespace elvar;
using elvar::testing::scalar_instance;
using elvar::testing::unit_instance;

namespace {

double sqrt5() { return std::sqrt(5.0); }

}  // namespace

TEST_SUITE("solvers") {

TEST_CASE("global minimization, 1-D cubic softening anchors") {
  const ProblemInstance inst = scalar_instance(NonlinearitySpec::cubic_softening());
  SolveOptions opts;
  opts.seed = 3;

  const SolveReport at2 = minimize_global(inst, 2.0, opts);
  CHECK(at2.converged);
  CHECK(at2.nontrivial);
  CHECK(at2.residual_inf <= 1e-10);
  CHECK(std::abs(std::abs(at2.u[0]) - 1.0) <= 1e-6);
  CHECK(std::abs(at2.energy.total - (-0.5)) <= 1e-6);

  const SolveReport at3 = minimize_global(inst, 3.0, opts);
  CHECK(at3.converged);
  CHECK(std::abs(std::abs(at3.u[0]) - 2.0 / std::sqrt(3.0)) <= 1e-6);
  CHECK(std::abs(at3.energy.total - (-4.0 / 3.0)) <= 1e-6);
}

TEST_CASE("global minimization at tiny lambda returns the trivial point") {
  const ProblemInstance inst = scalar_instance(NonlinearitySpec::cubic_softening());
  SolveOptions opts;
  opts.seed = 1;
  const SolveReport report = minimize_global(inst, 0.01, opts);
  CHECK(report.converged);
  CHECK_FALSE(report.nontrivial);
  CHECK(std::abs(report.energy.total) <= 1e-12);
}

TEST_CASE("global minimization never ends above the origin's energy") {
  const ProblemInstance inst = scalar_instance(NonlinearitySpec::cubic_softening());
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    SolveOptions opts;
    opts.seed = seed;
    const SolveReport report = minimize_global(inst, 2.5, opts);
    CHECK(report.energy.total <= 1e-12);
  }
}

TEST_CASE("sublevel minimization, 1-D power kind anchor") {
  const ProblemInstance inst = scalar_instance(NonlinearitySpec::power(1.5, 1.5));
  SolveOptions opts;
  opts.seed = 5;
  SublevelOptions sub;
  sub.alpha = 1.0;  // r = lambda_1/2 = 1

  const SolveReport report = minimize_sublevel(inst, 0.5, sub, opts);
  CHECK(report.converged);
  CHECK(report.nontrivial);
  CHECK(report.residual_inf <= 1e-10);
  CHECK(std::abs(std::abs(report.u[0]) - 0.140625) <= 1e-6);
  CHECK(std::abs(report.energy.total - (-27.0 / 4096.0)) <= 1e-9);
  REQUIRE(report.sublevel_radius.has_value());
  CHECK(*report.sublevel_radius == doctest::Approx(1.0));
  CHECK(*report.sublevel_interior);
  CHECK(*report.sublevel_phi < *report.sublevel_radius);  // strict
}

TEST_CASE("sublevel minimization with lambda = 0 returns the origin") {
  const ProblemInstance inst = scalar_instance(NonlinearitySpec::power(1.5, 1.5));
  SolveOptions opts;
  opts.seed = 2;
  SublevelOptions sub;
  const SolveReport report = minimize_sublevel(inst, 0.0, sub, opts);
  CHECK(report.converged);
  CHECK_FALSE(report.nontrivial);
  CHECK(std::abs(report.u[0]) <= 1e-10);
}

TEST_CASE("sublevel regime of the first existence mechanism on the unit grid") {
  const ProblemInstance inst = unit_instance(2, 2, NonlinearitySpec::power(1.5, 1.5));
  const double lambda_star = (3.0 - sqrt5()) / 8.0;
  SolveOptions opts;
  opts.seed = 2;
  SublevelOptions sub;
  sub.alpha = 1.0;
  const SolveReport report = minimize_sublevel(inst, 0.9 * lambda_star, sub, opts);
  CHECK(report.converged);
  CHECK(report.nontrivial);
  CHECK(report.residual_inf <= 1e-8);
  CHECK(report.energy.total < 0.0);
  CHECK(*report.sublevel_interior);
}

TEST_CASE("mountain pass, 1-D rational quartic anchor") {
  const ProblemInstance inst = scalar_instance(NonlinearitySpec::rational_quartic());
  SolveOptions opts;
  opts.seed = 5;
  MountainPassOptions mp;
  mp.endpoint = GridFunction(1, 1, std::vector<double>{10.0});

  const SolveReport report = mountain_pass(inst, 2.0, mp, opts);
  CHECK(report.converged);
  CHECK(report.nontrivial);
  CHECK(report.residual_inf <= 1e-10);
  CHECK(std::abs(std::abs(report.u[0]) - std::sqrt(std::sqrt(2.0) - 1.0)) <= 1e-6);
  CHECK(std::abs(report.energy.total - (3.0 - 2.0 * std::sqrt(2.0))) <= 1e-6);
  CHECK(report.energy.total >= -10.0 * opts.grad_tol);
}

TEST_CASE("mountain pass rejects endpoints with nonnegative energy") {
  const ProblemInstance inst = scalar_instance(NonlinearitySpec::rational_quartic());
  SolveOptions opts;
  MountainPassOptions mp;
  mp.endpoint = GridFunction(1, 1, std::vector<double>{0.1});  // I(0.1) > 0
  try {
    mountain_pass(inst, 2.0, mp, opts);
    FAIL("expected EndpointNotBelowZero");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::endpoint_not_below_zero);
  }
}

TEST_CASE("mountain pass regime of the fourth existence mechanism on the unit grid") {
  const ProblemInstance inst = unit_instance(2, 2, NonlinearitySpec::rational_quartic());
  SolveOptions opts;
  opts.seed = 5;
  MountainPassOptions mp;  // endpoint auto-generated by amplitude doubling
  const SolveReport report = mountain_pass(inst, 3.0, mp, opts);
  CHECK(report.converged);
  CHECK(report.nontrivial);
  CHECK(report.residual_inf <= 1e-8);
  CHECK(report.energy.total > 0.0);
}

TEST_CASE("auto-generated endpoints have negative energy") {
  const ProblemInstance inst = unit_instance(2, 2, NonlinearitySpec::rational_quartic());
  const SystemMatrix m = assemble_M(inst.grid());
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const GridFunction endpoint = make_negative_energy_endpoint(inst, m, 3.0, seed);
    CHECK(energy(inst, m, endpoint, 3.0).total < 0.0);
  }
}

TEST_CASE("newton refinement, 1-D cubic softening") {
  const ProblemInstance inst = scalar_instance(NonlinearitySpec::cubic_softening());
  SolveOptions opts;

  const SolveReport from08 =
      newton_refine(inst, 2.0, GridFunction(1, 1, std::vector<double>{0.8}), opts);
  CHECK(from08.converged);
  CHECK(std::abs(from08.u[0] - 1.0) <= 1e-12);

  // A point that already solves the system is returned unchanged.
  const SolveReport fixed =
      newton_refine(inst, 2.0, GridFunction(1, 1, std::vector<double>{1.0}), opts);
  CHECK(fixed.converged);
  CHECK(fixed.iterations <= 1);
  CHECK(std::abs(fixed.u[0] - 1.0) <= 1e-12);
}

TEST_CASE("newton at the linear resonance: every point solves, none moves") {
  // f(t) = 2t, lambda = 1, M = [2]: the residual vanishes identically, so the
  // starting guess is already a root and the singular Jacobian is never formed.
  const ProblemInstance inst = scalar_instance(NonlinearitySpec::linear(2.0));
  SolveOptions opts;
  const SolveReport report =
      newton_refine(inst, 1.0, GridFunction(1, 1, std::vector<double>{0.5}), opts);
  CHECK(report.converged);
  CHECK(report.iterations <= 1);
  CHECK(report.u[0] == doctest::Approx(0.5));
}

TEST_CASE("newton recovers from an exactly singular Jacobian by a gradient step") {
  // cubic softening at lambda = 2: J = 2 - 2(2 - 3t^2) vanishes at t = 1/sqrt(3)
  // while the residual does not.
  const ProblemInstance inst = scalar_instance(NonlinearitySpec::cubic_softening());
  SolveOptions opts;
  const double t0 = 1.0 / std::sqrt(3.0);
  const SolveReport report =
      newton_refine(inst, 2.0, GridFunction(1, 1, std::vector<double>{t0}), opts);
  CHECK(report.converged);
  const double u = report.u[0];
  const bool at_root = std::abs(u) <= 1e-9 || std::abs(std::abs(u) - 1.0) <= 1e-9;
  CHECK(at_root);
}

TEST_CASE("newton raises SingularJacobian when fallbacks cannot escape") {
  // Linear kind at an eigenvalue of M, started on the corresponding
  // eigenvector: J = M - 3I is singular everywhere and the residual direction
  // reproduces itself, so every fallback fails.
  const ProblemInstance inst = unit_instance(2, 2, NonlinearitySpec::linear(1.0));
  const double b = (sqrt5() - 1.0) / 2.0;
  const double c = (3.0 - sqrt5()) / 2.0;
  GridFunction v(2, 2, std::vector<double>{1.0, b, b, c});
  SolveOptions opts;
  try {
    newton_refine(inst, 3.0, v, opts);
    FAIL("expected SingularJacobian");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::singular_jacobian);
  }
}

TEST_CASE("newton on the tabulated kind uses finite-difference derivatives") {
  // Table representing f(t) = 2t - t^3 sampled densely enough for Newton.
  std::vector<double> knots, values;
  for (int k = -40; k <= 40; ++k) {
    const double t = 0.1 * k;
    knots.push_back(t);
    values.push_back(2.0 * t - t * t * t);
  }
  const ProblemInstance inst =
      scalar_instance(NonlinearitySpec::tabulated(std::move(knots), std::move(values)));
  SolveOptions opts;
  opts.grad_tol = 1e-9;
  const SolveReport report =
      newton_refine(inst, 2.0, GridFunction(1, 1, std::vector<double>{0.8}), opts);
  CHECK(report.converged);
  CHECK(report.residual_inf <= 1e-9);
  CHECK(report.nontrivial);
}

TEST_CASE("converged reports re-verify against an independent residual") {
  Rng rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    const WeightGrid g = random_admissible_grid(rng, 4, 4);
    const ProblemInstance inst(WeightGrid(g), NonlinearitySpec::cubic_softening());
    SolveOptions opts;
    opts.seed = trial;
    const SolveReport report = minimize_global(inst, 2.0 + 0.3 * trial, opts);
    if (!report.converged) continue;
    const GridFunction r = residual(inst, report.u, report.lambda);
    CHECK(max_norm(r) <= 10.0 * opts.grad_tol);
    CHECK(report.nontrivial == (max_norm(report.u) > opts.nontrivial_tol));
  }
}

TEST_CASE("lambda sweep warm-starts and matches the closed form") {
  const ProblemInstance inst = scalar_instance(NonlinearitySpec::cubic_softening());
  MethodConfig config;
  config.method = SolveMethod::global_min;
  config.options.seed = 9;
  const std::vector<double> lambdas = {1.5, 2.0, 3.0};
  const auto entries = sweep_lambda(inst, lambdas, config, 1);
  REQUIRE(entries.size() == 3);
  for (std::size_t k = 0; k < 3; ++k) {
    REQUIRE(entries[k].report.has_value());
    const SolveReport& r = *entries[k].report;
    CHECK(r.converged);
    const double expect = std::sqrt(2.0 * (lambdas[k] - 1.0) / lambdas[k]);
    CHECK(std::abs(std::abs(r.u[0]) - expect) <= 1e-6);
  }
}

TEST_CASE("warm and cold sweeps agree on nontriviality") {
  const ProblemInstance inst = scalar_instance(NonlinearitySpec::cubic_softening());
  MethodConfig config;
  config.method = SolveMethod::global_min;
  config.options.seed = 11;
  const std::vector<double> lambdas = {0.5, 1.5, 2.0, 3.0};
  const auto warm = sweep_lambda(inst, lambdas, config, 1);
  const auto cold = sweep_lambda(inst, lambdas, config, 2);
  REQUIRE(warm.size() == cold.size());
  for (std::size_t k = 0; k < warm.size(); ++k) {
    REQUIRE(warm[k].report.has_value());
    REQUIRE(cold[k].report.has_value());
    CHECK(warm[k].report->nontrivial == cold[k].report->nontrivial);
  }
}

TEST_CASE("sweep rejects empty and unsorted lambda lists") {
  const ProblemInstance inst = scalar_instance(NonlinearitySpec::cubic_softening());
  MethodConfig config;
  try {
    sweep_lambda(inst, {}, config);
    FAIL("expected EmptySweep");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::empty_sweep);
  }
  CHECK_THROWS_AS(sweep_lambda(inst, {2.0, 1.0}, config), Error);
  CHECK_THROWS_AS(sweep_lambda(inst, {-1.0, 1.0}, config), Error);
}

TEST_CASE("per-entry sweep errors are recorded without stopping the sweep") {
  const ProblemInstance inst = scalar_instance(NonlinearitySpec::rational_quartic());
  MethodConfig config;
  config.method = SolveMethod::mountain_pass;
  config.options.seed = 1;
  // I(u) stays nonnegative for lambda <= 1 along every ray, so no endpoint
  // exists there and the entry must fail; larger lambdas still succeed.
  const auto entries = sweep_lambda(inst, {0.5, 2.0}, config, 1);
  REQUIRE(entries.size() == 2);
  CHECK(entries[0].error.has_value());
  REQUIRE(entries[1].report.has_value());
  CHECK(entries[1].report->converged);
}

TEST_CASE("options are validated") {
  SolveOptions bad;
  bad.armijo_c = 1.5;
  CHECK_THROWS_AS(bad.validate(), Error);
  SublevelOptions sub;
  sub.alpha = -1.0;
  CHECK_THROWS_AS(sub.validate(), Error);
  MountainPassOptions mp;
  mp.path_points = 2;
  CHECK_THROWS_AS(mp.validate(), Error);
}

}  // TEST_SUITE
