#include <cmath>

#include "doctest.h"

#include "elvar/energy.hpp"
#include "elvar/kernels.hpp"
#include "elvar/verify.hpp"
#include "test_support.hpp"

using namespace elvar;
using elvar::testing::unit_grid;
using elvar::testing::unit_instance;
using elvar::testing::scalar_instance;

namespace {

// One random closed-form instance per draw, cycling the whole catalog.
ProblemInstance random_instance(Rng& rng) {
  WeightGrid grid = random_admissible_grid(rng, 6, 6);
  const int pick = static_cast<int>(rng.next() % 6);
  NonlinearitySpec nl = [&]() {
    switch (pick) {
      case 0: return NonlinearitySpec::linear(rng.uniform(0.5, 3.0));
      case 1: return NonlinearitySpec::cubic_softening();
      case 2: return NonlinearitySpec::power(rng.uniform(0.5, 2.0), rng.uniform(1.2, 3.5));
      case 3: return NonlinearitySpec::rational_quartic();
      case 4: return NonlinearitySpec::damped_quadratic();
      default:
        return NonlinearitySpec::tabulated({-8.0, -4.0, -1.0, 0.0, 1.5, 4.0, 8.0},
                                           {-2.0, 1.0, -0.5, 0.0, 1.0, 0.5, 2.0});
    }
  }();
  if (rng.next() % 2 == 0) {
    std::vector<double> coeff(static_cast<std::size_t>(grid.m()) * grid.n());
    for (double& v : coeff) v = rng.uniform(0.2, 2.0);
    nl.with_coefficient(grid.m(), grid.n(), std::move(coeff));
  }
  return ProblemInstance(std::move(grid), std::move(nl));
}

}  // namespace

TEST_SUITE("energy") {

TEST_CASE("phi anchors") {
  const SystemMatrix m22 = assemble_M(unit_grid(2, 2));
  CHECK(phi(m22, GridFunction::constant(2, 2, 1.0)) == doctest::Approx(2.0));
  CHECK(phi(m22, GridFunction(2, 2)) == 0.0);

  const SystemMatrix m11 = assemble_M(unit_grid(1, 1));
  GridFunction u(1, 1, std::vector<double>{3.0});
  CHECK(phi(m11, u) == doctest::Approx(9.0));
}

TEST_CASE("psi anchors") {
  // F(t) = t^2 realized by the linear kind with slope 2.
  const ProblemInstance lin = unit_instance(2, 2, NonlinearitySpec::linear(2.0));
  CHECK(psi(lin, GridFunction::constant(2, 2, 1.0)) == doctest::Approx(4.0));
  CHECK(psi(lin, GridFunction(2, 2)) == 0.0);

  const ProblemInstance cubic = scalar_instance(NonlinearitySpec::cubic_softening());
  GridFunction u(1, 1, std::vector<double>{1.0});
  CHECK(psi(cubic, u) == doctest::Approx(0.75));
}

TEST_CASE("energy breakdown anchors") {
  const ProblemInstance cubic = scalar_instance(NonlinearitySpec::cubic_softening());
  const SystemMatrix m = assemble_M(cubic.grid());
  GridFunction u(1, 1, std::vector<double>{1.0});
  const EnergyBreakdown e = energy(cubic, m, u, 2.0);
  CHECK(e.phi == doctest::Approx(1.0));
  CHECK(e.psi == doctest::Approx(0.75));
  CHECK(e.total == doctest::Approx(-0.5));

  const EnergyBreakdown zero = energy(cubic, m, GridFunction(1, 1), 2.0);
  CHECK(zero.phi == 0.0);
  CHECK(zero.psi == 0.0);
  CHECK(zero.total == 0.0);

  const ProblemInstance rq = scalar_instance(NonlinearitySpec::rational_quartic());
  GridFunction ustar(1, 1, std::vector<double>{std::sqrt(std::sqrt(2.0) - 1.0)});
  const EnergyBreakdown saddle = energy(rq, m, ustar, 2.0);
  CHECK(saddle.total == doctest::Approx(3.0 - 2.0 * std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("gradient anchors") {
  const ProblemInstance lin = unit_instance(2, 2, NonlinearitySpec::linear(2.0));
  const SystemMatrix m = assemble_M(lin.grid());
  const GridFunction g = gradient(lin, m, GridFunction::constant(2, 2, 1.0), 0.5);
  CHECK(g[0] == doctest::Approx(-1.0));
  CHECK(g[1] == doctest::Approx(0.0));
  CHECK(g[2] == doctest::Approx(0.0));
  CHECK(g[3] == doctest::Approx(1.0));

  const ProblemInstance cubic = scalar_instance(NonlinearitySpec::cubic_softening());
  const SystemMatrix m11 = assemble_M(cubic.grid());
  GridFunction u(1, 1, std::vector<double>{1.0});
  CHECK(gradient(cubic, m11, u, 2.0)[0] == doctest::Approx(0.0));
  CHECK(gradient(cubic, m11, GridFunction(1, 1), 2.0)[0] == 0.0);
}

TEST_CASE("check_bounds anchors on the unit grid") {
  const SystemMatrix m = assemble_M(unit_grid(2, 2));
  const SpectrumSummary s = eigen_extremes(m);
  const EnergyBoundsReport ones = check_bounds(m, s, GridFunction::constant(2, 2, 1.0));
  CHECK(ones.lower == doctest::Approx(2.0 * (3.0 - std::sqrt(5.0))));
  CHECK(ones.phi_value == doctest::Approx(2.0));
  CHECK(ones.upper == doctest::Approx(2.0 * (3.0 + std::sqrt(5.0))));
  CHECK(ones.max_norm_sq == doctest::Approx(1.0));
  CHECK(ones.max_norm_bound == doctest::Approx(4.0 / (3.0 - std::sqrt(5.0))));
  CHECK(ones.pass);

  const EnergyBoundsReport zeros = check_bounds(m, s, GridFunction(2, 2));
  CHECK(zeros.pass);
  CHECK(zeros.phi_value == 0.0);
}

TEST_CASE("bounds hold on 1000 random (grid, U) pairs") {
  Rng rng(2718);
  for (int trial = 0; trial < 100; ++trial) {
    const SystemMatrix m = assemble_M(random_admissible_grid(rng, 6, 6));
    const SpectrumSummary s = eigen_extremes(m);
    for (int rep = 0; rep < 10; ++rep) {
      GridFunction u(1, m.order());
      for (int k = 0; k < m.order(); ++k) u[k] = rng.uniform(-4.0, 4.0);
      CHECK(check_bounds(m, s, u).pass);
    }
  }
}

TEST_CASE("gradient matches finite differences across the catalog") {
  Rng rng(31415);
  int checked = 0;
  for (int trial = 0; trial < 120; ++trial) {
    const ProblemInstance inst = random_instance(rng);
    const SystemMatrix m = assemble_M(inst.grid());
    const GridFunction u = random_grid_function(rng, inst.m(), inst.n(), 1.5);
    const double lambda = rng.uniform(0.1, 4.0);
    const GridFunction g = gradient(inst, m, u, lambda);
    const double h = 1e-6 * (1.0 + max_norm(u));
    for (int dir = 0; dir < 5; ++dir) {
      GridFunction d = random_grid_function(rng, inst.m(), inst.n(), 1.0);
      const double dn = euclidean_norm(d);
      if (dn == 0.0) continue;
      for (int k = 0; k < d.size(); ++k) d[k] /= dn;
      GridFunction up = u, um = u;
      for (int k = 0; k < u.size(); ++k) {
        up[k] += h * d[k];
        um[k] -= h * d[k];
      }
      double ep, em;
      try {
        ep = energy(inst, m, up, lambda).total;
        em = energy(inst, m, um, lambda).total;
      } catch (const Error&) {
        continue;  // stepped off a tabulated lattice
      }
      const double fd = (ep - em) / (2.0 * h);
      const double an = kernels::dot(g.size(), g.flat().data(), d.flat().data());
      CHECK(std::abs(fd - an) <= 1e-6 * std::max({1.0, std::abs(fd), std::abs(an)}));
      ++checked;
    }
  }
  CHECK(checked >= 500);
}

TEST_CASE("sup norm never exceeds the euclidean norm") {
  Rng rng(17);
  for (int trial = 0; trial < 500; ++trial) {
    const GridFunction u = random_grid_function(rng, 1 + static_cast<int>(rng.next() % 8),
                                                1 + static_cast<int>(rng.next() % 8), 10.0);
    CHECK(max_norm(u) <= euclidean_norm(u) * (1.0 + 1e-15));
  }
}

TEST_CASE("total is exactly phi minus lambda psi") {
  Rng rng(23);
  for (int trial = 0; trial < 50; ++trial) {
    const ProblemInstance inst = random_instance(rng);
    const SystemMatrix m = assemble_M(inst.grid());
    const GridFunction u = random_grid_function(rng, inst.m(), inst.n(), 1.0);
    const double lambda = rng.uniform(0.1, 3.0);
    const EnergyBreakdown e = energy(inst, m, u, lambda);
    CHECK(e.total == e.phi - lambda * e.psi);
    CHECK(e.phi >= 0.0);
  }
}

}  // TEST_SUITE
