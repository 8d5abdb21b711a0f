#include <cmath>
#include <random>

#include "doctest.h"

#include "elvar/grid_problem.hpp"

using namespace elvar;

namespace {

WeightGrid unit_grid(int m, int n) {
  std::vector<double> entries(static_cast<std::size_t>(m + 1) * (n + 1), 0.0);
  for (int i = 1; i <= m; ++i)
    for (int j = 1; j <= n; ++j) entries[static_cast<std::size_t>(i) * (n + 1) + j] = 1.0;
  return WeightGrid(m, n, entries);
}

}  // namespace

TEST_SUITE("grid_problem") {

TEST_CASE("smallest admissible grid") {
  const WeightGrid g(1, 1, {0.0, 0.0, 0.0, 1.0});
  CHECK(g.m() == 1);
  CHECK(g.p(1, 1) == 1.0);
  CHECK(g.p(0, 1) == 0.0);
}

TEST_CASE("unit 2x2 grid is valid") {
  const WeightGrid g = unit_grid(2, 2);
  CHECK(g.p(2, 2) == 1.0);
  CHECK(g.p(0, 2) == 0.0);
  CHECK(g.p(2, 0) == 0.0);
}

TEST_CASE("boundary weight violations are rejected with the named error") {
  // p(0,1) = 0.5 violates the left boundary line.
  std::vector<double> entries = {0.0, 0.5, 0.0, 0.0, 1.0, 1.0, 0.0, 1.0, 1.0};
  try {
    WeightGrid g(2, 2, entries);
    FAIL("expected BoundaryWeightNonzero");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::boundary_weight_nonzero);
  }
}

TEST_CASE("nonpositive interior weights are rejected") {
  std::vector<double> entries = {0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 1.0, 1.0};
  try {
    WeightGrid g(2, 2, entries);
    FAIL("expected NonpositiveInteriorWeight");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::nonpositive_interior_weight);
  }
}

TEST_CASE("p(0,0) is unconstrained") {
  std::vector<double> entries = {7.5, 0.0, 0.0, 0.0, 1.0, 1.0, 0.0, 1.0, 1.0};
  const WeightGrid g(2, 2, entries);
  CHECK(g.p(0, 0) == 7.5);
}

TEST_CASE("table size and finiteness are validated") {
  CHECK_THROWS_AS(WeightGrid(2, 2, {0.0, 1.0}), Error);
  std::vector<double> nan_table = {0.0, 0.0, 0.0, std::nan("")};
  CHECK_THROWS_AS(WeightGrid(1, 1, nan_table), Error);
}

TEST_CASE("flatten_index matches the block stacking") {
  CHECK(flatten_index(1, 1, 2) == 1);
  CHECK(flatten_index(2, 1, 2) == 2);
  CHECK(flatten_index(1, 2, 2) == 3);
  CHECK_THROWS_AS(flatten_index(3, 1, 2), Error);
  CHECK_THROWS_AS(flatten_index(0, 1, 2), Error);
}

TEST_CASE("flatten/unflatten bijection on random shapes") {
  std::mt19937_64 gen(1234);
  for (int trial = 0; trial < 50; ++trial) {
    const int m = 1 + static_cast<int>(gen() % 20);
    const int n = 1 + static_cast<int>(gen() % 20);
    for (int k = 1; k <= m * n; ++k) {
      const auto [i, j] = unflatten_index(k, m);
      CHECK(flatten_index(i, j, m) == k);
      CHECK(i >= 1);
      CHECK(i <= m);
      CHECK(j >= 1);
      CHECK(j <= n);
    }
  }
}

TEST_CASE("eval_f catalog values") {
  const NonlinearitySpec cubic = NonlinearitySpec::cubic_softening();
  CHECK(cubic.eval_f(1, 1, 1.0) == doctest::Approx(1.0));  // 2*1 - 1

  const NonlinearitySpec pw = NonlinearitySpec::power(1.5, 1.5);
  CHECK(pw.eval_f(1, 1, 0.0) == 0.0);

  NonlinearitySpec lin = NonlinearitySpec::linear(2.0);
  lin.with_coefficient(1, 1, {5.0});
  CHECK(lin.eval_f(1, 1, 2.0) == doctest::Approx(20.0));
}

TEST_CASE("eval_F catalog values") {
  const NonlinearitySpec cubic = NonlinearitySpec::cubic_softening();
  CHECK(cubic.eval_F(1, 1, 1.0) == doctest::Approx(0.75));
  CHECK(cubic.eval_F(1, 1, 0.0) == 0.0);
  CHECK(NonlinearitySpec::rational_quartic().eval_F(2, 2, 0.0) == 0.0);
  CHECK(NonlinearitySpec::damped_quadratic().eval_F(1, 1, 0.0) == 0.0);
}

TEST_CASE("quadrature primitive agrees with the closed form") {
  NonlinearitySpec lin = NonlinearitySpec::linear(2.0);
  lin.with_primitive_mode(PrimitiveMode::quadrature);
  CHECK(std::abs(lin.eval_F(1, 1, 3.0) - 9.0) <= 1e-10);
  // Negative upper limits integrate backwards.
  CHECK(std::abs(lin.eval_F(1, 1, -3.0) - 9.0) <= 1e-10);

  NonlinearitySpec pw = NonlinearitySpec::power(1.5, 1.5);
  pw.with_primitive_mode(PrimitiveMode::quadrature);
  const NonlinearitySpec pw_cf = NonlinearitySpec::power(1.5, 1.5);
  for (double t : {-2.0, -0.3, 0.4, 1.7}) CHECK(std::abs(pw.F(t) - pw_cf.F(t)) <= 1e-9);
}

TEST_CASE("derivative consistency across the closed-form catalog") {
  std::mt19937_64 gen(99);
  std::uniform_real_distribution<double> tdist(-3.0, 3.0);
  const NonlinearitySpec kinds[] = {
      NonlinearitySpec::linear(2.0),        NonlinearitySpec::cubic_softening(),
      NonlinearitySpec::power(1.5, 1.5),    NonlinearitySpec::power(1.0, 4.0),
      NonlinearitySpec::rational_quartic(), NonlinearitySpec::damped_quadratic(),
  };
  for (const auto& nl : kinds) {
    for (int trial = 0; trial < 1000; ++trial) {
      const double t = tdist(gen);
      const double h = 1e-5 * std::max(1.0, std::abs(t));
      const double fd = (nl.F(t + h) - nl.F(t - h)) / (2.0 * h);
      CHECK(std::abs(fd - nl.f(t)) <= 1e-5);
    }
  }
}

TEST_CASE("closed-form f' matches finite differences away from kinks") {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> tdist(-2.5, 2.5);
  const NonlinearitySpec kinds[] = {
      NonlinearitySpec::linear(2.0), NonlinearitySpec::cubic_softening(),
      NonlinearitySpec::rational_quartic(), NonlinearitySpec::damped_quadratic()};
  for (const auto& nl : kinds) {
    for (int trial = 0; trial < 200; ++trial) {
      double t = tdist(gen);
      if (nl.kind() == NonlinearityKind::damped_quadratic && std::abs(t) < 1e-3)
        t += 0.01;  // f' of the damped kind has an |t| kink in f'' at 0
      const double h = 1e-6 * (1.0 + std::abs(t));
      const double fd = (nl.f(t + h) - nl.f(t - h)) / (2.0 * h);
      const auto fp = nl.f_derivative(t);
      REQUIRE(fp.has_value());
      CHECK(std::abs(*fp - fd) <= 1e-4 * std::max(1.0, std::abs(fd)));
    }
  }
}

TEST_CASE("tabulated kind interpolates, integrates exactly, and range-checks") {
  // f(t) = t on the lattice, so F(t) = t^2/2.
  NonlinearitySpec tab =
      NonlinearitySpec::tabulated({-2.0, -1.0, 0.0, 1.0, 2.0}, {-2.0, -1.0, 0.0, 1.0, 2.0});
  CHECK(tab.f(0.5) == doctest::Approx(0.5));
  CHECK(tab.f(-1.25) == doctest::Approx(-1.25));
  CHECK(tab.F(1.5) == doctest::Approx(1.125));
  CHECK(tab.F(-2.0) == doctest::Approx(2.0));
  CHECK(tab.F(0.0) == 0.0);
  try {
    tab.f(2.5);
    FAIL("expected TabulatedOutOfRange");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::tabulated_out_of_range);
  }
  // Lattices that do not bracket zero cannot anchor F.
  CHECK_THROWS_AS(NonlinearitySpec::tabulated({1.0, 2.0}, {1.0, 2.0}), Error);
  // Quadrature mode agrees with the exact piecewise integral.
  NonlinearitySpec tq =
      NonlinearitySpec::tabulated({-2.0, -1.0, 0.0, 1.0, 2.0}, {0.5, -1.0, 0.0, 2.0, 1.0});
  NonlinearitySpec tcf = tq;
  tq.with_primitive_mode(PrimitiveMode::quadrature);
  for (double t : {-1.9, -0.4, 0.3, 1.2, 2.0}) CHECK(std::abs(tq.F(t) - tcf.F(t)) <= 1e-9);
}

TEST_CASE("power exponent must keep f continuous") {
  CHECK_THROWS_AS(NonlinearitySpec::power(1.0, 1.0), Error);
  CHECK_THROWS_AS(NonlinearitySpec::power(1.0, 0.5), Error);
}

TEST_CASE("mutating a valid table is rejected exactly at the broken constraint") {
  std::mt19937_64 gen(4242);
  std::uniform_real_distribution<double> wdist(0.1, 5.0);
  for (int trial = 0; trial < 50; ++trial) {
    const int m = 1 + static_cast<int>(gen() % 6);
    const int n = 1 + static_cast<int>(gen() % 6);
    std::vector<double> entries(static_cast<std::size_t>(m + 1) * (n + 1), 0.0);
    for (int i = 1; i <= m; ++i)
      for (int j = 1; j <= n; ++j)
        entries[static_cast<std::size_t>(i) * (n + 1) + j] = wdist(gen);
    CHECK_NOTHROW(WeightGrid(m, n, entries));

    auto bad = entries;
    const int j = 1 + static_cast<int>(gen() % n);
    bad[static_cast<std::size_t>(0) * (n + 1) + j] = wdist(gen);
    CHECK_THROWS_AS(WeightGrid(m, n, bad), Error);

    bad = entries;
    const int i = 1 + static_cast<int>(gen() % m);
    bad[static_cast<std::size_t>(i) * (n + 1) + 0] = wdist(gen);
    CHECK_THROWS_AS(WeightGrid(m, n, bad), Error);

    bad = entries;
    const int ii = 1 + static_cast<int>(gen() % m);
    const int jj = 1 + static_cast<int>(gen() % n);
    bad[static_cast<std::size_t>(ii) * (n + 1) + jj] = -wdist(gen);
    CHECK_THROWS_AS(WeightGrid(m, n, bad), Error);
  }
}

TEST_CASE("coefficient tables must match the grid shape") {
  WeightGrid grid = unit_grid(2, 2);
  NonlinearitySpec nl = NonlinearitySpec::linear(2.0);
  nl.with_coefficient(3, 2, std::vector<double>(6, 1.0));
  CHECK_THROWS_AS(ProblemInstance(std::move(grid), std::move(nl)), Error);
}

TEST_CASE("grid function storage follows the flattening") {
  GridFunction u(2, 2);
  u.at(1, 1) = 10.0;
  u.at(2, 1) = 20.0;
  u.at(1, 2) = 30.0;
  u.at(2, 2) = 40.0;
  CHECK(u[0] == 10.0);
  CHECK(u[1] == 20.0);
  CHECK(u[2] == 30.0);
  CHECK(u[3] == 40.0);
  CHECK_THROWS_AS(u.at(3, 1), Error);
  CHECK_THROWS_AS(u.at(1, 0), Error);
}

}  // TEST_SUITE
