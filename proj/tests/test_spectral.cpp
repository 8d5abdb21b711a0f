#include <cmath>

#include "doctest.h"

#include "elvar/energy.hpp"
#include "elvar/kernels.hpp"
#include "elvar/spectral.hpp"
#include "elvar/verify.hpp"
#include "test_support.hpp"

using namespace elvar;
using elvar::testing::unit_grid;

TEST_SUITE("spectral") {

TEST_CASE("eigen extremes of the scalar matrix") {
  const SpectrumSummary s = eigen_extremes(assemble_M(unit_grid(1, 1)));
  CHECK(s.lambda_min == doctest::Approx(2.0));
  CHECK(s.lambda_max == doctest::Approx(2.0));
  CHECK(s.pd.positive_definite);
}

TEST_CASE("unit 2x2 spectrum anchors") {
  const SystemMatrix m = assemble_M(unit_grid(2, 2));
  const SpectrumSummary s = eigen_extremes(m);
  const double lo = 3.0 - std::sqrt(5.0);
  const double hi = 3.0 + std::sqrt(5.0);
  CHECK(std::abs(s.lambda_min - lo) <= 1e-10);
  CHECK(std::abs(s.lambda_max - hi) <= 1e-10);
  REQUIRE(s.full_spectrum.has_value());
  REQUIRE(s.full_spectrum->size() == 4);
  CHECK(std::abs((*s.full_spectrum)[0] - lo) <= 1e-10);
  CHECK(std::abs((*s.full_spectrum)[1] - 3.0) <= 1e-10);
  CHECK(std::abs((*s.full_spectrum)[2] - 3.0) <= 1e-10);
  CHECK(std::abs((*s.full_spectrum)[3] - hi) <= 1e-10);

  double sum = 0.0;
  for (double v : *s.full_spectrum) sum += v;
  CHECK(std::abs(sum - m.trace()) <= 1e-8 * m.trace());
}

TEST_CASE("trace identity on random grids") {
  Rng rng(2024);
  for (int trial = 0; trial < 25; ++trial) {
    const SystemMatrix m = assemble_M(random_admissible_grid(rng, 7, 7));
    const SpectrumSummary s = eigen_extremes(m);
    double sum = 0.0;
    for (double v : *s.full_spectrum) sum += v;
    CHECK(std::abs(sum - m.trace()) <= 1e-8 * std::abs(m.trace()));
  }
}

TEST_CASE("positive definiteness certificates") {
  const PdCertificate ok = certify_positive_definite(assemble_M(unit_grid(2, 2)));
  CHECK(ok.positive_definite);
  CHECK(ok.pivots.size() == 4);
  CHECK_FALSE(ok.first_nonpositive_pivot.has_value());

  const PdCertificate scalar = certify_positive_definite(assemble_M(unit_grid(1, 1)));
  CHECK(scalar.positive_definite);
  CHECK(scalar.pivots[0] == doctest::Approx(std::sqrt(2.0)));

  // Not constructible from any admissible grid; test-only input.
  const std::vector<double> zeros(16, 0.0);
  const PdCertificate bad = certify_positive_definite_dense(zeros, 4);
  CHECK_FALSE(bad.positive_definite);
  REQUIRE(bad.first_nonpositive_pivot.has_value());
  CHECK(*bad.first_nonpositive_pivot == 1);
}

TEST_CASE("certificate agrees with lambda_min over random admissible grids") {
  Rng rng(88);
  for (int trial = 0; trial < 40; ++trial) {
    const SystemMatrix m = assemble_M(random_admissible_grid(rng, 10, 10));
    const SpectrumSummary s = eigen_extremes(m);
    CHECK(s.pd.positive_definite == (s.lambda_min > 0.0));
    CHECK(s.pd.positive_definite);
  }
}

TEST_CASE("rayleigh quotient stays within the extremes") {
  Rng rng(99);
  const SystemMatrix m = assemble_M(random_admissible_grid(rng, 6, 6));
  const SpectrumSummary s = eigen_extremes(m);
  for (int trial = 0; trial < 300; ++trial) {
    GridFunction x(1, m.order());
    bool zero = true;
    for (int k = 0; k < m.order(); ++k) {
      x[k] = rng.uniform(-1.0, 1.0);
      zero = zero && x[k] == 0.0;
    }
    if (zero) continue;
    const double xx = kernels::dot(m.order(), x.flat().data(), x.flat().data());
    const double q = kernels::quadratic_form(m.order(), m.half_bandwidth(), m.bands().data(),
                                             x.flat().data()) /
                     xx;
    CHECK(q >= s.lambda_min - 1e-9 * std::abs(q));
    CHECK(q <= s.lambda_max + 1e-9 * std::abs(q));
  }
}

TEST_CASE("quadratic form lower bound anchors") {
  const WeightGrid g = unit_grid(2, 2);
  const QuadraticFormCheck ones = quadratic_form_lower_bound_check(g, GridFunction::constant(2, 2, 1.0));
  CHECK(ones.lhs == doctest::Approx(4.0));
  CHECK(ones.rhs == doctest::Approx(2.0));
  CHECK(ones.holds);
  CHECK_FALSE(ones.first_block_violation.has_value());

  const QuadraticFormCheck zeros = quadratic_form_lower_bound_check(g, GridFunction(2, 2));
  CHECK(zeros.lhs == 0.0);
  CHECK(zeros.rhs == 0.0);
  CHECK(zeros.holds);
}

TEST_CASE("lower bound holds for 500 random X on the unit grid") {
  Rng rng(123);
  const WeightGrid g = unit_grid(2, 2);
  for (int trial = 0; trial < 500; ++trial) {
    const GridFunction x = random_grid_function(rng, 2, 2, 4.0);
    const QuadraticFormCheck check = quadratic_form_lower_bound_check(g, x);
    CHECK(check.holds);
    CHECK_FALSE(check.first_block_violation.has_value());
  }
}

TEST_CASE("lower bound holds across random grids") {
  Rng rng(321);
  for (int trial = 0; trial < 400; ++trial) {
    const WeightGrid g = random_admissible_grid(rng, 8, 8);
    const GridFunction x = random_grid_function(rng, g.m(), g.n(), 3.0);
    const QuadraticFormCheck check = quadratic_form_lower_bound_check(g, x);
    CHECK(check.holds);
    CHECK(check.blocks.size() == static_cast<std::size_t>(g.n()));
    for (const auto& blk : check.blocks) CHECK(blk.holds);
  }
}

TEST_CASE("shape mismatch raises") {
  CHECK_THROWS_AS(quadratic_form_lower_bound_check(unit_grid(2, 2), GridFunction(3, 3)), Error);
}

}  // TEST_SUITE
