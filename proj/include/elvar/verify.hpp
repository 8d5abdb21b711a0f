#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "elvar/grid_problem.hpp"
#include "elvar/rng.hpp"

namespace elvar {

struct VerifyResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// Runs every module's invariant suite against the loaded instance plus
/// seeded random grids for the generic properties. Each entry is one
/// pass/fail row of the `verify` subcommand.
std::vector<VerifyResult> run_verification(const ProblemInstance& instance, std::uint64_t seed);

/// Test-support generators shared by the verification suite, the unit tests
/// and the acceptance suite.
WeightGrid random_admissible_grid(Rng& rng, int max_m, int max_n);
GridFunction random_grid_function(Rng& rng, int m, int n, double amplitude);

}  // namespace elvar
