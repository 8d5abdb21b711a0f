#pragma once

#include <vector>

#include "elvar/grid_problem.hpp"

namespace elvar::testing {

inline WeightGrid unit_grid(int m, int n) {
  std::vector<double> entries(static_cast<std::size_t>(m + 1) * (n + 1), 0.0);
  for (int i = 1; i <= m; ++i)
    for (int j = 1; j <= n; ++j) entries[static_cast<std::size_t>(i) * (n + 1) + j] = 1.0;
  return WeightGrid(m, n, entries);
}

inline ProblemInstance unit_instance(int m, int n, NonlinearitySpec nl) {
  return ProblemInstance(unit_grid(m, n), std::move(nl));
}

// 1x1 grid with p(1,1) = 1, so M = [2].
inline ProblemInstance scalar_instance(NonlinearitySpec nl) {
  return unit_instance(1, 1, std::move(nl));
}

inline GridFunction constant_u(int m, int n, double v) { return GridFunction::constant(m, n, v); }

}  // namespace elvar::testing
