#include "elvar/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "elvar/assembly.hpp"
#include "elvar/cli_io.hpp"
#include "elvar/energy.hpp"
#include "elvar/json_io.hpp"
#include "elvar/kernels.hpp"
#include "elvar/solvers.hpp"
#include "elvar/spectral.hpp"

namespace elvar {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

// Sampling t for the f/F consistency check. Tabulated kinds sample away from
// the knots (the central difference of the exact piecewise primitive picks up
// an O(h) kink error that says nothing about consistency) and stay inside the
// lattice; power kinds with unbounded f'' near 0 sample away from the origin
// for the same reason.
double sample_t(const NonlinearitySpec& nl, Rng& rng) {
  if (nl.kind() == NonlinearityKind::power && nl.power_exponent() < 3.0) {
    while (true) {
      const double t = rng.uniform(-3.0, 3.0);
      if (std::abs(t) >= 1e-2) return t;
    }
  }
  if (nl.kind() != NonlinearityKind::tabulated) return rng.uniform(-3.0, 3.0);
  const auto& knots = nl.tabulated_t();
  const double margin = 1e-3;
  while (true) {
    const double t =
        rng.uniform(knots.front() + margin, knots.back() - margin);
    bool near_knot = false;
    for (double k : knots)
      if (std::abs(t - k) < margin) near_knot = true;
    if (!near_knot) return t;
  }
}

}  // namespace

WeightGrid random_admissible_grid(Rng& rng, int max_m, int max_n) {
  const int m = 1 + static_cast<int>(rng.next() % static_cast<std::uint64_t>(max_m));
  const int n = 1 + static_cast<int>(rng.next() % static_cast<std::uint64_t>(max_n));
  std::vector<double> entries(static_cast<std::size_t>(m + 1) * (n + 1), 0.0);
  for (int i = 1; i <= m; ++i)
    for (int j = 1; j <= n; ++j)
      entries[static_cast<std::size_t>(i) * (n + 1) + j] = std::exp(rng.uniform(-1.5, 1.5));
  return WeightGrid(m, n, std::move(entries));
}

GridFunction random_grid_function(Rng& rng, int m, int n, double amplitude) {
  GridFunction u(m, n);
  for (int k = 0; k < u.size(); ++k) u[k] = rng.uniform(-amplitude, amplitude);
  return u;
}

std::vector<VerifyResult> run_verification(const ProblemInstance& instance, std::uint64_t seed) {
  std::vector<VerifyResult> results;
  auto record = [&](const std::string& name, bool pass, const std::string& detail) {
    results.push_back({name, pass, detail});
  };

  const WeightGrid& grid = instance.grid();
  const int m = grid.m();
  const int n = grid.n();
  const SystemMatrix matrix = assemble_M(grid);
  const SpectrumSummary spectrum = eigen_extremes(matrix);

  {  // flatten/unflatten bijection, instance shape plus random shapes to 20
    Rng rng(seed ^ 0x01);
    bool ok = true;
    auto check_shape = [&](int mm, int nn) {
      for (int k = 1; k <= mm * nn && ok; ++k) {
        const auto [i, j] = unflatten_index(k, mm);
        ok = flatten_index(i, j, mm) == k && i >= 1 && i <= mm && j >= 1 && j <= nn;
      }
    };
    check_shape(m, n);
    for (int trial = 0; trial < 25 && ok; ++trial)
      check_shape(1 + static_cast<int>(rng.next() % 20), 1 + static_cast<int>(rng.next() % 20));
    record("flatten_bijection", ok, "identity on [1,mn] for the instance and 25 random shapes");
  }

  {  // f / F consistency via central differences
    Rng rng(seed ^ 0x02);
    const NonlinearitySpec& nl = instance.nonlinearity();
    double worst = 0.0;
    bool ok = true;
    for (int trial = 0; trial < 1000; ++trial) {
      const int i = 1 + static_cast<int>(rng.next() % static_cast<std::uint64_t>(m));
      const int j = 1 + static_cast<int>(rng.next() % static_cast<std::uint64_t>(n));
      const double t = sample_t(nl, rng);
      const double h = 1e-5 * std::max(1.0, std::abs(t));
      double fd;
      try {
        fd = (instance.eval_F(i, j, t + h) - instance.eval_F(i, j, t - h)) / (2.0 * h);
      } catch (const Error&) {
        continue;  // stepped off a tabulated lattice edge
      }
      const double err = std::abs(fd - instance.eval_f(i, j, t));
      worst = std::max(worst, err);
      if (err > 1e-5) ok = false;
    }
    record("primitive_consistency", ok,
           "max |dF/dt - f| = " + fmt(worst) + " over 1000 samples (tol 1e-5)");
  }

  {  // constructor rejects mutated weight tables
    bool ok = true;
    std::vector<double> table = grid.table();
    {
      auto bad = table;
      bad[static_cast<std::size_t>(0) * (n + 1) + 1] = 0.5;  // p(0,1) nonzero
      try {
        WeightGrid reject(m, n, bad);
        ok = false;
      } catch (const Error& e) {
        ok = ok && e.code() == Errc::boundary_weight_nonzero;
      }
    }
    {
      auto bad = table;
      bad[static_cast<std::size_t>(1) * (n + 1) + 1] = -1.0;  // p(1,1) negative
      try {
        WeightGrid reject(m, n, bad);
        ok = false;
      } catch (const Error& e) {
        ok = ok && e.code() == Errc::nonpositive_interior_weight;
      }
    }
    record("weight_validation_rejects_mutations", ok,
           "boundary-zero and interior-positivity violations both rejected");
  }

  {  // stencil route vs matrix route
    Rng rng(seed ^ 0x03);
    double worst = 0.0;
    const double scale = matrix.inf_norm();
    for (int trial = 0; trial < 50; ++trial) {
      const GridFunction u = random_grid_function(rng, m, n, 2.0);
      const GridFunction a = apply_stencil(grid, u);
      const GridFunction b = matvec(matrix, u);
      double diff = 0.0;
      for (int k = 0; k < a.size(); ++k) diff = std::max(diff, std::abs(a[k] - b[k]));
      const double denom = scale * std::max(1e-300, max_norm(u));
      worst = std::max(worst, diff / denom);
    }
    record("stencil_matrix_equivalence", worst <= 1e-12,
           "max scaled deviation " + fmt(worst) + " over 50 random U (tol 1e-12)");
  }

  {  // bandedness: nonzeros only at offsets {-m,-1,0,1,m}
    bool ok = true;
    for (int k = 0; k < matrix.order() && ok; ++k)
      for (int l = 0; l < matrix.order() && ok; ++l) {
        const int d = std::abs(k - l);
        if (d != 0 && d != 1 && d != m && matrix.at(k, l) != 0.0) ok = false;
        if (d > m && matrix.at(k, l) != 0.0) ok = false;
      }
    record("matrix_bandedness", ok, "couplings only at offsets {0, 1, m}");
  }

  {  // residual == stencil - lambda * H, bit for bit
    Rng rng(seed ^ 0x04);
    bool ok = true;
    for (int trial = 0; trial < 20 && ok; ++trial) {
      const GridFunction u = random_grid_function(rng, m, n, 1.5);
      const double lambda = rng.uniform(0.1, 4.0);
      const GridFunction r = residual(instance, u, lambda);
      const GridFunction a = apply_stencil(grid, u);
      const GridFunction h = nonlinear_map(instance, u);
      for (int k = 0; k < r.size(); ++k)
        if (r[k] != a[k] - lambda * h[k]) ok = false;
    }
    record("residual_definition_coherence", ok,
           "residual equals apply_stencil - lambda*nonlinear_map componentwise");
  }

  {  // PD certificate vs spectrum
    const bool agree = spectrum.pd.positive_definite == (spectrum.lambda_min > 0.0);
    record("pd_certificate_and_lambda_min", spectrum.pd.positive_definite && agree,
           "pd=" + std::string(spectrum.pd.positive_definite ? "true" : "false") +
               ", lambda_min=" + fmt(spectrum.lambda_min));
  }

  {  // trace identity
    const double tr = matrix.trace();
    double sum = 0.0;
    for (double v : *spectrum.full_spectrum) sum += v;
    const bool ok = std::abs(sum - tr) <= 1e-8 * std::abs(tr);
    record("trace_identity", ok, "sum(spectrum) - trace = " + fmt(sum - tr));
  }

  {  // Rayleigh quotient bounds
    Rng rng(seed ^ 0x05);
    bool ok = true;
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
      GridFunction x = random_grid_function(rng, m, n, 1.0);
      const double xx = kernels::dot(x.size(), x.flat().data(), x.flat().data());
      if (xx == 0.0) continue;
      const double q = kernels::quadratic_form(matrix.order(), matrix.half_bandwidth(),
                                               matrix.bands().data(), x.flat().data()) /
                       xx;
      const double slack = 1e-9 * std::abs(q);
      if (q < spectrum.lambda_min - slack || q > spectrum.lambda_max + slack) ok = false;
      worst = std::max({worst, spectrum.lambda_min - q, q - spectrum.lambda_max});
    }
    record("rayleigh_quotient_bounds", ok,
           "200 random Rayleigh quotients inside [lambda_min, lambda_max]");
  }

  {  // the positive-definiteness proof inequalities
    Rng rng(seed ^ 0x06);
    bool ok = true;
    for (int trial = 0; trial < 2000 && ok; ++trial) {
      const GridFunction x = random_grid_function(rng, m, n, 2.0);
      const QuadraticFormCheck check = quadratic_form_lower_bound_check(grid, x);
      ok = check.holds && !check.first_block_violation;
    }
    record("quadratic_form_lower_bound", ok, "2000 random X, block and full inequalities");
  }

  {  // energy norm bounds (3.15)/(3.16)
    Rng rng(seed ^ 0x07);
    bool ok = true;
    for (int trial = 0; trial < 500 && ok; ++trial) {
      const GridFunction u = random_grid_function(rng, m, n, 3.0);
      ok = check_bounds(matrix, spectrum, u).pass;
    }
    record("energy_norm_bounds", ok, "500 random U against both inequality chains");
  }

  {  // sup norm <= euclidean norm
    Rng rng(seed ^ 0x08);
    bool ok = true;
    for (int trial = 0; trial < 500 && ok; ++trial) {
      const GridFunction u = random_grid_function(rng, m, n, 5.0);
      ok = max_norm(u) <= euclidean_norm(u) + 1e-15;
    }
    record("sup_norm_vs_euclidean", ok, "500 random U");
  }

  {  // finite-difference gradient check
    Rng rng(seed ^ 0x09);
    bool ok = true;
    double worst = 0.0;
    for (int trial = 0; trial < 50 && ok; ++trial) {
      const GridFunction u = random_grid_function(rng, m, n, 1.0);
      const double lambda = rng.uniform(0.1, 3.0);
      const GridFunction g = gradient(instance, matrix, u, lambda);
      const double h = 1e-6 * (1.0 + max_norm(u));
      for (int dir = 0; dir < 5; ++dir) {
        GridFunction d = random_grid_function(rng, m, n, 1.0);
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
          ep = energy(instance, matrix, up, lambda).total;
          em = energy(instance, matrix, um, lambda).total;
        } catch (const Error&) {
          continue;  // tabulated lattice edge
        }
        const double fd = (ep - em) / (2.0 * h);
        const double an = kernels::dot(g.size(), g.flat().data(), d.flat().data());
        const double scale = std::max({1.0, std::abs(fd), std::abs(an)});
        const double err = std::abs(fd - an) / scale;
        worst = std::max(worst, err);
        if (err > 1e-6) ok = false;
      }
    }
    record("gradient_finite_difference", ok,
           "max relative deviation " + fmt(worst) + " over 50 U x 5 directions (tol 1e-6)");
  }

  {  // definitional identity total == phi - lambda*psi
    Rng rng(seed ^ 0x0a);
    bool ok = true;
    for (int trial = 0; trial < 20 && ok; ++trial) {
      const GridFunction u = random_grid_function(rng, m, n, 1.0);
      const double lambda = rng.uniform(0.1, 3.0);
      const EnergyBreakdown e = energy(instance, matrix, u, lambda);
      ok = e.total == e.phi - lambda * e.psi;
    }
    record("energy_definitional_identity", ok, "bit-for-bit with one evaluation order");
  }

  {  // serial reference vs parallel kernels
    Rng rng(seed ^ 0x0b);
    bool ok = true;
    const GridFunction x = random_grid_function(rng, m, n, 1.0);
    std::vector<double> y_par(static_cast<std::size_t>(matrix.order()));
    std::vector<double> y_ser(static_cast<std::size_t>(matrix.order()));
    kernels::banded_matvec(matrix.order(), matrix.half_bandwidth(), matrix.bands().data(),
                           x.flat().data(), y_par.data());
    kernels::serial::banded_matvec(matrix.order(), matrix.half_bandwidth(),
                                   matrix.bands().data(), x.flat().data(), y_ser.data());
    for (int k = 0; k < matrix.order(); ++k)
      if (std::abs(y_par[static_cast<std::size_t>(k)] - y_ser[static_cast<std::size_t>(k)]) >
          1e-13 * std::max(1.0, std::abs(y_ser[static_cast<std::size_t>(k)])))
        ok = false;
    auto jac_par =
        kernels::jacobi_eigenvalues(matrix.dense(), matrix.order(), 100, 1e-12);
    auto jac_ser =
        kernels::serial::jacobi_eigenvalues(matrix.dense(), matrix.order(), 100, 1e-12);
    std::sort(jac_par.eigenvalues.begin(), jac_par.eigenvalues.end());
    std::sort(jac_ser.eigenvalues.begin(), jac_ser.eigenvalues.end());
    const double scale = std::max(1.0, std::abs(jac_ser.eigenvalues.back()));
    for (std::size_t k = 0; k < jac_par.eigenvalues.size(); ++k)
      if (std::abs(jac_par.eigenvalues[k] - jac_ser.eigenvalues[k]) > 1e-9 * scale) ok = false;
    record("kernel_serial_parallel_agreement", ok,
           "matvec and Jacobi eigenvalues agree between reference and parallel paths");
  }

  {  // report round-trip at 17 significant digits
    const nlohmann::ordered_json emitted = spectrum_to_json(spectrum, matrix.trace(), true);
    const std::string text = dump_json_17(emitted);
    const SpectrumSummary parsed = spectrum_from_json(nlohmann::json::parse(text));
    const bool ok = parsed.lambda_min == spectrum.lambda_min &&
                    parsed.lambda_max == spectrum.lambda_max &&
                    parsed.full_spectrum == spectrum.full_spectrum;
    record("report_roundtrip", ok, "emit/parse restores every number exactly");
  }

  {  // solver report consistency on a short Newton run
    Rng rng(seed ^ 0x0c);
    SolveOptions opts;
    opts.grad_tol = 1e-9;
    const GridFunction u0 = random_grid_function(rng, m, n, 0.5);
    bool ok = true;
    std::string detail;
    try {
      const SolveReport report = newton_refine(instance, 1.0, u0, opts);
      const GridFunction r = residual(instance, report.u, 1.0);
      const double rn = max_norm(r);
      if (report.converged && rn > 10.0 * opts.grad_tol) ok = false;
      if (report.nontrivial != (max_norm(report.u) > opts.nontrivial_tol)) ok = false;
      detail = report.converged ? "converged, independent residual " + fmt(rn)
                                : "did not converge (allowed); flags consistent";
    } catch (const Error& e) {
      detail = std::string("solver error tolerated: ") + e.what();
    }
    record("newton_report_consistency", ok, detail);
  }

  return results;
}

}  // namespace elvar
