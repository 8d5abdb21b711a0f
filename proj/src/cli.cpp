#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"

#include "elvar/cli_io.hpp"
#include "elvar/json_io.hpp"
#include "elvar/rng.hpp"
#include "elvar/verify.hpp"

namespace elvar {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitNonconvergence = 2;
constexpr int kExitInternal = 3;

int exit_code_for(Errc code) {
  switch (code) {
    case Errc::jacobi_nonconvergent:
    case Errc::quadrature_nonconvergent:
    case Errc::singular_jacobian:
    case Errc::max_iters_exceeded:
      return kExitNonconvergence;
    case Errc::parse_error:
    case Errc::validation_error:
    case Errc::invalid_argument:
    case Errc::range_invalid:
    case Errc::index_out_of_range:
    case Errc::shape_mismatch:
    case Errc::boundary_weight_nonzero:
    case Errc::nonpositive_interior_weight:
    case Errc::tabulated_out_of_range:
    case Errc::empty_sweep:
    case Errc::nonpositive_denominator:
    case Errc::endpoint_not_below_zero:
      return kExitValidation;
  }
  return kExitInternal;
}

void write_output(const std::string& out_path, const std::string& payload) {
  if (out_path.empty()) {
    std::cout << payload;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) raise(Errc::invalid_argument, "cannot open output file '" + out_path + "'");
  out << payload;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(Errc::parse_error, "cannot open file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

struct CliState {
  std::string problem_path;
  std::string out_path;
  double lambda = 0.0;
  std::string method = "global";
  SolveOptions opts;
  double alpha = 1.0;
  double shrink_eps = 1e-3;
  long path_points = 64;
  long deform_steps = 10000;
  std::string endpoint_file;
  std::string start_file;
  bool trace = false;
  std::vector<double> lambdas;
  int threads = 1;
  std::string csv_path;
  bool full_spectrum = false;
  std::string params_file;
  double c = 0.0, eta = 0.0, a = 0.0, b = 0.0, T = 0.0, growth = 0.0, cap_a = 0.0;
  double alpha_minus = 0.0, beta_h5 = 0.0, m_cut = 0.0;
  std::vector<std::string> hypotheses;
  double t_lo = 1e-8, t_hi = 1e-1;
  int samples = 200;
};

std::vector<double> broadcast_table(double value, int m, int n) {
  return std::vector<double>(static_cast<std::size_t>(m) * n, value);
}

std::vector<double> table_from_json(const nlohmann::json& node, int m, int n,
                                    const std::string& key) {
  if (node.is_number()) return broadcast_table(node.get<double>(), m, n);
  if (!node.is_array() || static_cast<int>(node.size()) != m)
    raise(Errc::validation_error, "/" + key + ": expected a scalar or an m x n array");
  std::vector<double> out;
  for (int i = 0; i < m; ++i) {
    const auto& row = node[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<int>(row.size()) != n)
      raise(Errc::validation_error, "/" + key + "/" + std::to_string(i) + ": expected n numbers");
    for (int j = 0; j < n; ++j) out.push_back(row[static_cast<std::size_t>(j)].get<double>());
  }
  return out;
}

// Hypothesis constants from --params JSON merged with scalar flags
// (flags win; scalar alpha/beta broadcast to full tables).
HypothesisParams build_params(const CliState& st, const CLI::App* sub,
                              const ProblemInstance& instance) {
  HypothesisParams params;
  const int m = instance.m();
  const int n = instance.n();
  if (!st.params_file.empty()) {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(read_file(st.params_file));
    } catch (const nlohmann::json::parse_error& e) {
      raise(Errc::parse_error, e.what());
    }
    if (!doc.is_object()) raise(Errc::validation_error, "/: params file must hold an object");
    auto scalar = [&](const char* key) -> std::optional<double> {
      if (auto it = doc.find(key); it != doc.end() && !it->is_null())
        return it->get<double>();
      return std::nullopt;
    };
    params.c = scalar("c");
    params.eta = scalar("eta");
    params.a = scalar("a");
    params.b = scalar("b");
    params.T = scalar("T");
    params.growth = scalar("growth");
    params.A = scalar("A");
    params.M_cut = scalar("M");
    if (auto it = doc.find("alpha_table"); it != doc.end() && !it->is_null())
      params.alpha_table = table_from_json(*it, m, n, "alpha_table");
    if (auto it = doc.find("beta_table"); it != doc.end() && !it->is_null())
      params.beta_table = table_from_json(*it, m, n, "beta_table");
  }
  auto flag = [&](const char* name, double value) -> std::optional<double> {
    return sub->count(name) > 0 ? std::optional<double>(value) : std::nullopt;
  };
  if (auto v = flag("--c", st.c)) params.c = v;
  if (auto v = flag("--eta", st.eta)) params.eta = v;
  if (auto v = flag("--a", st.a)) params.a = v;
  if (auto v = flag("--b", st.b)) params.b = v;
  if (auto v = flag("--T", st.T)) params.T = v;
  if (auto v = flag("--growth", st.growth)) params.growth = v;
  if (auto v = flag("--A", st.cap_a)) params.A = v;
  if (auto v = flag("--m-cut", st.m_cut)) params.M_cut = v;
  if (auto v = flag("--alpha-minus", st.alpha_minus)) params.alpha_table = broadcast_table(*v, m, n);
  if (auto v = flag("--beta", st.beta_h5)) params.beta_table = broadcast_table(*v, m, n);
  params.validate(m, n);
  return params;
}

double resolve_lambda(const CliState& st, const CLI::App* sub, const ProblemFile& file) {
  double lambda = 0.0;
  if (sub->count("--lambda") > 0)
    lambda = st.lambda;
  else if (file.lambda)
    lambda = *file.lambda;
  else
    raise(Errc::invalid_argument, "lambda required (pass --lambda or set it in the problem file)");
  if (!(lambda > 0.0)) raise(Errc::invalid_argument, "lambda must be positive");
  return lambda;
}

MethodConfig build_method_config(const CliState& st) {
  MethodConfig config;
  config.method = solve_method_from_name(st.method);
  config.options = st.opts;
  config.options.record_trace = st.trace;
  config.sublevel.alpha = st.alpha;
  config.sublevel.shrink_eps = st.shrink_eps;
  config.mountain.path_points = static_cast<int>(st.path_points);
  config.mountain.deform_steps = st.deform_steps;
  if (!st.endpoint_file.empty()) {
    const nlohmann::json doc = nlohmann::json::parse(read_file(st.endpoint_file));
    config.mountain.endpoint = grid_function_from_json(doc);
  }
  return config;
}

int cmd_solve(const CliState& st, const CLI::App* sub) {
  const ProblemFile file = load_problem(st.problem_path);
  const double lambda = resolve_lambda(st, sub, file);
  const MethodConfig config = build_method_config(st);

  SolveReport report = [&]() {
    switch (config.method) {
      case SolveMethod::global_min:
        return minimize_global(file.instance, lambda, config.options);
      case SolveMethod::sublevel_min:
        return minimize_sublevel(file.instance, lambda, config.sublevel, config.options);
      case SolveMethod::mountain_pass:
        return mountain_pass(file.instance, lambda, config.mountain, config.options);
      case SolveMethod::newton: {
        GridFunction u0(file.instance.m(), file.instance.n());
        if (!st.start_file.empty()) {
          u0 = grid_function_from_json(nlohmann::json::parse(read_file(st.start_file)));
        } else {
          Rng rng(config.options.seed);
          for (int k = 0; k < u0.size(); ++k) u0[k] = rng.uniform(-2.0, 2.0);
        }
        return newton_refine(file.instance, lambda, u0, config.options);
      }
    }
    raise(Errc::invalid_argument, "unknown method");
  }();

  write_output(st.out_path, dump_json_17(to_json(report)));
  std::fprintf(stderr, "%s: lambda=%g converged=%s nontrivial=%s residual_inf=%.3e energy=%.9g\n",
               std::string(solve_method_name(report.method)).c_str(), lambda,
               report.converged ? "true" : "false", report.nontrivial ? "true" : "false",
               report.residual_inf, report.energy.total);
  return report.converged ? kExitOk : kExitNonconvergence;
}

int cmd_sweep(const CliState& st, const CLI::App* sub) {
  const ProblemFile file = load_problem(st.problem_path);
  for (double l : st.lambdas)
    if (!(l > 0.0)) raise(Errc::invalid_argument, "lambda must be positive");
  (void)sub;
  const MethodConfig config = build_method_config(st);
  const std::vector<SweepEntry> entries =
      sweep_lambda(file.instance, st.lambdas, config, st.threads);

  write_output(st.out_path, dump_json_17(sweep_to_json(entries, config.method)));
  if (!st.csv_path.empty()) {
    std::ofstream csv(st.csv_path, std::ios::binary);
    if (!csv) raise(Errc::invalid_argument, "cannot open CSV file '" + st.csv_path + "'");
    csv << sweep_to_csv(entries);
  }
  bool all_ok = true;
  for (const SweepEntry& e : entries) {
    all_ok = all_ok && e.report && e.report->converged;
    std::fprintf(stderr, "lambda=%g %s\n", e.lambda,
                 e.report ? (e.report->converged
                                 ? (e.report->nontrivial ? "nontrivial" : "trivial")
                                 : "not converged")
                          : e.error->c_str());
  }
  return all_ok ? kExitOk : kExitNonconvergence;
}

int cmd_spectrum(const CliState& st) {
  const ProblemFile file = load_problem(st.problem_path);
  const SystemMatrix matrix = assemble_M(file.instance.grid());
  const SpectrumSummary summary = eigen_extremes(matrix);
  write_output(st.out_path,
               dump_json_17(spectrum_to_json(summary, matrix.trace(), st.full_spectrum)));
  std::fprintf(stderr, "order=%d lambda_min=%.9g lambda_max=%.9g pd=%s\n", matrix.order(),
               summary.lambda_min, summary.lambda_max,
               summary.pd.positive_definite ? "true" : "false");
  return kExitOk;
}

int cmd_assemble(const CliState& st) {
  const ProblemFile file = load_problem(st.problem_path);
  const SystemMatrix matrix = assemble_M(file.instance.grid());
  write_output(st.out_path, matrix_to_csv(matrix));
  std::fprintf(stderr, "assembled %dx%d system matrix (half-bandwidth %d)\n", matrix.order(),
               matrix.order(), matrix.half_bandwidth());
  return kExitOk;
}

int cmd_thresholds(const CliState& st, const CLI::App* sub) {
  const ProblemFile file = load_problem(st.problem_path);
  const SystemMatrix matrix = assemble_M(file.instance.grid());
  const SpectrumSummary spectrum = eigen_extremes(matrix);
  const HypothesisParams params = build_params(st, sub, file.instance);
  std::optional<double> alpha;
  if (sub->count("--alpha") > 0) alpha = st.alpha;

  const ThresholdReport report = thresholds(file.instance, spectrum, params, alpha);
  nlohmann::ordered_json out = to_json(report);
  if (sub->count("--lambda") > 0) {
    if (!(st.lambda > 0.0)) raise(Errc::invalid_argument, "lambda must be positive");
    out["regime"] = to_json(regime_report(file.instance, spectrum, st.lambda, params, alpha));
  }
  write_output(st.out_path, dump_json_17(out));
  return kExitOk;
}

int cmd_check_hypotheses(const CliState& st, const CLI::App* sub) {
  const ProblemFile file = load_problem(st.problem_path);
  const HypothesisParams params = build_params(st, sub, file.instance);
  if (st.hypotheses.empty())
    raise(Errc::invalid_argument, "pass at least one --hypothesis (H1..H6, H2prime)");

  nlohmann::ordered_json out;
  out["schema_version"] = "1";
  nlohmann::ordered_json checks = nlohmann::ordered_json::array();
  for (const std::string& name : st.hypotheses) {
    const Hypothesis h = hypothesis_from_name(name);
    const HypothesisCheckReport report =
        check_hypothesis(file.instance, h, params, st.t_lo, st.t_hi, st.samples);
    std::fprintf(stderr, "%s: %s%s\n", name.c_str(),
                 report.consistent ? "consistent" : "violated",
                 report.evidence_only ? " (finite-sample evidence)" : "");
    checks.push_back(to_json(report));
  }
  out["checks"] = std::move(checks);
  write_output(st.out_path, dump_json_17(out));
  return kExitOk;
}

int cmd_verify(const CliState& st) {
  const ProblemFile file = load_problem(st.problem_path);
  const std::vector<VerifyResult> results = run_verification(file.instance, st.opts.seed);
  bool all_pass = true;
  std::size_t width = 0;
  for (const VerifyResult& r : results) width = std::max(width, r.name.size());
  for (const VerifyResult& r : results) {
    all_pass = all_pass && r.pass;
    std::printf("[%s] %-*s %s\n", r.pass ? "PASS" : "FAIL", static_cast<int>(width),
                r.name.c_str(), r.detail.c_str());
  }
  std::printf("%s: %zu/%zu checks passed\n", all_pass ? "OK" : "FAILED",
              static_cast<std::size_t>(
                  std::count_if(results.begin(), results.end(),
                                [](const VerifyResult& r) { return r.pass; })),
              results.size());
  if (!st.out_path.empty()) {
    nlohmann::ordered_json out;
    out["schema_version"] = "1";
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const VerifyResult& r : results) {
      nlohmann::ordered_json e;
      e["name"] = r.name;
      e["pass"] = r.pass;
      e["detail"] = r.detail;
      arr.push_back(std::move(e));
    }
    out["checks"] = std::move(arr);
    write_output(st.out_path, dump_json_17(out));
  }
  return all_pass ? kExitOk : kExitValidation;
}

void add_solver_options(CLI::App* sub, CliState& st) {
  sub->add_option("--grad-tol", st.opts.grad_tol, "Gradient sup-norm stopping tolerance");
  sub->add_option("--max-iters", st.opts.max_iters, "Descent iteration cap per start");
  sub->add_option("--armijo-c", st.opts.armijo_c, "Armijo sufficient-decrease constant");
  sub->add_option("--backtrack-ratio", st.opts.backtrack_ratio, "Line-search shrink factor");
  sub->add_option("--initial-step", st.opts.initial_step, "Line-search initial step");
  sub->add_option("--nontrivial-tol", st.opts.nontrivial_tol,
                  "Sup-norm cutoff for the nontrivial flag");
  sub->add_option("--restarts", st.opts.restarts, "Random restart count");
  sub->add_option("--seed", st.opts.seed, "Seed for randomized starts");
  sub->add_option("--alpha", st.alpha, "Sublevel ball parameter (r = lambda_1 alpha^2 / 2)");
  sub->add_option("--shrink-eps", st.shrink_eps, "Sublevel projection pull-back factor");
  sub->add_option("--path-points", st.path_points, "Mountain-pass path discretization");
  sub->add_option("--deform-steps", st.deform_steps, "Mountain-pass deformation step cap");
  sub->add_option("--endpoint-file", st.endpoint_file,
                  "Grid-function JSON with negative energy (mountain pass)");
  sub->add_option("--start-file", st.start_file, "Grid-function JSON starting point (newton)");
  sub->add_flag("--trace", st.trace, "Record the per-iteration (energy, grad norm) log");
}

void add_hypothesis_options(CLI::App* sub, CliState& st) {
  sub->add_option("--params", st.params_file, "JSON file with hypothesis constants/tables");
  sub->add_option("--c", st.c, "H2 constant c > 0");
  sub->add_option("--eta", st.eta, "H2 window |t| < eta");
  sub->add_option("--a", st.a, "H3 coefficient a > 0");
  sub->add_option("--b", st.b, "H3 offset b");
  sub->add_option("--T", st.T, "H3 tail threshold T > 0");
  sub->add_option("--growth", st.growth, "H3 exponent in (1,2)");
  sub->add_option("--A", st.cap_a, "H4 limsup bound A > 0");
  sub->add_option("--alpha-minus", st.alpha_minus,
                  "H5 alpha(i,j) broadcast to a constant table");
  sub->add_option("--beta", st.beta_h5, "H5 beta(i,j) broadcast to a constant table");
  sub->add_option("--m-cut", st.m_cut, "H5 tail threshold M > 0");
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CliState st;
  CLI::App app{"Variational solver for the weighted discrete elliptic boundary value problem"};
  app.require_subcommand(1);

  CLI::App* solve = app.add_subcommand("solve", "Find a critical point of I_lambda");
  solve->add_option("--problem", st.problem_path, "Problem JSON file")->required();
  solve->add_option("--out", st.out_path, "Write the JSON report here (default stdout)");
  solve->add_option("--lambda", st.lambda, "Parameter lambda > 0");
  solve->add_option("--method", st.method, "global | sublevel | mountain-pass | newton");
  add_solver_options(solve, st);

  CLI::App* sweep = app.add_subcommand("sweep", "Solve across an ascending lambda list");
  sweep->add_option("--problem", st.problem_path, "Problem JSON file")->required();
  sweep->add_option("--out", st.out_path, "Write the JSON report here (default stdout)");
  sweep->add_option("--lambdas", st.lambdas, "Comma-separated ascending lambda list")
      ->required()
      ->delimiter(',');
  sweep->add_option("--method", st.method, "global | sublevel | mountain-pass | newton");
  sweep->add_option("--threads", st.threads, "Sweep fan-out cap (1 = warm-started sequential)");
  sweep->add_option("--csv", st.csv_path, "Also write a sweep summary CSV here");
  add_solver_options(sweep, st);

  CLI::App* spectrum = app.add_subcommand("spectrum", "Eigenvalue extremes and PD certificate");
  spectrum->add_option("--problem", st.problem_path, "Problem JSON file")->required();
  spectrum->add_option("--out", st.out_path, "Write the JSON report here (default stdout)");
  spectrum->add_flag("--full-spectrum", st.full_spectrum, "Include the full sorted spectrum");

  CLI::App* assemble = app.add_subcommand("assemble", "Export the dense system matrix as CSV");
  assemble->add_option("--problem", st.problem_path, "Problem JSON file")->required();
  assemble->add_option("--out", st.out_path, "Write the CSV here (default stdout)");

  CLI::App* thresholds_cmd =
      app.add_subcommand("thresholds", "Existence-mechanism lambda thresholds (and regime for a lambda)");
  thresholds_cmd->add_option("--problem", st.problem_path, "Problem JSON file")->required();
  thresholds_cmd->add_option("--out", st.out_path, "Write the JSON report here");
  thresholds_cmd->add_option("--lambda", st.lambda, "Join thresholds with this lambda");
  thresholds_cmd->add_option("--alpha", st.alpha, "Ball parameter for lambda*");
  add_hypothesis_options(thresholds_cmd, st);

  CLI::App* check = app.add_subcommand("check-hypotheses", "Audit growth hypotheses numerically");
  check->add_option("--problem", st.problem_path, "Problem JSON file")->required();
  check->add_option("--out", st.out_path, "Write the JSON report here");
  check->add_option("--hypothesis", st.hypotheses, "H1 | H2 | H2prime | H3 | H4 | H5 | H6")
      ->required();
  check->add_option("--t-lo", st.t_lo, "Lower end of the sampled |t| range");
  check->add_option("--t-hi", st.t_hi, "Upper end of the sampled |t| range");
  check->add_option("--samples", st.samples, "Geometric sample count (>= 100)");
  add_hypothesis_options(check, st);

  CLI::App* verify = app.add_subcommand("verify", "Run the full invariant suite");
  verify->add_option("--problem", st.problem_path, "Problem JSON file")->required();
  verify->add_option("--out", st.out_path, "Also write the results as JSON");
  verify->add_option("--seed", st.opts.seed, "Seed for the randomized sweeps");

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("elvar");
  for (const std::string& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (solve->parsed()) return cmd_solve(st, solve);
    if (sweep->parsed()) return cmd_sweep(st, sweep);
    if (spectrum->parsed()) return cmd_spectrum(st);
    if (assemble->parsed()) return cmd_assemble(st);
    if (thresholds_cmd->parsed()) return cmd_thresholds(st, thresholds_cmd);
    if (check->parsed()) return cmd_check_hypotheses(st, check);
    if (verify->parsed()) return cmd_verify(st);
    std::cerr << "no subcommand given\n";
    return kExitValidation;
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

}  // namespace elvar
