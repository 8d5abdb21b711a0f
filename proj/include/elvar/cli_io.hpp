#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "elvar/grid_problem.hpp"
#include "elvar/regimes.hpp"
#include "elvar/solvers.hpp"
#include "elvar/spectral.hpp"

namespace elvar {

struct ProblemFile {
  ProblemInstance instance;
  std::optional<double> lambda;
};

/// Parses and validates a problem document. Malformed JSON raises ParseError;
/// schema or constraint violations raise ValidationError with a
/// JSON-pointer-style location (e.g. "/weights/0/1").
ProblemFile load_problem(const std::string& path);
ProblemFile parse_problem_text(const std::string& text);

// --- report serialization (ordered trees; dump with dump_json_17) ---

nlohmann::ordered_json to_json(const GridFunction& u);
GridFunction grid_function_from_json(const nlohmann::json& j);

nlohmann::ordered_json to_json(const SolveReport& report);
SolveReport solve_report_from_json(const nlohmann::json& j);

nlohmann::ordered_json spectrum_to_json(const SpectrumSummary& summary, double matrix_trace,
                                        bool include_spectrum);
SpectrumSummary spectrum_from_json(const nlohmann::json& j);

nlohmann::ordered_json to_json(const ThresholdReport& report);
ThresholdReport threshold_report_from_json(const nlohmann::json& j);

nlohmann::ordered_json to_json(const HypothesisCheckReport& report);
HypothesisCheckReport hypothesis_check_from_json(const nlohmann::json& j);

nlohmann::ordered_json to_json(const RegimeReport& report);

nlohmann::ordered_json sweep_to_json(const std::vector<SweepEntry>& entries, SolveMethod method);

/// Dense matrix export, row-major CSV with 17-significant-digit numbers.
std::string matrix_to_csv(const SystemMatrix& matrix);

/// Sweep summary table as CSV (lambda, converged, nontrivial, residual_inf,
/// phi, psi, energy, iterations, sup_norm).
std::string sweep_to_csv(const std::vector<SweepEntry>& entries);

/// The command-line entry point. `args` excludes the program name.
/// Exit codes: 0 success, 1 validation error, 2 solver nonconvergence,
/// 3 internal error.
int run_cli(const std::vector<std::string>& args);

}  // namespace elvar
