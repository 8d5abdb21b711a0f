#include "elvar/cli_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "elvar/json_io.hpp"

namespace elvar {

namespace {

using njson = nlohmann::json;

[[noreturn]] void fail_at(const std::string& pointer, const std::string& message) {
  raise(Errc::validation_error, pointer + ": " + message);
}

const njson& require_field(const njson& obj, const std::string& pointer, const char* key) {
  if (!obj.is_object()) fail_at(pointer.empty() ? "/" : pointer, "expected a JSON object");
  auto it = obj.find(key);
  if (it == obj.end()) fail_at(pointer + "/" + key, "missing required field");
  return *it;
}

int require_positive_int(const njson& v, const std::string& pointer) {
  if (!v.is_number_integer() || v.get<std::int64_t>() < 1)
    fail_at(pointer, "expected a positive integer");
  return static_cast<int>(v.get<std::int64_t>());
}

double require_number(const njson& v, const std::string& pointer) {
  if (!v.is_number()) fail_at(pointer, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) fail_at(pointer, "expected a finite number");
  return x;
}

std::vector<double> require_matrix(const njson& v, const std::string& pointer, int rows,
                                   int cols) {
  if (!v.is_array() || static_cast<int>(v.size()) != rows)
    fail_at(pointer, "expected an array of " + std::to_string(rows) + " rows");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(rows) * cols);
  for (int r = 0; r < rows; ++r) {
    const njson& row = v[static_cast<std::size_t>(r)];
    const std::string row_ptr = pointer + "/" + std::to_string(r);
    if (!row.is_array() || static_cast<int>(row.size()) != cols)
      fail_at(row_ptr, "expected an array of " + std::to_string(cols) + " numbers");
    for (int c = 0; c < cols; ++c)
      out.push_back(
          require_number(row[static_cast<std::size_t>(c)], row_ptr + "/" + std::to_string(c)));
  }
  return out;
}

NonlinearitySpec parse_nonlinearity(const njson& node, int m, int n) {
  const std::string pointer = "/nonlinearity";
  if (!node.is_object()) fail_at(pointer, "expected a JSON object");
  const njson& kind_node = require_field(node, pointer, "kind");
  if (!kind_node.is_string()) fail_at(pointer + "/kind", "expected a string");
  NonlinearityKind kind;
  try {
    kind = nonlinearity_kind_from_name(kind_node.get<std::string>());
  } catch (const Error&) {
    fail_at(pointer + "/kind",
            "unknown kind '" + kind_node.get<std::string>() +
                "' (expected one of linear, cubic_softening, power, rational_quartic, "
                "damped_quadratic, tabulated)");
  }

  njson params = njson::object();
  if (auto it = node.find("params"); it != node.end()) {
    if (!it->is_object()) fail_at(pointer + "/params", "expected a JSON object");
    params = *it;
  }
  auto param_number = [&](const char* key, std::optional<double> fallback) -> double {
    auto it = params.find(key);
    if (it == params.end()) {
      if (fallback) return *fallback;
      fail_at(pointer + "/params/" + key, "missing required parameter");
    }
    return require_number(*it, pointer + "/params/" + std::string(key));
  };

  NonlinearitySpec spec = [&]() -> NonlinearitySpec {
    try {
      switch (kind) {
        case NonlinearityKind::linear:
          return NonlinearitySpec::linear(param_number("slope", 2.0));
        case NonlinearityKind::cubic_softening:
          return NonlinearitySpec::cubic_softening();
        case NonlinearityKind::power: {
          const double scale = param_number("s", std::nullopt);
          const double exponent = param_number("gamma", std::nullopt);
          return NonlinearitySpec::power(scale, exponent);
        }
        case NonlinearityKind::rational_quartic:
          return NonlinearitySpec::rational_quartic();
        case NonlinearityKind::damped_quadratic:
          return NonlinearitySpec::damped_quadratic();
        case NonlinearityKind::tabulated: {
          const njson& tk = require_field(params, pointer + "/params", "t");
          const njson& fk = require_field(params, pointer + "/params", "f");
          if (!tk.is_array()) fail_at(pointer + "/params/t", "expected an array of numbers");
          if (!fk.is_array()) fail_at(pointer + "/params/f", "expected an array of numbers");
          std::vector<double> tv, fv;
          for (std::size_t q = 0; q < tk.size(); ++q)
            tv.push_back(require_number(tk[q], pointer + "/params/t/" + std::to_string(q)));
          for (std::size_t q = 0; q < fk.size(); ++q)
            fv.push_back(require_number(fk[q], pointer + "/params/f/" + std::to_string(q)));
          return NonlinearitySpec::tabulated(std::move(tv), std::move(fv));
        }
      }
      raise(Errc::validation_error, "unreachable kind");
    } catch (const Error& e) {
      if (e.code() == Errc::validation_error) throw;
      fail_at(pointer + "/params", e.what());
    }
  }();

  if (auto it = node.find("coefficient"); it != node.end() && !it->is_null()) {
    std::vector<double> rows = require_matrix(*it, pointer + "/coefficient", m, n);
    spec.with_coefficient(m, n, std::move(rows));
  }
  if (auto it = node.find("primitive_mode"); it != node.end() && !it->is_null()) {
    if (!it->is_string()) fail_at(pointer + "/primitive_mode", "expected a string");
    const std::string mode = it->get<std::string>();
    if (mode == "closed_form")
      spec.with_primitive_mode(PrimitiveMode::closed_form);
    else if (mode == "quadrature")
      spec.with_primitive_mode(PrimitiveMode::quadrature);
    else
      fail_at(pointer + "/primitive_mode", "expected 'closed_form' or 'quadrature'");
  }
  return spec;
}

nlohmann::ordered_json values_matrix(const GridFunction& u) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (int i = 1; i <= u.m(); ++i) {
    nlohmann::ordered_json row = nlohmann::ordered_json::array();
    for (int j = 1; j <= u.n(); ++j) row.push_back(u.at(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

nlohmann::ordered_json trace_to_json(const std::vector<TracePoint>& trace) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const TracePoint& p : trace) {
    nlohmann::ordered_json entry;
    entry["iteration"] = p.iteration;
    entry["energy"] = p.energy;
    entry["grad_norm"] = p.grad_norm;
    arr.push_back(std::move(entry));
  }
  return arr;
}

}  // namespace

ProblemFile parse_problem_text(const std::string& text) {
  njson doc;
  try {
    doc = njson::parse(text);
  } catch (const njson::parse_error& e) {
    raise(Errc::parse_error, e.what());
  }
  if (!doc.is_object()) fail_at("/", "expected a JSON object");

  const int m = require_positive_int(require_field(doc, "", "m"), "/m");
  const int n = require_positive_int(require_field(doc, "", "n"), "/n");
  std::vector<double> weights =
      require_matrix(require_field(doc, "", "weights"), "/weights", m + 1, n + 1);

  // Locate constraint violations before constructing, so the error carries a
  // field-precise pointer.
  auto entry = [&](int i, int j) { return weights[static_cast<std::size_t>(i) * (n + 1) + j]; };
  for (int j = 1; j <= n; ++j)
    if (entry(0, j) != 0.0)
      fail_at("/weights/0/" + std::to_string(j),
              "p(0," + std::to_string(j) + ") must be exactly zero");
  for (int i = 1; i <= m; ++i)
    if (entry(i, 0) != 0.0)
      fail_at("/weights/" + std::to_string(i) + "/0",
              "p(" + std::to_string(i) + ",0) must be exactly zero");
  for (int i = 1; i <= m; ++i)
    for (int j = 1; j <= n; ++j)
      if (!(entry(i, j) > 0.0))
        fail_at("/weights/" + std::to_string(i) + "/" + std::to_string(j),
                "interior weight p(" + std::to_string(i) + "," + std::to_string(j) +
                    ") must be strictly positive");

  WeightGrid grid(m, n, std::move(weights));
  NonlinearitySpec spec = parse_nonlinearity(require_field(doc, "", "nonlinearity"), m, n);

  ProblemFile file{ProblemInstance(std::move(grid), std::move(spec)), std::nullopt};
  if (auto it = doc.find("lambda"); it != doc.end() && !it->is_null())
    file.lambda = require_number(*it, "/lambda");
  return file;
}

ProblemFile load_problem(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(Errc::parse_error, "cannot open problem file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_problem_text(buffer.str());
}

nlohmann::ordered_json to_json(const GridFunction& u) {
  nlohmann::ordered_json j;
  j["m"] = u.m();
  j["n"] = u.n();
  j["values"] = values_matrix(u);
  return j;
}

GridFunction grid_function_from_json(const njson& j) {
  const int m = require_positive_int(require_field(j, "", "m"), "/m");
  const int n = require_positive_int(require_field(j, "", "n"), "/n");
  std::vector<double> rows = require_matrix(require_field(j, "", "values"), "/values", m, n);
  GridFunction u(m, n);
  for (int i = 1; i <= m; ++i)
    for (int jj = 1; jj <= n; ++jj)
      u.at(i, jj) = rows[static_cast<std::size_t>(i - 1) * n + (jj - 1)];
  return u;
}

nlohmann::ordered_json to_json(const SolveReport& report) {
  nlohmann::ordered_json j;
  j["schema_version"] = "1";
  j["method"] = std::string(solve_method_name(report.method));
  j["lambda"] = report.lambda;
  j["converged"] = report.converged;
  j["nontrivial"] = report.nontrivial;
  j["iterations"] = report.iterations;
  j["residual_inf"] = report.residual_inf;
  nlohmann::ordered_json energy;
  energy["phi"] = report.energy.phi;
  energy["psi"] = report.energy.psi;
  energy["total"] = report.energy.total;
  energy["lambda"] = report.energy.lambda;
  j["energy"] = std::move(energy);
  j["u"] = to_json(report.u);
  if (report.sublevel_radius) {
    nlohmann::ordered_json sub;
    sub["r"] = *report.sublevel_radius;
    sub["phi"] = *report.sublevel_phi;
    sub["interior"] = *report.sublevel_interior;
    j["sublevel"] = std::move(sub);
  }
  if (report.trace) j["trace"] = trace_to_json(*report.trace);
  return j;
}

SolveReport solve_report_from_json(const njson& j) {
  SolveReport report;
  report.method = solve_method_from_name(require_field(j, "", "method").get<std::string>());
  report.lambda = require_number(require_field(j, "", "lambda"), "/lambda");
  report.converged = require_field(j, "", "converged").get<bool>();
  report.nontrivial = require_field(j, "", "nontrivial").get<bool>();
  report.iterations = require_field(j, "", "iterations").get<long>();
  report.residual_inf = require_number(require_field(j, "", "residual_inf"), "/residual_inf");
  const njson& energy = require_field(j, "", "energy");
  report.energy.phi = require_number(require_field(energy, "/energy", "phi"), "/energy/phi");
  report.energy.psi = require_number(require_field(energy, "/energy", "psi"), "/energy/psi");
  report.energy.total =
      require_number(require_field(energy, "/energy", "total"), "/energy/total");
  report.energy.lambda =
      require_number(require_field(energy, "/energy", "lambda"), "/energy/lambda");
  report.u = grid_function_from_json(require_field(j, "", "u"));
  if (auto it = j.find("sublevel"); it != j.end() && !it->is_null()) {
    report.sublevel_radius = require_number(require_field(*it, "/sublevel", "r"), "/sublevel/r");
    report.sublevel_phi =
        require_number(require_field(*it, "/sublevel", "phi"), "/sublevel/phi");
    report.sublevel_interior = require_field(*it, "/sublevel", "interior").get<bool>();
  }
  if (auto it = j.find("trace"); it != j.end() && !it->is_null()) {
    std::vector<TracePoint> trace;
    for (const auto& p : *it)
      trace.push_back({p.at("iteration").get<long>(), p.at("energy").get<double>(),
                       p.at("grad_norm").get<double>()});
    report.trace = std::move(trace);
  }
  return report;
}

nlohmann::ordered_json spectrum_to_json(const SpectrumSummary& summary, double matrix_trace,
                                        bool include_spectrum) {
  nlohmann::ordered_json j;
  j["schema_version"] = "1";
  j["lambda_min"] = summary.lambda_min;
  j["lambda_max"] = summary.lambda_max;
  j["trace"] = matrix_trace;
  j["pd"] = summary.pd.positive_definite;
  if (include_spectrum && summary.full_spectrum) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (double v : *summary.full_spectrum) arr.push_back(v);
    j["spectrum"] = std::move(arr);
  }
  return j;
}

SpectrumSummary spectrum_from_json(const njson& j) {
  SpectrumSummary summary;
  summary.lambda_min = require_number(require_field(j, "", "lambda_min"), "/lambda_min");
  summary.lambda_max = require_number(require_field(j, "", "lambda_max"), "/lambda_max");
  summary.pd.positive_definite = require_field(j, "", "pd").get<bool>();
  if (auto it = j.find("spectrum"); it != j.end() && !it->is_null()) {
    std::vector<double> values;
    for (const auto& v : *it) values.push_back(v.get<double>());
    summary.full_spectrum = std::move(values);
  }
  return summary;
}

nlohmann::ordered_json to_json(const ThresholdReport& report) {
  nlohmann::ordered_json j;
  j["schema_version"] = "1";
  if (report.lambda_star) j["lambda_star"] = *report.lambda_star;
  j["lambda_42_lower"] = report.lambda_42_lower;
  j["lambda_43_upper"] = report.lambda_43_upper;
  j["lambda_44_lower"] = report.lambda_44_lower;
  nlohmann::ordered_json inputs;
  inputs["lambda_min"] = report.lambda_min;
  inputs["lambda_max"] = report.lambda_max;
  inputs["c"] = report.c;
  inputs["A"] = report.A;
  inputs["alpha_minus"] = report.alpha_minus;
  if (report.alpha) inputs["alpha"] = *report.alpha;
  j["inputs"] = std::move(inputs);
  return j;
}

ThresholdReport threshold_report_from_json(const njson& j) {
  ThresholdReport report;
  if (auto it = j.find("lambda_star"); it != j.end() && !it->is_null())
    report.lambda_star = it->get<double>();
  report.lambda_42_lower =
      require_number(require_field(j, "", "lambda_42_lower"), "/lambda_42_lower");
  report.lambda_43_upper =
      require_number(require_field(j, "", "lambda_43_upper"), "/lambda_43_upper");
  report.lambda_44_lower =
      require_number(require_field(j, "", "lambda_44_lower"), "/lambda_44_lower");
  const njson& inputs = require_field(j, "", "inputs");
  report.lambda_min =
      require_number(require_field(inputs, "/inputs", "lambda_min"), "/inputs/lambda_min");
  report.lambda_max =
      require_number(require_field(inputs, "/inputs", "lambda_max"), "/inputs/lambda_max");
  report.c = require_number(require_field(inputs, "/inputs", "c"), "/inputs/c");
  report.A = require_number(require_field(inputs, "/inputs", "A"), "/inputs/A");
  report.alpha_minus =
      require_number(require_field(inputs, "/inputs", "alpha_minus"), "/inputs/alpha_minus");
  if (auto it = inputs.find("alpha"); it != inputs.end() && !it->is_null())
    report.alpha = it->get<double>();
  return report;
}

nlohmann::ordered_json to_json(const HypothesisCheckReport& report) {
  nlohmann::ordered_json j;
  j["schema_version"] = "1";
  j["hypothesis"] = std::string(hypothesis_name(report.hypothesis));
  j["verdict"] = report.consistent ? "consistent" : "violated";
  if (report.witness) {
    nlohmann::ordered_json w;
    w["i"] = report.witness->i;
    w["j"] = report.witness->j;
    w["t"] = report.witness->t;
    w["value"] = report.witness->value;
    j["witness"] = std::move(w);
  }
  j["t_lo"] = report.t_lo;
  j["t_hi"] = report.t_hi;
  j["samples"] = report.samples;
  j["evidence_only"] = report.evidence_only;
  j["note"] = report.note;
  return j;
}

HypothesisCheckReport hypothesis_check_from_json(const njson& j) {
  HypothesisCheckReport report;
  report.hypothesis = hypothesis_from_name(require_field(j, "", "hypothesis").get<std::string>());
  const std::string verdict = require_field(j, "", "verdict").get<std::string>();
  if (verdict != "consistent" && verdict != "violated")
    fail_at("/verdict", "expected 'consistent' or 'violated'");
  report.consistent = verdict == "consistent";
  if (auto it = j.find("witness"); it != j.end() && !it->is_null()) {
    HypothesisWitness w;
    w.i = it->at("i").get<int>();
    w.j = it->at("j").get<int>();
    w.t = it->at("t").get<double>();
    w.value = it->at("value").get<double>();
    report.witness = w;
  }
  report.t_lo = require_number(require_field(j, "", "t_lo"), "/t_lo");
  report.t_hi = require_number(require_field(j, "", "t_hi"), "/t_hi");
  report.samples = require_field(j, "", "samples").get<int>();
  report.evidence_only = require_field(j, "", "evidence_only").get<bool>();
  report.note = require_field(j, "", "note").get<std::string>();
  return report;
}

nlohmann::ordered_json to_json(const RegimeReport& report) {
  nlohmann::ordered_json j;
  j["lambda"] = report.lambda;
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const RegimeEntry& regime : report.mechanisms) {
    nlohmann::ordered_json r;
    r["mechanism"] = regime.mechanism;
    if (regime.lower) r["lower"] = *regime.lower;
    if (regime.upper) r["upper"] = *regime.upper;
    r["applicable"] = regime.applicable;
    r["lambda_inside"] = regime.lambda_inside;
    nlohmann::ordered_json checks = nlohmann::ordered_json::array();
    for (const auto& check : regime.checks) checks.push_back(to_json(check));
    r["checks"] = std::move(checks);
    if (regime.recommended_method) r["recommended_method"] = *regime.recommended_method;
    if (!regime.note.empty()) r["note"] = regime.note;
    arr.push_back(std::move(r));
  }
  j["mechanisms"] = std::move(arr);
  return j;
}

nlohmann::ordered_json sweep_to_json(const std::vector<SweepEntry>& entries,
                                     SolveMethod method) {
  nlohmann::ordered_json j;
  j["schema_version"] = "1";
  j["method"] = std::string(solve_method_name(method));
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const SweepEntry& entry : entries) {
    nlohmann::ordered_json e;
    e["lambda"] = entry.lambda;
    if (entry.report) e["report"] = to_json(*entry.report);
    if (entry.error) e["error"] = *entry.error;
    arr.push_back(std::move(e));
  }
  j["entries"] = std::move(arr);
  return j;
}

std::string matrix_to_csv(const SystemMatrix& matrix) {
  std::string out;
  const int order = matrix.order();
  for (int k = 0; k < order; ++k) {
    for (int l = 0; l < order; ++l) {
      if (l) out.push_back(',');
      out += format_double_17(matrix.at(k, l));
    }
    out.push_back('\n');
  }
  return out;
}

std::string sweep_to_csv(const std::vector<SweepEntry>& entries) {
  std::string out =
      "lambda,converged,nontrivial,residual_inf,phi,psi,energy,iterations,sup_norm\n";
  for (const SweepEntry& entry : entries) {
    out += format_double_17(entry.lambda);
    if (entry.report) {
      const SolveReport& r = *entry.report;
      out += std::string(",") + (r.converged ? "1" : "0") + "," + (r.nontrivial ? "1" : "0") +
             "," + format_double_17(r.residual_inf) + "," + format_double_17(r.energy.phi) +
             "," + format_double_17(r.energy.psi) + "," + format_double_17(r.energy.total) +
             "," + std::to_string(r.iterations) + "," + format_double_17(max_norm(r.u));
    } else {
      out += ",error,,,,,,,";
    }
    out.push_back('\n');
  }
  return out;
}

}  // namespace elvar
