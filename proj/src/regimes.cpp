#include "elvar/regimes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "elvar/kernels.hpp"

namespace elvar {

namespace {

constexpr int kMaxScanSamples = 10000;     // uniform scan density for max_{|t|<=alpha} F
constexpr double kGoldenTol = 1e-12;       // refinement tolerance in t
constexpr double kH1TrendThreshold = 1e3;  // F/t^2 must exceed this at the smallest sample
constexpr double kH6TrendThreshold = 1e-3; // |F|/t^2 must fall below this
const char* kEvidenceNote = "finite-sample evidence only, not a proof";

// Golden-section maximization of fn on [lo, hi].
template <class Fn>
double golden_max(const Fn& fn, double lo, double hi, double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = fn(x1), f2 = fn(x2);
  while (b - a > tol) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = fn(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = fn(x1);
    }
  }
  return 0.5 * (a + b);
}

// max_{|t| <= alpha} F for the kind part (per-node coefficient applied by
// the caller): dense scan bracketing the max, then golden-section refinement.
double max_primitive_on_ball(const NonlinearitySpec& nl, double alpha, double sign_coeff) {
  auto value = [&](double t) { return sign_coeff * nl.F(t); };
  const int samples = kMaxScanSamples;
  double best_t = -alpha;
  double best_v = value(-alpha);
  for (int q = 1; q < samples; ++q) {
    const double t = -alpha + 2.0 * alpha * q / (samples - 1);
    const double v = value(t);
    if (v > best_v) {
      best_v = v;
      best_t = t;
    }
  }
  const double spacing = 2.0 * alpha / (samples - 1);
  const double lo = std::max(-alpha, best_t - spacing);
  const double hi = std::min(alpha, best_t + spacing);
  const double refined_t = golden_max(value, lo, hi, kGoldenTol);
  return std::max({best_v, value(refined_t), value(lo), value(hi)});
}

std::vector<double> geometric_grid(double t_lo, double t_hi, int samples) {
  std::vector<double> grid(static_cast<std::size_t>(samples));
  const double ratio = std::log(t_hi / t_lo);
  for (int q = 0; q < samples; ++q)
    grid[static_cast<std::size_t>(q)] = t_lo * std::exp(ratio * q / (samples - 1));
  return grid;
}

void require_range(double t_lo, double t_hi, int samples) {
  if (samples < 100) raise(Errc::range_invalid, "at least 100 samples required");
  if (!(t_lo > 0.0) || !(t_hi > t_lo) || !std::isfinite(t_hi))
    raise(Errc::range_invalid, "need 0 < t_lo < t_hi (samples run over |t| in this range)");
}

}  // namespace

void HypothesisParams::validate(int m, int n) const {
  if (c && !(*c > 0.0)) raise(Errc::invalid_argument, "c must be positive");
  if (eta && !(*eta > 0.0)) raise(Errc::invalid_argument, "eta must be positive");
  if (a && !(*a > 0.0)) raise(Errc::invalid_argument, "a must be positive");
  if (T && !(*T > 0.0)) raise(Errc::invalid_argument, "T must be positive");
  if (growth && !(*growth > 1.0 && *growth < 2.0))
    raise(Errc::invalid_argument, "growth exponent must lie in (1,2)");
  if (A && !(*A > 0.0)) raise(Errc::invalid_argument, "A must be positive");
  if (M_cut && !(*M_cut > 0.0)) raise(Errc::invalid_argument, "M must be positive");
  const std::size_t nodes = static_cast<std::size_t>(m) * n;
  if (alpha_table) {
    if (alpha_table->size() != nodes)
      raise(Errc::shape_mismatch, "alpha table must have m*n entries");
    for (double v : *alpha_table)
      if (!(v > 0.0)) raise(Errc::invalid_argument, "alpha(i,j) must be positive");
  }
  if (beta_table && beta_table->size() != nodes)
    raise(Errc::shape_mismatch, "beta table must have m*n entries");
}

double HypothesisParams::alpha_minus() const {
  if (!alpha_table || alpha_table->empty())
    raise(Errc::invalid_argument, "alpha table not supplied");
  return *std::min_element(alpha_table->begin(), alpha_table->end());
}

double HypothesisParams::beta_minus() const {
  if (!beta_table || beta_table->empty())
    raise(Errc::invalid_argument, "beta table not supplied");
  return *std::min_element(beta_table->begin(), beta_table->end());
}

double threshold_lambda_star(const ProblemInstance& instance, const SpectrumSummary& spectrum,
                             double alpha) {
  if (!(alpha > 0.0)) raise(Errc::invalid_argument, "alpha must be positive");
  const int m = instance.m();
  const int n = instance.n();
  const NonlinearitySpec& nl = instance.nonlinearity();
  std::vector<double> node_max(static_cast<std::size_t>(m) * n);
  kernels::map_indexed(m * n, node_max.data(), [&](int k) {
    const int i = k % m + 1;
    const int j = k / m + 1;
    const double coeff = nl.coefficient(i, j);
    // max of coeff*F: scan the signed function directly so negative
    // coefficients are handled, too.
    if (coeff == 0.0) return 0.0;
    return std::abs(coeff) * max_primitive_on_ball(nl, alpha, coeff > 0.0 ? 1.0 : -1.0);
  });
  const double denom_sum = kernels::sum(m * n, node_max.data());
  if (!(denom_sum > 0.0))
    raise(Errc::nonpositive_denominator,
          "sum of per-node maxima of F is " + std::to_string(denom_sum) +
              "; lambda* is undefined");
  return spectrum.lambda_min * alpha * alpha / (2.0 * denom_sum);
}

ThresholdReport thresholds(const ProblemInstance& instance, const SpectrumSummary& spectrum,
                           const HypothesisParams& params, std::optional<double> alpha) {
  params.validate(instance.m(), instance.n());
  if (!params.c) raise(Errc::invalid_argument, "thresholds need c (the lambda_42 ratio)");
  if (!params.A) raise(Errc::invalid_argument, "thresholds need A (the lambda_43 ratio)");
  if (!params.alpha_table)
    raise(Errc::invalid_argument, "thresholds need the alpha table (the lambda_44 ratio)");

  ThresholdReport report;
  report.lambda_min = spectrum.lambda_min;
  report.lambda_max = spectrum.lambda_max;
  report.c = *params.c;
  report.A = *params.A;
  report.alpha_minus = params.alpha_minus();
  report.lambda_42_lower = spectrum.lambda_max / (2.0 * report.c);
  report.lambda_43_upper = spectrum.lambda_min / (2.0 * report.A);
  report.lambda_44_lower = spectrum.lambda_max / (2.0 * report.alpha_minus);
  if (alpha) {
    report.alpha = *alpha;
    report.lambda_star = threshold_lambda_star(instance, spectrum, *alpha);
  }
  return report;
}

std::string_view hypothesis_name(Hypothesis h) {
  switch (h) {
    case Hypothesis::H1: return "H1";
    case Hypothesis::H2: return "H2";
    case Hypothesis::H2prime: return "H2prime";
    case Hypothesis::H3: return "H3";
    case Hypothesis::H4: return "H4";
    case Hypothesis::H5: return "H5";
    case Hypothesis::H6: return "H6";
  }
  return "unknown";
}

Hypothesis hypothesis_from_name(std::string_view name) {
  if (name == "H1" || name == "h1") return Hypothesis::H1;
  if (name == "H2" || name == "h2") return Hypothesis::H2;
  if (name == "H2prime" || name == "h2prime" || name == "H2'") return Hypothesis::H2prime;
  if (name == "H3" || name == "h3") return Hypothesis::H3;
  if (name == "H4" || name == "h4") return Hypothesis::H4;
  if (name == "H5" || name == "h5") return Hypothesis::H5;
  if (name == "H6" || name == "h6") return Hypothesis::H6;
  raise(Errc::validation_error, "unknown hypothesis '" + std::string(name) + "'");
}

HypothesisCheckReport check_hypothesis(const ProblemInstance& instance, Hypothesis which,
                                       const HypothesisParams& params, double t_lo, double t_hi,
                                       int samples) {
  require_range(t_lo, t_hi, samples);
  params.validate(instance.m(), instance.n());

  HypothesisCheckReport report;
  report.hypothesis = which;
  report.t_lo = t_lo;
  report.t_hi = t_hi;
  report.samples = samples;

  const int m = instance.m();
  const int n = instance.n();

  // Effective |t| window per hypothesis: the inequalities are only claimed on
  // 0 < |t| < eta (H2/H2'), |t| >= T (H3), |t| > M (H5).
  double lo = t_lo, hi = t_hi;
  switch (which) {
    case Hypothesis::H2:
    case Hypothesis::H2prime: {
      if (!params.c || !params.eta)
        raise(Errc::invalid_argument, "H2 needs constants c and eta");
      hi = std::min(hi, *params.eta * (1.0 - 1e-12));  // t = eta itself is outside the claim
      break;
    }
    case Hypothesis::H3: {
      if (!params.a || !params.b || !params.T || !params.growth)
        raise(Errc::invalid_argument, "H3 needs constants a, b, T and the growth exponent");
      lo = std::max(lo, *params.T);
      break;
    }
    case Hypothesis::H4:
      if (!params.A) raise(Errc::invalid_argument, "H4 needs the constant A");
      break;
    case Hypothesis::H5: {
      if (!params.alpha_table || !params.beta_table || !params.M_cut)
        raise(Errc::invalid_argument, "H5 needs the alpha/beta tables and the cutoff M");
      lo = std::max(lo, std::nextafter(*params.M_cut, std::numeric_limits<double>::infinity()));
      break;
    }
    default:
      break;
  }
  if (!(lo < hi))
    raise(Errc::range_invalid, "sample range does not intersect the hypothesis window");
  report.t_lo = lo;  // echo the range actually sampled
  report.t_hi = hi;

  const std::vector<double> grid = geometric_grid(lo, hi, samples);
  auto for_each_sample = [&](auto&& body) {
    // Deterministic order: ascending |t|, + before -, nodes i-outer.
    for (int q = 0; q < samples; ++q)
      for (int sign = 0; sign < 2; ++sign) {
        const double t = (sign == 0 ? 1.0 : -1.0) * grid[static_cast<std::size_t>(q)];
        for (int i = 1; i <= m; ++i)
          for (int j = 1; j <= n; ++j)
            if (!body(i, j, t)) return false;
      }
    return true;
  };

  switch (which) {
    case Hypothesis::H2: {
      const double c = *params.c;
      report.consistent = for_each_sample([&](int i, int j, double t) {
        const double v = instance.eval_F(i, j, t);
        if (v < -c * t * t) return true;
        report.witness = HypothesisWitness{i, j, t, v};
        return false;
      });
      report.note = "checked F((i,j),t) < -c t^2 pointwise on 0 < |t| < eta";
      break;
    }
    case Hypothesis::H2prime: {
      const double c = *params.c;
      report.consistent = for_each_sample([&](int i, int j, double t) {
        const double v = instance.eval_F(i, j, t);
        if (v > c * t * t) return true;
        report.witness = HypothesisWitness{i, j, t, v};
        return false;
      });
      report.note =
          "sign-flipped reading of H2 (F > c t^2 near 0), checked pointwise on 0 < |t| < eta";
      break;
    }
    case Hypothesis::H3: {
      const double a = *params.a;
      const double b = *params.b;
      const double g = *params.growth;
      report.consistent = for_each_sample([&](int i, int j, double t) {
        const double v = instance.eval_F(i, j, t);
        if (v < a * std::pow(std::abs(t), g) + b) return true;
        report.witness = HypothesisWitness{i, j, t, v};
        return false;
      });
      report.note = "checked F((i,j),t) < a|t|^growth + b pointwise on |t| >= T";
      break;
    }
    case Hypothesis::H5: {
      report.consistent = for_each_sample([&](int i, int j, double t) {
        const double v = instance.eval_F(i, j, t);
        const std::size_t idx = static_cast<std::size_t>(i - 1) * n + (j - 1);
        const double bound =
            (*params.alpha_table)[idx] * t * t + (*params.beta_table)[idx];
        if (v >= bound) return true;
        report.witness = HypothesisWitness{i, j, t, v};
        return false;
      });
      report.note = "checked F((i,j),t) >= alpha(i,j) t^2 + beta(i,j) pointwise on |t| > M";
      break;
    }
    case Hypothesis::H1: {
      report.evidence_only = true;
      report.consistent = true;
      // Threshold exceedance at the smallest sampled |t|, both signs.
      for (int sign = 0; sign < 2 && report.consistent; ++sign) {
        const double t = (sign == 0 ? 1.0 : -1.0) * grid.front();
        for (int i = 1; i <= m && report.consistent; ++i)
          for (int j = 1; j <= n; ++j) {
            const double ratio = instance.eval_F(i, j, t) / (t * t);
            if (!(ratio >= kH1TrendThreshold)) {
              report.consistent = false;
              report.witness = HypothesisWitness{i, j, t, ratio};
              break;
            }
          }
      }
      report.note = std::string("F/t^2 >= 1e3 at the smallest sampled |t|; ") + kEvidenceNote;
      break;
    }
    case Hypothesis::H6: {
      report.evidence_only = true;
      report.consistent = true;
      for (int sign = 0; sign < 2 && report.consistent; ++sign) {
        const double t = (sign == 0 ? 1.0 : -1.0) * grid.front();
        for (int i = 1; i <= m && report.consistent; ++i)
          for (int j = 1; j <= n; ++j) {
            const double ratio = instance.eval_F(i, j, t) / (t * t);
            if (!(std::abs(ratio) <= kH6TrendThreshold)) {
              report.consistent = false;
              report.witness = HypothesisWitness{i, j, t, ratio};
              break;
            }
          }
      }
      report.note = std::string("|F|/t^2 <= 1e-3 at the smallest sampled |t|; ") + kEvidenceNote;
      break;
    }
    case Hypothesis::H4: {
      report.evidence_only = true;
      const double cap = *params.A;
      report.consistent = for_each_sample([&](int i, int j, double t) {
        const double ratio = instance.eval_F(i, j, t) / (t * t);
        if (ratio < cap) return true;
        report.witness = HypothesisWitness{i, j, t, ratio};
        return false;
      });
      report.note = std::string("F/t^2 < A at every sampled tail point; ") + kEvidenceNote;
      break;
    }
  }
  return report;
}

RegimeReport regime_report(const ProblemInstance& instance, const SpectrumSummary& spectrum,
                           double lambda, const HypothesisParams& params,
                           std::optional<double> alpha) {
  if (!(lambda > 0.0)) raise(Errc::invalid_argument, "lambda must be positive");
  params.validate(instance.m(), instance.n());
  RegimeReport report;
  report.lambda = lambda;

  const int default_samples = 200;

  {  // 4.1: sublevel local minimum on (0, lambda*), needs (H1)
    RegimeEntry regime;
    regime.mechanism = "4.1";
    if (alpha) {
      try {
        const double star = threshold_lambda_star(instance, spectrum, *alpha);
        regime.lower = 0.0;
        regime.upper = star;
        regime.applicable = true;
        regime.lambda_inside = lambda > 0.0 && lambda < star;
      } catch (const Error& e) {
        regime.note = e.what();
      }
    } else {
      regime.note = "supply alpha to compute lambda*";
    }
    regime.checks.push_back(
        check_hypothesis(instance, Hypothesis::H1, params, 1e-8, 1e-1, default_samples));
    if (regime.lambda_inside && regime.checks.back().consistent)
      regime.recommended_method = "sublevel";
    report.mechanisms.push_back(std::move(regime));
  }

  {  // 4.2: coercive minimization on (lambda_mn/(2c), inf), needs (H2), (H3)
    RegimeEntry regime;
    regime.mechanism = "4.2";
    if (params.c) {
      regime.lower = spectrum.lambda_max / (2.0 * *params.c);
      regime.applicable = true;
      regime.lambda_inside = lambda > *regime.lower;
    } else {
      regime.note = "supply c to compute lambda_mn/(2c)";
    }
    if (params.c && params.eta) {
      regime.checks.push_back(check_hypothesis(instance, Hypothesis::H2, params,
                                               1e-8 * *params.eta, *params.eta, default_samples));
      regime.checks.push_back(check_hypothesis(instance, Hypothesis::H2prime, params,
                                               1e-8 * *params.eta, *params.eta, default_samples));
      if (!regime.note.empty()) regime.note += "; ";
      regime.note +=
          "both sign readings of H2 audited; the negative-energy argument needs the H2' "
          "direction";
    }
    if (params.a && params.b && params.T && params.growth)
      regime.checks.push_back(check_hypothesis(instance, Hypothesis::H3, params, *params.T,
                                               std::max(1e3, 10.0 * *params.T),
                                               default_samples));
    bool checks_ok = !regime.checks.empty();
    for (const auto& c : regime.checks)
      if (c.hypothesis != Hypothesis::H2prime) checks_ok = checks_ok && c.consistent;
    if (regime.lambda_inside && checks_ok) regime.recommended_method = "global";
    report.mechanisms.push_back(std::move(regime));
  }

  {  // 4.3: coercive minimization on (0, lambda_1/(2A)), needs (H2), (H4)
    RegimeEntry regime;
    regime.mechanism = "4.3";
    if (params.A) {
      regime.lower = 0.0;
      regime.upper = spectrum.lambda_min / (2.0 * *params.A);
      regime.applicable = true;
      regime.lambda_inside = lambda > 0.0 && lambda < *regime.upper;
    } else {
      regime.note = "supply A to compute lambda_1/(2A)";
    }
    if (params.c && params.eta)
      regime.checks.push_back(check_hypothesis(instance, Hypothesis::H2, params,
                                               1e-8 * *params.eta, *params.eta, default_samples));
    if (params.A)
      regime.checks.push_back(
          check_hypothesis(instance, Hypothesis::H4, params, 1.0, 1e4, default_samples));
    bool checks_ok = !regime.checks.empty();
    for (const auto& c : regime.checks) checks_ok = checks_ok && c.consistent;
    if (regime.lambda_inside && checks_ok) regime.recommended_method = "global";
    report.mechanisms.push_back(std::move(regime));
  }

  {  // 4.4: mountain pass on (lambda_mn/(2 alpha^-), inf), needs (H5), (H6)
    RegimeEntry regime;
    regime.mechanism = "4.4";
    if (params.alpha_table) {
      regime.lower = spectrum.lambda_max / (2.0 * params.alpha_minus());
      regime.applicable = true;
      regime.lambda_inside = lambda > *regime.lower;
    } else {
      regime.note = "supply the alpha table to compute lambda_mn/(2 alpha^-)";
    }
    if (params.alpha_table && params.beta_table && params.M_cut)
      regime.checks.push_back(check_hypothesis(instance, Hypothesis::H5, params, *params.M_cut,
                                               std::max(1e3, 10.0 * *params.M_cut),
                                               default_samples));
    regime.checks.push_back(
        check_hypothesis(instance, Hypothesis::H6, params, 1e-8, 1e-1, default_samples));
    bool checks_ok = true;
    for (const auto& c : regime.checks) checks_ok = checks_ok && c.consistent;
    if (regime.lambda_inside && checks_ok) regime.recommended_method = "mountain-pass";
    report.mechanisms.push_back(std::move(regime));
  }

  return report;
}

}  // namespace elvar
