#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "elvar/grid_problem.hpp"
#include "elvar/spectral.hpp"

namespace elvar {

/// Constants appearing in the growth hypotheses. Tables are row-major with
/// i outer, shape m x n, matching the coefficient table convention.
struct HypothesisParams {
  std::optional<double> c;        // F < -c t^2 near 0
  std::optional<double> eta;      // the near-0 window |t| < eta
  std::optional<double> a;        // F < a|t|^growth + b in the tails
  std::optional<double> b;
  std::optional<double> T;        // tail threshold |t| >= T
  std::optional<double> growth;   // exponent in (1,2)
  std::optional<double> A;        // limsup F/t^2 < A
  std::optional<std::vector<double>> alpha_table;  // F >= alpha(i,j) t^2 + beta(i,j)
  std::optional<std::vector<double>> beta_table;
  std::optional<double> M_cut;    // tail threshold |t| > M for the bound above

  void validate(int m, int n) const;
  double alpha_minus() const;  // min of alpha_table (requires presence)
  double beta_minus() const;
};

struct ThresholdReport {
  std::optional<double> lambda_star;  // sublevel-mechanism threshold, needs alpha
  double lambda_42_lower = 0.0;       // lambda_mn / (2c)
  double lambda_43_upper = 0.0;       // lambda_1 / (2A)
  double lambda_44_lower = 0.0;       // lambda_mn / (2 alpha^-)
  // inputs echoed
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  double c = 0.0;
  double A = 0.0;
  double alpha_minus = 0.0;
  std::optional<double> alpha;
};

/// lambda* = lambda_1 alpha^2 / (2 sum_nodes max_{|t|<=alpha} F((i,j),t)).
/// Per-node maxima by 1e4-point uniform sampling on [-alpha, alpha] plus
/// golden-section refinement (1e-12 in t). NonpositiveDenominator when the
/// sum is <= 0.
double threshold_lambda_star(const ProblemInstance& instance, const SpectrumSummary& spectrum,
                             double alpha);

ThresholdReport thresholds(const ProblemInstance& instance, const SpectrumSummary& spectrum,
                           const HypothesisParams& params,
                           std::optional<double> alpha = std::nullopt);

enum class Hypothesis { H1, H2, H2prime, H3, H4, H5, H6 };

std::string_view hypothesis_name(Hypothesis h);
Hypothesis hypothesis_from_name(std::string_view name);

struct HypothesisWitness {
  int i = 0;
  int j = 0;
  double t = 0.0;
  double value = 0.0;  // F((i,j),t) for pointwise checks, F/t^2 for limit checks
};

struct HypothesisCheckReport {
  Hypothesis hypothesis = Hypothesis::H1;
  bool consistent = false;
  std::optional<HypothesisWitness> witness;  // first violation, re-evaluable
  double t_lo = 0.0;
  double t_hi = 0.0;
  int samples = 0;
  /// Limit hypotheses (H1, H4, H6) can only be spot-checked on a finite grid:
  /// the verdict is evidence, never proof.
  bool evidence_only = false;
  std::string note;
};

/// Samples t on a geometric grid over [t_lo, t_hi], both signs, all nodes.
/// Inequality hypotheses (H2, H2', H3, H5) are checked pointwise; limit
/// hypotheses (H1, H4, H6) as threshold exceedance at the extreme samples.
HypothesisCheckReport check_hypothesis(const ProblemInstance& instance, Hypothesis which,
                                       const HypothesisParams& params, double t_lo, double t_hi,
                                       int samples);

struct RegimeEntry {
  std::string mechanism;                // "4.1" .. "4.4", matching the lambda_4x thresholds
  std::optional<double> lower;          // interval (lower, upper); absent = unbounded/unknown
  std::optional<double> upper;
  bool applicable = false;              // parameters sufficient to compute the interval
  bool lambda_inside = false;
  std::vector<HypothesisCheckReport> checks;
  std::optional<std::string> recommended_method;
  std::string note;
};

struct RegimeReport {
  double lambda = 0.0;
  std::vector<RegimeEntry> mechanisms;
};

/// Joins the thresholds with a given lambda: which guaranteed intervals
/// contain it, what the hypothesis audits say, and which solver each
/// existence mechanism suggests (4.1 sublevel, 4.2/4.3 global, 4.4
/// mountain pass).
RegimeReport regime_report(const ProblemInstance& instance, const SpectrumSummary& spectrum,
                           double lambda, const HypothesisParams& params,
                           std::optional<double> alpha = std::nullopt);

}  // namespace elvar
