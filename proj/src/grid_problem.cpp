#include "elvar/grid_problem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace elvar {

namespace {

bool finite(double x) { return std::isfinite(x); }

// Adaptive composite Simpson on [a,b] with absolute tolerance.
// Classic bisection scheme with the 1/15 Richardson correction.
template <class Fn>
double simpson_segment(const Fn& f, double a, double fa, double b, double fb, double fm,
                       double whole, double tol, int depth) {
  if (depth <= 0)
    raise(Errc::quadrature_nonconvergent,
          "adaptive Simpson exceeded the refinement depth cap");
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  // Intervals this small carry errors far below tol for any continuous
  // integrand; refining further only chases rounding noise (integrable
  // endpoint singularities like sqrt never meet the halved tolerance).
  const bool interval_floor = (m - a) <= 1e-15 * (std::abs(a) + std::abs(b) + 1.0);
  if (std::abs(delta) <= 15.0 * tol || interval_floor) return left + right + delta / 15.0;
  return simpson_segment(f, a, fa, m, fm, flm, left, 0.5 * tol, depth - 1) +
         simpson_segment(f, m, fm, b, fb, frm, right, 0.5 * tol, depth - 1);
}

template <class Fn>
double adaptive_simpson(const Fn& f, double a, double b, double tol, int depth_cap) {
  if (a == b) return 0.0;
  const double fa = f(a);
  const double fb = f(b);
  const double m = 0.5 * (a + b);
  const double fm = f(m);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_segment(f, a, fa, b, fb, fm, whole, tol, depth_cap);
}

constexpr double kQuadratureTol = 1e-10;
constexpr int kQuadratureDepthCap = 64;

}  // namespace

int flatten_index(int i, int j, int m) {
  if (m < 1) raise(Errc::invalid_argument, "flatten_index: m must be >= 1");
  if (i < 1 || i > m || j < 1)
    raise(Errc::index_out_of_range, "flatten_index: node (" + std::to_string(i) + "," +
                                        std::to_string(j) + ") out of range for m=" +
                                        std::to_string(m));
  return (j - 1) * m + i;
}

std::pair<int, int> unflatten_index(int k, int m) {
  if (m < 1) raise(Errc::invalid_argument, "unflatten_index: m must be >= 1");
  if (k < 1)
    raise(Errc::index_out_of_range, "unflatten_index: k=" + std::to_string(k) + " below 1");
  return {(k - 1) % m + 1, (k - 1) / m + 1};
}

WeightGrid::WeightGrid(int m, int n, std::vector<double> entries) : m_(m), n_(n) {
  if (m < 1 || n < 1) raise(Errc::invalid_argument, "grid sizes must be positive");
  const std::size_t expected = static_cast<std::size_t>(m + 1) * (n + 1);
  if (entries.size() != expected)
    raise(Errc::invalid_argument, "weight table must have (m+1)(n+1) = " +
                                      std::to_string(expected) + " entries, got " +
                                      std::to_string(entries.size()));
  for (double v : entries)
    if (!finite(v)) raise(Errc::invalid_argument, "weight table contains a non-finite entry");

  auto entry = [&](int i, int j) -> double {
    return entries[static_cast<std::size_t>(i) * (n + 1) + j];
  };
  for (int j = 1; j <= n; ++j)
    if (entry(0, j) != 0.0)
      raise(Errc::boundary_weight_nonzero,
            "p(0," + std::to_string(j) + ") must be exactly zero, got " +
                std::to_string(entry(0, j)));
  for (int i = 1; i <= m; ++i)
    if (entry(i, 0) != 0.0)
      raise(Errc::boundary_weight_nonzero,
            "p(" + std::to_string(i) + ",0) must be exactly zero, got " +
                std::to_string(entry(i, 0)));
  for (int i = 1; i <= m; ++i)
    for (int j = 1; j <= n; ++j)
      if (!(entry(i, j) > 0.0))
        raise(Errc::nonpositive_interior_weight,
              "p(" + std::to_string(i) + "," + std::to_string(j) + ") must be > 0, got " +
                  std::to_string(entry(i, j)));
  p_ = std::move(entries);
}

GridFunction::GridFunction(int m, int n, double fill) : m_(m), n_(n) {
  if (m < 1 || n < 1) raise(Errc::invalid_argument, "grid function sizes must be positive");
  v_.assign(static_cast<std::size_t>(m) * n, fill);
}

GridFunction::GridFunction(int m, int n, std::vector<double> flat_values) : m_(m), n_(n) {
  if (m < 1 || n < 1) raise(Errc::invalid_argument, "grid function sizes must be positive");
  if (flat_values.size() != static_cast<std::size_t>(m) * n)
    raise(Errc::shape_mismatch, "flat value count " + std::to_string(flat_values.size()) +
                                    " does not match m*n = " + std::to_string(m * n));
  v_ = std::move(flat_values);
}

std::size_t GridFunction::checked_offset(int i, int j) const {
  if (i < 1 || i > m_ || j < 1 || j > n_)
    raise(Errc::index_out_of_range, "node (" + std::to_string(i) + "," + std::to_string(j) +
                                        ") outside [1,m]x[1,n]");
  return static_cast<std::size_t>(j - 1) * m_ + (i - 1);
}

NonlinearityKind nonlinearity_kind_from_name(std::string_view name) {
  if (name == "linear") return NonlinearityKind::linear;
  if (name == "cubic_softening") return NonlinearityKind::cubic_softening;
  if (name == "power") return NonlinearityKind::power;
  if (name == "rational_quartic") return NonlinearityKind::rational_quartic;
  if (name == "damped_quadratic") return NonlinearityKind::damped_quadratic;
  if (name == "tabulated") return NonlinearityKind::tabulated;
  raise(Errc::validation_error, "unknown nonlinearity kind '" + std::string(name) + "'");
}

std::string_view nonlinearity_kind_name(NonlinearityKind kind) {
  switch (kind) {
    case NonlinearityKind::linear: return "linear";
    case NonlinearityKind::cubic_softening: return "cubic_softening";
    case NonlinearityKind::power: return "power";
    case NonlinearityKind::rational_quartic: return "rational_quartic";
    case NonlinearityKind::damped_quadratic: return "damped_quadratic";
    case NonlinearityKind::tabulated: return "tabulated";
  }
  return "unknown";
}

NonlinearitySpec NonlinearitySpec::linear(double slope) {
  if (!finite(slope)) raise(Errc::invalid_argument, "linear slope must be finite");
  NonlinearitySpec s;
  s.kind_ = NonlinearityKind::linear;
  s.slope_ = slope;
  return s;
}

NonlinearitySpec NonlinearitySpec::cubic_softening() {
  NonlinearitySpec s;
  s.kind_ = NonlinearityKind::cubic_softening;
  return s;
}

NonlinearitySpec NonlinearitySpec::power(double scale, double exponent) {
  if (!finite(scale) || !finite(exponent))
    raise(Errc::invalid_argument, "power parameters must be finite");
  if (!(exponent > 1.0))
    raise(Errc::invalid_argument, "power exponent must exceed 1 (f must stay continuous)");
  NonlinearitySpec s;
  s.kind_ = NonlinearityKind::power;
  s.power_scale_ = scale;
  s.power_exponent_ = exponent;
  return s;
}

NonlinearitySpec NonlinearitySpec::rational_quartic() {
  NonlinearitySpec s;
  s.kind_ = NonlinearityKind::rational_quartic;
  return s;
}

NonlinearitySpec NonlinearitySpec::damped_quadratic() {
  NonlinearitySpec s;
  s.kind_ = NonlinearityKind::damped_quadratic;
  return s;
}

NonlinearitySpec NonlinearitySpec::tabulated(std::vector<double> t_knots,
                                             std::vector<double> f_values) {
  if (t_knots.size() < 2 || t_knots.size() != f_values.size())
    raise(Errc::invalid_argument, "tabulated kind needs >= 2 knots with matching values");
  for (std::size_t k = 0; k < t_knots.size(); ++k) {
    if (!finite(t_knots[k]) || !finite(f_values[k]))
      raise(Errc::invalid_argument, "tabulated data must be finite");
    if (k > 0 && !(t_knots[k] > t_knots[k - 1]))
      raise(Errc::invalid_argument, "tabulated knots must be strictly ascending");
  }
  if (t_knots.front() > 0.0 || t_knots.back() < 0.0)
    raise(Errc::invalid_argument, "tabulated lattice must bracket t = 0 (F integrates from 0)");

  NonlinearitySpec s;
  s.kind_ = NonlinearityKind::tabulated;
  s.tab_t_ = std::move(t_knots);
  s.tab_f_ = std::move(f_values);
  // Prefix integrals of the piecewise-linear interpolant (trapezoid is exact).
  s.tab_cum_.assign(s.tab_t_.size(), 0.0);
  for (std::size_t k = 1; k < s.tab_t_.size(); ++k)
    s.tab_cum_[k] = s.tab_cum_[k - 1] + 0.5 * (s.tab_f_[k] + s.tab_f_[k - 1]) *
                                            (s.tab_t_[k] - s.tab_t_[k - 1]);
  s.tab_F0_ = 0.0;
  s.tab_F0_ = s.tabulated_F_at(0.0);
  return s;
}

NonlinearitySpec& NonlinearitySpec::with_coefficient(int m, int n, std::vector<double> table) {
  if (m < 1 || n < 1) raise(Errc::invalid_argument, "coefficient shape must be positive");
  if (table.size() != static_cast<std::size_t>(m) * n)
    raise(Errc::shape_mismatch, "coefficient table must have m*n entries");
  for (double v : table)
    if (!finite(v)) raise(Errc::invalid_argument, "coefficient table must be finite");
  coeff_ = std::move(table);
  coeff_m_ = m;
  coeff_n_ = n;
  return *this;
}

NonlinearitySpec& NonlinearitySpec::with_primitive_mode(PrimitiveMode mode) {
  mode_ = mode;
  return *this;
}

double NonlinearitySpec::coefficient(int i, int j) const {
  if (coeff_.empty()) {
    if (i < 1 || j < 1) raise(Errc::index_out_of_range, "node indices must be >= 1");
    return 1.0;
  }
  if (i < 1 || i > coeff_m_ || j < 1 || j > coeff_n_)
    raise(Errc::index_out_of_range, "node (" + std::to_string(i) + "," + std::to_string(j) +
                                        ") outside the coefficient table");
  return coeff_[static_cast<std::size_t>(i - 1) * coeff_n_ + (j - 1)];
}

double NonlinearitySpec::tabulated_f_at(double t) const {
  if (t < tab_t_.front() || t > tab_t_.back())
    raise(Errc::tabulated_out_of_range,
          "t=" + std::to_string(t) + " outside the tabulated lattice [" +
              std::to_string(tab_t_.front()) + "," + std::to_string(tab_t_.back()) + "]");
  auto it = std::upper_bound(tab_t_.begin(), tab_t_.end(), t);
  std::size_t seg = (it == tab_t_.begin()) ? 0 : static_cast<std::size_t>(it - tab_t_.begin()) - 1;
  if (seg + 1 >= tab_t_.size()) seg = tab_t_.size() - 2;
  const double w = (t - tab_t_[seg]) / (tab_t_[seg + 1] - tab_t_[seg]);
  return tab_f_[seg] + w * (tab_f_[seg + 1] - tab_f_[seg]);
}

double NonlinearitySpec::tabulated_F_at(double t) const {
  if (t < tab_t_.front() || t > tab_t_.back())
    raise(Errc::tabulated_out_of_range,
          "t=" + std::to_string(t) + " outside the tabulated lattice");
  auto it = std::upper_bound(tab_t_.begin(), tab_t_.end(), t);
  std::size_t seg = (it == tab_t_.begin()) ? 0 : static_cast<std::size_t>(it - tab_t_.begin()) - 1;
  if (seg + 1 >= tab_t_.size()) seg = tab_t_.size() - 2;
  const double dt = t - tab_t_[seg];
  const double slope = (tab_f_[seg + 1] - tab_f_[seg]) / (tab_t_[seg + 1] - tab_t_[seg]);
  return tab_cum_[seg] + tab_f_[seg] * dt + 0.5 * slope * dt * dt - tab_F0_;
}

double NonlinearitySpec::f(double t) const {
  switch (kind_) {
    case NonlinearityKind::linear:
      return slope_ * t;
    case NonlinearityKind::cubic_softening:
      return 2.0 * t - t * t * t;
    case NonlinearityKind::power: {
      if (t == 0.0) return 0.0;
      const double sgn = t > 0.0 ? 1.0 : -1.0;
      return power_scale_ * sgn * std::pow(std::abs(t), power_exponent_ - 1.0);
    }
    case NonlinearityKind::rational_quartic: {
      const double t2 = t * t;
      const double d = 1.0 + t2;
      return 2.0 * t * t2 * (2.0 + t2) / (d * d);
    }
    case NonlinearityKind::damped_quadratic: {
      const double a = std::abs(t);
      const double sgn = t > 0.0 ? 1.0 : (t < 0.0 ? -1.0 : 0.0);
      return sgn * std::exp(-a) * (t * t - 2.0 * a);
    }
    case NonlinearityKind::tabulated:
      return tabulated_f_at(t);
  }
  return 0.0;
}

double NonlinearitySpec::F(double t) const {
  if (mode_ == PrimitiveMode::quadrature) {
    auto fn = [this](double x) { return f(x); };
    if (t >= 0.0) return adaptive_simpson(fn, 0.0, t, kQuadratureTol, kQuadratureDepthCap);
    return -adaptive_simpson(fn, t, 0.0, kQuadratureTol, kQuadratureDepthCap);
  }
  switch (kind_) {
    case NonlinearityKind::linear:
      return 0.5 * slope_ * t * t;
    case NonlinearityKind::cubic_softening:
      return t * t - 0.25 * t * t * t * t;
    case NonlinearityKind::power:
      return power_scale_ / power_exponent_ * std::pow(std::abs(t), power_exponent_);
    case NonlinearityKind::rational_quartic: {
      const double t2 = t * t;
      return t2 * t2 / (1.0 + t2);
    }
    case NonlinearityKind::damped_quadratic:
      return -t * t * std::exp(-std::abs(t));
    case NonlinearityKind::tabulated:
      return tabulated_F_at(t);
  }
  return 0.0;
}

std::optional<double> NonlinearitySpec::f_derivative(double t) const {
  switch (kind_) {
    case NonlinearityKind::linear:
      return slope_;
    case NonlinearityKind::cubic_softening:
      return 2.0 - 3.0 * t * t;
    case NonlinearityKind::power:
      // Blows up at t = 0 for exponents below 2; callers guard non-finite values.
      return power_scale_ * (power_exponent_ - 1.0) *
             std::pow(std::abs(t), power_exponent_ - 2.0);
    case NonlinearityKind::rational_quartic: {
      const double t2 = t * t;
      const double d = 1.0 + t2;
      return 2.0 * t2 * (6.0 + 3.0 * t2 + t2 * t2) / (d * d * d);
    }
    case NonlinearityKind::damped_quadratic: {
      const double a = std::abs(t);
      return std::exp(-a) * (-t * t + 4.0 * a - 2.0);
    }
    case NonlinearityKind::tabulated:
      return std::nullopt;
  }
  return std::nullopt;
}

ProblemInstance::ProblemInstance(WeightGrid grid, NonlinearitySpec nonlinearity)
    : grid_(std::move(grid)), nl_(std::move(nonlinearity)) {
  if (nl_.has_coefficient()) {
    auto [cm, cn] = nl_.coefficient_shape();
    if (cm != grid_.m() || cn != grid_.n())
      raise(Errc::shape_mismatch, "coefficient table shape (" + std::to_string(cm) + "," +
                                      std::to_string(cn) + ") does not match grid (" +
                                      std::to_string(grid_.m()) + "," +
                                      std::to_string(grid_.n()) + ")");
  }
}

double ProblemInstance::eval_f(int i, int j, double t) const {
  if (i < 1 || i > grid_.m() || j < 1 || j > grid_.n())
    raise(Errc::index_out_of_range, "node outside the interior grid");
  return nl_.eval_f(i, j, t);
}

double ProblemInstance::eval_F(int i, int j, double t) const {
  if (i < 1 || i > grid_.m() || j < 1 || j > grid_.n())
    raise(Errc::index_out_of_range, "node outside the interior grid");
  return nl_.eval_F(i, j, t);
}

}  // namespace elvar
