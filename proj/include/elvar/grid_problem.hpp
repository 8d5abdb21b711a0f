#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "elvar/errors.hpp"

namespace elvar {

/// Flattened position of interior node (i,j), 1-based: k = (j-1)*m + i.
/// Matches the column-block stacking U = (U_1,...,U_n)^T with
/// U_j = (u(1,j),...,u(m,j))^T.
int flatten_index(int i, int j, int m);

/// Inverse of flatten_index; returns (i, j).
std::pair<int, int> unflatten_index(int k, int m);

/// Weight table p(i,j) on [0,m] x [0,n].
///
/// The difference operator forces p(0,j) = 0 for j in [1,n] and p(i,0) = 0
/// for i in [1,m]; every interior weight p(i,j), (i,j) in [1,m] x [1,n],
/// must be strictly positive (this includes the i = m and j = n lines,
/// which the stencil does read). p(0,0) is stored but never read.
class WeightGrid {
 public:
  /// `entries` is row-major with i outer: entries[i*(n+1) + j] = p(i,j).
  /// Throws BoundaryWeightNonzero / NonpositiveInteriorWeight on constraint
  /// violations, InvalidArgument on bad sizes or non-finite values.
  WeightGrid(int m, int n, std::vector<double> entries);

  int m() const { return m_; }
  int n() const { return n_; }
  int node_count() const { return m_ * n_; }

  double p(int i, int j) const {
    if (i < 0 || i > m_ || j < 0 || j > n_)
      raise(Errc::index_out_of_range, "weight index (" + std::to_string(i) + "," +
                                          std::to_string(j) + ") outside [0,m]x[0,n]");
    return p_[static_cast<std::size_t>(i) * (n_ + 1) + j];
  }

  const std::vector<double>& table() const { return p_; }

 private:
  int m_;
  int n_;
  std::vector<double> p_;
};

/// Interior grid function u(i,j) on [1,m] x [1,n] with the fixed flattening
/// above. Boundary values are implicitly zero and never stored.
class GridFunction {
 public:
  GridFunction() = default;
  GridFunction(int m, int n, double fill = 0.0);
  GridFunction(int m, int n, std::vector<double> flat_values);

  static GridFunction constant(int m, int n, double value) { return GridFunction(m, n, value); }

  int m() const { return m_; }
  int n() const { return n_; }
  int size() const { return static_cast<int>(v_.size()); }

  /// 1-based interior access, bounds-checked.
  double at(int i, int j) const { return v_[checked_offset(i, j)]; }
  double& at(int i, int j) { return v_[checked_offset(i, j)]; }

  /// 0-based flat access, unchecked.
  double operator[](int k) const { return v_[static_cast<std::size_t>(k)]; }
  double& operator[](int k) { return v_[static_cast<std::size_t>(k)]; }

  std::span<const double> flat() const { return v_; }
  std::span<double> flat() { return v_; }

  bool same_shape(const GridFunction& other) const { return m_ == other.m_ && n_ == other.n_; }

 private:
  std::size_t checked_offset(int i, int j) const;

  int m_ = 0;
  int n_ = 0;
  std::vector<double> v_;
};

enum class NonlinearityKind {
  linear,            // f(t) = slope * t
  cubic_softening,   // f(t) = 2t - t^3
  power,             // f(t) = s * sign(t) * |t|^(gamma-1)
  rational_quartic,  // F(t) = t^4 / (1 + t^2)
  damped_quadratic,  // F(t) = -t^2 * exp(-|t|)
  tabulated,         // piecewise-linear f on a user lattice
};

enum class PrimitiveMode { closed_form, quadrature };

NonlinearityKind nonlinearity_kind_from_name(std::string_view name);
std::string_view nonlinearity_kind_name(NonlinearityKind kind);

/// Position-separable nonlinearity: f((i,j),t) = coefficient(i,j) * f_kind(t),
/// with primitive F((i,j),t) = coefficient(i,j) * F_kind(t), F(.,0) = 0.
class NonlinearitySpec {
 public:
  static NonlinearitySpec linear(double slope = 2.0);
  static NonlinearitySpec cubic_softening();
  static NonlinearitySpec power(double scale, double exponent);
  static NonlinearitySpec rational_quartic();
  static NonlinearitySpec damped_quadratic();
  /// Knots must be strictly ascending and bracket t = 0.
  static NonlinearitySpec tabulated(std::vector<double> t_knots, std::vector<double> f_values);

  /// Per-node multiplier table, row-major with i outer: table[(i-1)*n + (j-1)].
  NonlinearitySpec& with_coefficient(int m, int n, std::vector<double> table);
  NonlinearitySpec& with_primitive_mode(PrimitiveMode mode);

  NonlinearityKind kind() const { return kind_; }
  PrimitiveMode primitive_mode() const { return mode_; }
  bool has_coefficient() const { return !coeff_.empty(); }
  std::pair<int, int> coefficient_shape() const { return {coeff_m_, coeff_n_}; }
  double coefficient(int i, int j) const;

  double slope() const { return slope_; }
  double power_scale() const { return power_scale_; }
  double power_exponent() const { return power_exponent_; }
  const std::vector<double>& tabulated_t() const { return tab_t_; }
  const std::vector<double>& tabulated_f() const { return tab_f_; }
  const std::vector<double>& coefficient_table() const { return coeff_; }

  /// Kind part f(t), without the per-node coefficient.
  double f(double t) const;
  /// Kind part primitive int_0^t f; closed form or adaptive Simpson
  /// (abs tol 1e-10) depending on primitive_mode.
  double F(double t) const;
  /// Closed-form derivative f'(t) when the catalog provides one.
  /// The tabulated kind has none (Newton falls back to finite differences).
  std::optional<double> f_derivative(double t) const;

  double eval_f(int i, int j, double t) const { return coefficient(i, j) * f(t); }
  double eval_F(int i, int j, double t) const { return coefficient(i, j) * F(t); }

 private:
  NonlinearitySpec() = default;

  double tabulated_f_at(double t) const;
  double tabulated_F_at(double t) const;

  NonlinearityKind kind_ = NonlinearityKind::linear;
  PrimitiveMode mode_ = PrimitiveMode::closed_form;
  double slope_ = 2.0;
  double power_scale_ = 1.0;
  double power_exponent_ = 2.0;
  std::vector<double> tab_t_;
  std::vector<double> tab_f_;
  std::vector<double> tab_cum_;  // integral of the interpolant from tab_t_[0]
  double tab_F0_ = 0.0;          // integral from tab_t_[0] to 0
  std::vector<double> coeff_;
  int coeff_m_ = 0;
  int coeff_n_ = 0;
};

/// Grid + nonlinearity; shapes are validated once here.
class ProblemInstance {
 public:
  ProblemInstance(WeightGrid grid, NonlinearitySpec nonlinearity);

  const WeightGrid& grid() const { return grid_; }
  const NonlinearitySpec& nonlinearity() const { return nl_; }
  int m() const { return grid_.m(); }
  int n() const { return grid_.n(); }
  int node_count() const { return grid_.node_count(); }

  double eval_f(int i, int j, double t) const;
  double eval_F(int i, int j, double t) const;

 private:
  WeightGrid grid_;
  NonlinearitySpec nl_;
};

}  // namespace elvar
