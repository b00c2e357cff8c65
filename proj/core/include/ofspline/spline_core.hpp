#pragma once

// B-spline evaluation on the unit interval.
//
// Knots follow the indexing xi_{-p}, ..., xi_{n_el + p}: the n_el + p
// B-splines N_i, i = -p .. n_el - 1, are supported on [xi_i, xi_{i+p+1}] and
// the knots xi_1 .. xi_{n_el-1} are the interior break points of [0, 1].
// Point evaluation is right-continuous, except at x = 1 which takes left
// limits so that the last element is closed.

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace ofspline {

/// Cardinal B-spline of degree p, supported on [0, p + 1].
double cardinal_eval(int p, double t);

/// r-th derivative of the cardinal B-spline, 0 <= r <= p.
double cardinal_derivative(int p, int r, double t);

class KnotVector {
 public:
  /// `values` holds xi_{-p} .. xi_{n_el+p} (n_el + 2p + 1 entries).
  KnotVector(int degree, int num_elements, std::vector<double> values);

  /// xi_i = (i - shift) / inverse_spacing, i = -p .. n_el + p.
  static KnotVector uniform(int degree, int num_elements, double inverse_spacing, double shift);
  /// Uniform break points i / n_el with (p+1)-fold end knots.
  static KnotVector open_uniform(int degree, int num_elements);

  int degree() const noexcept { return degree_; }
  int num_elements() const noexcept { return num_elements_; }
  /// Number of B-splines, n_el + p.
  int num_basis() const noexcept { return num_elements_ + degree_; }

  /// Knot xi_i, i in [-p, n_el + p].
  double operator[](int i) const { return values_[static_cast<std::size_t>(i + degree_)]; }
  std::span<const double> values() const noexcept { return values_; }

  /// Element index j in [0, n_el - 1] with xi_j <= x < xi_{j+1} (x = 1 maps to n_el - 1).
  int find_span(double x) const;

  /// Break points {0, xi_1, ..., xi_{n_el-1}, 1}.
  std::vector<double> breaks() const;

 private:
  int degree_;
  int num_elements_;
  std::vector<double> values_;
};

/// Values and derivatives of the p + 1 B-splines active at a point.
struct BasisEval {
  /// Column offset (0-based, i.e. i + p) of the first active B-spline.
  int first_active = 0;
  /// Row d holds the d-th derivatives of the active B-splines.
  Eigen::MatrixXd values;
};

/// Evaluate all active B-splines at x in [0, 1] with derivatives up to order r <= p.
BasisEval bspline_eval_all(const KnotVector& knots, int r, double x);

}  // namespace ofspline
