#pragma once

#include "ofspline/subspace.hpp"

#include <Eigen/Dense>

#include <functional>
#include <vector>

namespace ofspline {

using ScalarFunction = std::function<double(double)>;

struct GaussRule {
  std::vector<double> nodes;    // ascending, on [-1, 1]
  std::vector<double> weights;
};

/// m-point Gauss-Legendre rule, 1 <= m <= 32.
GaussRule gauss_legendre(int m);

/// Composite Gauss rule over the elements of a break sequence.
struct QuadratureRule {
  int points_per_element = 0;
  std::vector<double> nodes;
  std::vector<double> weights;
  std::vector<int> element;  // element index of each node
};

QuadratureRule make_quadrature(const std::vector<double>& breaks, int points_per_element);

/// Symmetric band matrix in packed lower-band storage.
class SymBandMatrix {
 public:
  SymBandMatrix(int order, int bandwidth);

  int order() const noexcept { return order_; }
  int bandwidth() const noexcept { return bandwidth_; }

  /// Entry (i, j); zero outside the band.
  double operator()(int i, int j) const;
  /// Accumulate into (i, j) and, by symmetry, (j, i). |i - j| must be within the band.
  void add(int i, int j, double value);

  Eigen::MatrixXd to_dense() const;
  Eigen::VectorXd multiply(const Eigen::VectorXd& x) const;
  double frobenius_norm() const;

 private:
  int order_;
  int bandwidth_;
  std::vector<double> data_;
};

/// Solves A x = b for symmetric positive definite A by band Cholesky.
/// Throws NumericalError if A is not positive definite.
Eigen::VectorXd solve_spd(const SymBandMatrix& a, const Eigen::VectorXd& b);

/// Largest |i - j| for which basis functions i and j overlap.
int coupling_bandwidth(const SpaceSpec& spec);

SymBandMatrix assemble_mass(const SpaceSpec& spec);
SymBandMatrix assemble_stiffness(const SpaceSpec& spec);

/// b_i = (f, basis_i), with p + 3 Gauss points per element.
Eigen::VectorXd assemble_load(const SpaceSpec& spec, const ScalarFunction& f);

/// b_i = (g, basis_i'), with p + 3 Gauss points per element.
Eigen::VectorXd assemble_derivative_load(const SpaceSpec& spec, const ScalarFunction& g);

/// Basis values and first derivatives sampled at a composite Gauss rule:
/// values(k, q) = basis_k(x_q), derivs(k, q) = basis_k'(x_q).
struct SampledBasis {
  QuadratureRule rule;
  Eigen::MatrixXd values;
  Eigen::MatrixXd derivs;
};

SampledBasis sample_basis(const SpaceSpec& spec, int points_per_element);

struct ErrorNorms {
  double l2 = 0.0;
  double h1 = 0.0;  // H1 seminorm
};

/// Extra term added to the discrete function: returns (value, derivative) at x.
using Offset = std::function<std::pair<double, double>(double)>;

/// ||u - u_h|| and ||(u - u_h)'|| with p + 3 Gauss points per element, where
/// u_h = sum_k coeffs_k basis_k (+ offset when given).
ErrorNorms function_error(const SpaceSpec& spec, const Eigen::VectorXd& coeffs,
                          const ScalarFunction& exact, const ScalarFunction& exact_d1,
                          const Offset& offset = {});

}  // namespace ofspline
