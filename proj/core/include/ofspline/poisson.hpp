#pragma once

// -u'' = f on [0, 1] and -Laplace(u) = f on the unit square with homogeneous
// Dirichlet conditions. With correction enabled the solution is split as
// u = u_0 + s_u, where s_u is a spline matching the even boundary derivatives
// of u, so that u_0 satisfies the constraints of the optimal/reduced spaces.

#include "ofspline/assembly.hpp"
#include "ofspline/subspace.hpp"

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <string>

namespace ofspline {

/// (order, x) -> f^(order)(x)
using DerivativeFunction = std::function<double(int, double)>;
/// (order1, order2, x1, x2) -> mixed partial derivative
using PartialFunction = std::function<double(int, int, double, double)>;
using ScalarFunction2D = std::function<double(double, double)>;

struct ManufacturedProblem1D {
  std::string name;
  ScalarFunction f;
  DerivativeFunction f_deriv;  // needed for correction
  ScalarFunction u;            // exact solution, optional
  ScalarFunction du;
  DerivativeFunction u_deriv;  // u^(k), optional
};

struct ManufacturedProblem2D {
  std::string name;
  ScalarFunction2D f;
  PartialFunction f_deriv;  // needed for correction from the load
  PartialFunction u_deriv;  // exact solution and its partials, optional
};

/// A spline in the unconstrained space of a knot vector.
struct CorrectionSpline {
  KnotVector knots{0, 1, {0.0, 1.0}};
  Eigen::VectorXd coeffs;

  /// r-th derivative at x.
  double derivative(double x, int r = 0) const;
};

/// N x 2(k+1) map from even-derivative endpoint data to B-spline coefficients,
/// k = floor(p/2). Columns 0..k hold the data u^(2m)(0), columns k+1..2k+1 the
/// data u^(2m)(1); odd derivatives up to order p are set to zero. Requires
/// n_el > p + 1.
Eigen::MatrixXd hermite_map(const KnotVector& knots);

/// Correction spline with the given even derivatives (orders 0, 2, ..., 2k) at 0 and 1.
CorrectionSpline hermite_correction_1d(const SpaceSpec& spec, const Eigen::VectorXd& left,
                                       const Eigen::VectorXd& right);

/// Endpoint data u^(2m)(z) = -f^(2m-2)(z) of a Dirichlet problem.
CorrectionSpline hermite_correction_1d(const SpaceSpec& spec, const ManufacturedProblem1D& prob);

struct PoissonSolution1D {
  Eigen::VectorXd coeffs;  // u_0,h in the trial space
  std::optional<CorrectionSpline> correction;
  std::optional<ErrorNorms> error;  // present when the exact solution is known
};

PoissonSolution1D solve_poisson_1d(const SpaceSpec& spec, const ManufacturedProblem1D& prob, bool correct);

struct TensorCorrection {
  KnotVector knots1{0, 1, {0.0, 1.0}};
  KnotVector knots2{0, 1, {0.0, 1.0}};
  Eigen::MatrixXd coeffs;  // N1 x N2

  double derivative(double x1, double x2, int r1 = 0, int r2 = 0) const;
};

enum class TraceSource { ExactSolution, Load };

/// Boolean sum s_1 + s_2 - s_12 of the univariate Hermite corrections applied
/// to least-squares fits of the edge traces and of the corner data.
TensorCorrection boundary_correction_2d(const SpaceSpec& spec1, const SpaceSpec& spec2,
                                        const ManufacturedProblem2D& prob, TraceSource source);

/// Even normal-derivative trace d^a1/dx1 d^a2/dx2 u at x1 = z (a1 even) from the
/// load, using -Laplace(u) = f and u = 0 on the edge.
double trace_from_load(const ManufacturedProblem2D& prob, int a1, int a2, double z, double x2);

/// Solver for S1 (x) M2 + M1 (x) S2 by univariate eigendecompositions.
class FastDiagonalization {
 public:
  FastDiagonalization(const SpaceSpec& spec1, const SpaceSpec& spec2);

  /// C with S1 C M2 + M1 C S2 = B.
  Eigen::MatrixXd solve(const Eigen::MatrixXd& b) const;
  /// S1 C M2 + M1 C S2.
  Eigen::MatrixXd apply(const Eigen::MatrixXd& c) const;

 private:
  Eigen::MatrixXd s1_, m1_, s2_, m2_;
  Eigen::MatrixXd u1_, u2_;
  Eigen::VectorXd lambda1_, lambda2_;
};

struct PoissonSolution2D {
  Eigen::MatrixXd coeffs;  // n1 x n2
  std::optional<TensorCorrection> correction;
  std::optional<ErrorNorms> error;
};

/// Requires Dirichlet specs.
PoissonSolution2D solve_poisson_2d(const SpaceSpec& spec1, const SpaceSpec& spec2, const ManufacturedProblem2D& prob,
                                   bool correct, TraceSource source = TraceSource::ExactSolution);

}  // namespace ofspline
