#pragma once

// Galerkin spectra of -u'' = w^2 u on [0, 1] and of the Laplacian on the unit
// square (tensor products), with error metrics against the exact modes.
//
// Modes are indexed l = 1 .. n in ascending order of frequency. For Neumann
// conditions mode 1 is the constant (w = 0).

#include "ofspline/assembly.hpp"
#include "ofspline/subspace.hpp"

#include <Eigen/Dense>

#include <optional>
#include <vector>

namespace ofspline {

struct EigenDecomposition {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // M-orthonormal columns
};

/// Full spectrum of S v = lambda M v (Cholesky reduction of M, then a
/// tridiagonal QR eigensolver). Throws NumericalError if M is not positive
/// definite or the iteration fails.
EigenDecomposition generalized_eigen_sym(const SymBandMatrix& s, const SymBandMatrix& m);
EigenDecomposition generalized_eigen_sym(const Eigen::MatrixXd& s, const Eigen::MatrixXd& m);

/// The first `count` exact frequencies.
std::vector<double> exact_frequencies(BoundaryType bc, int count);

/// L2-normalized exact eigenfunction of mode l and its derivative.
double exact_eigenfunction(BoundaryType bc, int l, double x);
double exact_eigenfunction_d1(BoundaryType bc, int l, double x);

struct Spectrum1D {
  BoundaryType bc = BoundaryType::Dirichlet;
  Eigen::VectorXd eigenvalues;
  Eigen::VectorXd frequencies;  // sqrt of the eigenvalues, clamped at 0
  Eigen::MatrixXd vectors;      // unit L2 norm, (u_l, u_{h,l}) >= 0
};

Spectrum1D spectrum_1d(const SpaceSpec& spec);

struct ModeError {
  int l1 = 0;
  int l2 = 0;  // 0 for univariate modes
  double omega_exact = 0.0;
  double omega_h = 0.0;
  /// (w_h - w) / w; absolute error w_h for the zero mode.
  double rel_err_freq = 0.0;
  /// ||u - u_h|| / ||u||.
  double rel_err_eigfun = 0.0;
  /// ||(u - u_h)'|| / ||u'||; absolute for the zero mode.
  double rel_err_deriv = 0.0;
  /// Upper bound for rel_err_freq for optimal spaces.
  double bound = 0.0;
};

struct ModeErrorReport {
  int p = 0;
  int n1 = 0;
  int n2 = 0;  // 0 for univariate reports
  std::vector<ModeError> modes;
};

ModeErrorReport mode_errors(const SpaceSpec& spec, const Spectrum1D& spectrum);

/// q / (1 - q), q = (w_l / w_{n+1})^(p+1): bound on the relative frequency
/// error of mode l in the optimal space of dimension n.
double eigval_upper_bound(int l, int n, int p, BoundaryType bc);

/// Sharper asymptotic bound 1 / sqrt(1 - 2c) - 1, c = sqrt(l) (w_l / w_1)^2
/// (w_l / w_{n+1})^(2p), where w_1 is the smallest positive frequency.
/// Empty when c >= 1/2 or for the zero mode.
std::optional<double> eigval_sharp_bound(int l, int n, int p, BoundaryType bc);

/// Modes whose relative frequency error exceeds twice the largest error
/// among the modes l <= n - p (l1 <= n1 - p and l2 <= n2 - p in 2D). The zero
/// mode never counts. Requires n > 2p in every direction.
int outlier_count(const ModeErrorReport& report);

struct Mode2D {
  int l1 = 0;
  int l2 = 0;
  double omega_sq_exact = 0.0;
  double omega_sq_h = 0.0;  // sum of the univariate eigenvalues
};

struct Spectrum2D {
  Spectrum1D dir1;
  Spectrum1D dir2;
  std::vector<Mode2D> modes;  // ascending exact frequency
};

Spectrum2D spectrum_2d(const SpaceSpec& spec1, const SpaceSpec& spec2);

/// Tensor-product mode errors from the univariate reports.
ModeErrorReport mode_errors_2d(const SpaceSpec& spec1, const SpaceSpec& spec2, const Spectrum2D& spectrum);

}  // namespace ofspline
