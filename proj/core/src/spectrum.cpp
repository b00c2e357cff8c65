#include "ofspline/spectrum.hpp"

#include "ofspline/error.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace ofspline {

namespace {

constexpr double kPi = std::numbers::pi;

double exact_frequency(BoundaryType bc, int l) {
  switch (bc) {
    case BoundaryType::Dirichlet: return l * kPi;
    case BoundaryType::Neumann: return (l - 1) * kPi;
    case BoundaryType::Mixed: return (l - 0.5) * kPi;
  }
  return 0.0;
}

double smallest_positive_frequency(BoundaryType bc) {
  return bc == BoundaryType::Neumann ? exact_frequency(bc, 2) : exact_frequency(bc, 1);
}

}  // namespace

EigenDecomposition generalized_eigen_sym(const Eigen::MatrixXd& s, const Eigen::MatrixXd& m) {
  if (s.rows() != s.cols() || m.rows() != m.cols() || s.rows() != m.rows()) {
    throw ConfigError("generalized_eigen_sym: matrices must be square and of equal order");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) throw NumericalError("generalized_eigen_sym: mass matrix is not positive definite");
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(s, m, Eigen::ComputeEigenvectors | Eigen::Ax_lBx);
  if (solver.info() != Eigen::Success) throw NumericalError("generalized_eigen_sym: eigensolver did not converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

EigenDecomposition generalized_eigen_sym(const SymBandMatrix& s, const SymBandMatrix& m) {
  return generalized_eigen_sym(s.to_dense(), m.to_dense());
}

std::vector<double> exact_frequencies(BoundaryType bc, int count) {
  if (count < 1) throw ConfigError("exact_frequencies: count must be positive");
  std::vector<double> w(static_cast<std::size_t>(count));
  for (int l = 1; l <= count; ++l) w[static_cast<std::size_t>(l - 1)] = exact_frequency(bc, l);
  return w;
}

double exact_eigenfunction(BoundaryType bc, int l, double x) {
  const double w = exact_frequency(bc, l);
  if (bc == BoundaryType::Neumann) return w == 0.0 ? 1.0 : std::numbers::sqrt2 * std::cos(w * x);
  return std::numbers::sqrt2 * std::sin(w * x);
}

double exact_eigenfunction_d1(BoundaryType bc, int l, double x) {
  const double w = exact_frequency(bc, l);
  if (bc == BoundaryType::Neumann) return -std::numbers::sqrt2 * w * std::sin(w * x);
  return std::numbers::sqrt2 * w * std::cos(w * x);
}

Spectrum1D spectrum_1d(const SpaceSpec& spec) {
  const auto stiffness = assemble_stiffness(spec);
  const auto mass = assemble_mass(spec);
  const auto eig = generalized_eigen_sym(stiffness, mass);
  Spectrum1D out;
  out.bc = spec.bc;
  out.eigenvalues = eig.values;
  // Rayleigh quotients: accurate to roundoff relative to each eigenvalue, not to the largest one
  for (int l = 0; l < spec.n; ++l) {
    const Eigen::VectorXd v = eig.vectors.col(l);
    out.eigenvalues(l) = v.dot(stiffness.multiply(v)) / v.dot(mass.multiply(v));
  }
  out.frequencies = out.eigenvalues.cwiseMax(0.0).cwiseSqrt();
  out.vectors = eig.vectors;

  const auto basis = sample_basis(spec, spec.p + 4);
  const auto nq = static_cast<Eigen::Index>(basis.rule.nodes.size());
  Eigen::MatrixXd exact(nq, spec.n);
  for (Eigen::Index q = 0; q < nq; ++q) {
    const double x = basis.rule.nodes[static_cast<std::size_t>(q)];
    const double w = basis.rule.weights[static_cast<std::size_t>(q)];
    for (int l = 1; l <= spec.n; ++l) exact(q, l - 1) = w * exact_eigenfunction(spec.bc, l, x);
  }
  // (u_l, u_{h,l}) for every l
  const Eigen::MatrixXd uh = basis.values.transpose() * out.vectors;
  for (int l = 0; l < spec.n; ++l) {
    if (exact.col(l).dot(uh.col(l)) < 0.0) out.vectors.col(l) *= -1.0;
  }
  return out;
}

double eigval_upper_bound(int l, int n, int p, BoundaryType bc) {
  if (l < 1 || l > n) throw ConfigError("eigval_upper_bound: mode index " + std::to_string(l) + " outside [1, n]");
  const double q = std::pow(exact_frequency(bc, l) / exact_frequency(bc, n + 1), p + 1);
  return q / (1.0 - q);
}

std::optional<double> eigval_sharp_bound(int l, int n, int p, BoundaryType bc) {
  if (l < 1 || l > n) throw ConfigError("eigval_sharp_bound: mode index " + std::to_string(l) + " outside [1, n]");
  const double w = exact_frequency(bc, l);
  if (w == 0.0) return std::nullopt;
  const double ratio = w / smallest_positive_frequency(bc);
  const double c = std::sqrt(static_cast<double>(l)) * ratio * ratio *
                   std::pow(w / exact_frequency(bc, n + 1), 2 * p);
  if (c >= 0.5) return std::nullopt;
  return std::expm1(-0.5 * std::log1p(-2.0 * c));  // 1 / sqrt(1 - 2c) - 1 without cancellation
}

ModeErrorReport mode_errors(const SpaceSpec& spec, const Spectrum1D& spectrum) {
  if (spectrum.vectors.rows() != spec.n || spectrum.vectors.cols() != spec.n) {
    throw ConfigError("mode_errors: spectrum does not belong to this space");
  }
  const auto basis = sample_basis(spec, spec.p + 4);
  const Eigen::MatrixXd uh = basis.values.transpose() * spectrum.vectors;
  const Eigen::MatrixXd duh = basis.derivs.transpose() * spectrum.vectors;

  ModeErrorReport report;
  report.p = spec.p;
  report.n1 = spec.n;
  for (int l = 1; l <= spec.n; ++l) {
    double e0 = 0.0;
    double e1 = 0.0;
    for (std::size_t q = 0; q < basis.rule.nodes.size(); ++q) {
      const double x = basis.rule.nodes[q];
      const auto qi = static_cast<Eigen::Index>(q);
      const double d0 = exact_eigenfunction(spec.bc, l, x) - uh(qi, l - 1);
      const double d1 = exact_eigenfunction_d1(spec.bc, l, x) - duh(qi, l - 1);
      e0 += basis.rule.weights[q] * d0 * d0;
      e1 += basis.rule.weights[q] * d1 * d1;
    }
    ModeError m;
    m.l1 = l;
    m.omega_exact = exact_frequency(spec.bc, l);
    m.omega_h = spectrum.frequencies(l - 1);
    m.rel_err_eigfun = std::sqrt(e0);
    if (m.omega_exact == 0.0) {
      m.rel_err_freq = m.omega_h;
      m.rel_err_deriv = std::sqrt(e1);
    } else {
      m.rel_err_freq = (m.omega_h - m.omega_exact) / m.omega_exact;
      m.rel_err_deriv = std::sqrt(e1) / m.omega_exact;
    }
    m.bound = eigval_upper_bound(l, spec.n, spec.p, spec.bc);
    report.modes.push_back(m);
  }
  return report;
}

int outlier_count(const ModeErrorReport& report) {
  const bool two_d = report.n2 > 0;
  const int p = report.p;
  if (report.n1 <= 2 * p || (two_d && report.n2 <= 2 * p)) {
    throw ConfigError("outlier_count: requires n > 2p in every direction");
  }
  const auto in_window = [&](const ModeError& m) {
    return m.l1 <= report.n1 - p && (!two_d || m.l2 <= report.n2 - p);
  };
  double reference = 0.0;
  for (const auto& m : report.modes) {
    if (m.omega_exact > 0.0 && in_window(m)) reference = std::max(reference, m.rel_err_freq);
  }
  int count = 0;
  for (const auto& m : report.modes) {
    if (m.omega_exact > 0.0 && m.rel_err_freq > 2.0 * reference) ++count;
  }
  return count;
}

Spectrum2D spectrum_2d(const SpaceSpec& spec1, const SpaceSpec& spec2) {
  Spectrum2D out;
  out.dir1 = spectrum_1d(spec1);
  out.dir2 = spectrum_1d(spec2);
  const auto w1 = exact_frequencies(spec1.bc, spec1.n);
  const auto w2 = exact_frequencies(spec2.bc, spec2.n);
  out.modes.reserve(static_cast<std::size_t>(spec1.n) * static_cast<std::size_t>(spec2.n));
  for (int l1 = 1; l1 <= spec1.n; ++l1) {
    for (int l2 = 1; l2 <= spec2.n; ++l2) {
      const double a = w1[static_cast<std::size_t>(l1 - 1)];
      const double b = w2[static_cast<std::size_t>(l2 - 1)];
      out.modes.push_back({l1, l2, a * a + b * b, out.dir1.eigenvalues(l1 - 1) + out.dir2.eigenvalues(l2 - 1)});
    }
  }
  std::stable_sort(out.modes.begin(), out.modes.end(),
                   [](const Mode2D& a, const Mode2D& b) { return a.omega_sq_exact < b.omega_sq_exact; });
  return out;
}

ModeErrorReport mode_errors_2d(const SpaceSpec& spec1, const SpaceSpec& spec2, const Spectrum2D& spectrum) {
  const auto r1 = mode_errors(spec1, spectrum.dir1);
  const auto r2 = mode_errors(spec2, spectrum.dir2);
  ModeErrorReport report;
  report.p = std::max(spec1.p, spec2.p);
  report.n1 = spec1.n;
  report.n2 = spec2.n;
  report.modes.reserve(spectrum.modes.size());
  for (const auto& mode : spectrum.modes) {
    const auto& a = r1.modes[static_cast<std::size_t>(mode.l1 - 1)];
    const auto& b = r2.modes[static_cast<std::size_t>(mode.l2 - 1)];
    ModeError m;
    m.l1 = mode.l1;
    m.l2 = mode.l2;
    m.omega_exact = std::sqrt(mode.omega_sq_exact);
    m.omega_h = std::sqrt(std::max(mode.omega_sq_h, 0.0));
    m.rel_err_freq = m.omega_exact == 0.0 ? m.omega_h : (m.omega_h - m.omega_exact) / m.omega_exact;
    // For unit-norm factors, ||ab - a_h b_h||^2 = 2 - 2 (a, a_h)(b, b_h) with
    // (a, a_h) = 1 - e_a^2 / 2.
    const double ea = a.rel_err_eigfun * a.rel_err_eigfun;
    const double eb = b.rel_err_eigfun * b.rel_err_eigfun;
    m.rel_err_eigfun = std::sqrt(std::max(ea + eb - 0.5 * ea * eb, 0.0));
    // ||d/dx1 (ab - a_h b_h)||^2 = S e_b^2 / 2 + d_a^2 (1 - e_b^2 / 2), with
    // S = ||a'||^2 + ||a_h'||^2 and d_a = ||(a - a_h)'||; same for x2.
    const double da = a.omega_exact == 0.0 ? a.rel_err_deriv : a.rel_err_deriv * a.omega_exact;
    const double db = b.omega_exact == 0.0 ? b.rel_err_deriv : b.rel_err_deriv * b.omega_exact;
    const double sa = a.omega_exact * a.omega_exact + a.omega_h * a.omega_h;
    const double sb = b.omega_exact * b.omega_exact + b.omega_h * b.omega_h;
    const double grad_sq = 0.5 * sa * eb + da * da * (1.0 - 0.5 * eb) + 0.5 * sb * ea + db * db * (1.0 - 0.5 * ea);
    m.rel_err_deriv = m.omega_exact == 0.0 ? std::sqrt(grad_sq) : std::sqrt(grad_sq) / m.omega_exact;
    const double ua = a.omega_exact * (1.0 + a.bound);
    const double ub = b.omega_exact * (1.0 + b.bound);
    m.bound = m.omega_exact == 0.0 ? 0.0 : std::sqrt(ua * ua + ub * ub) / m.omega_exact - 1.0;
    report.modes.push_back(m);
  }
  return report;
}

}  // namespace ofspline
