#include "ofspline/poisson.hpp"

#include "ofspline/error.hpp"
#include "ofspline/spectrum.hpp"

#include <Eigen/LU>

#include <cmath>
#include <string>

namespace ofspline {

namespace {

void require_dirichlet(const SpaceSpec& spec, const char* where) {
  if (spec.bc != BoundaryType::Dirichlet) {
    throw ConfigError(std::string(where) + ": only homogeneous Dirichlet problems are supported");
  }
}

double spline_derivative(const KnotVector& knots, const Eigen::VectorXd& coeffs, double x, int r) {
  if (r > knots.degree()) return 0.0;
  const auto ev = bspline_eval_all(knots, r, x);
  double v = 0.0;
  for (Eigen::Index j = 0; j < ev.values.cols(); ++j) v += coeffs(ev.first_active + j) * ev.values(r, j);
  return v;
}

// values(a, q) = d^r N_a(x_q) for all B-splines of the knot vector.
Eigen::MatrixXd sample_full(const KnotVector& knots, const std::vector<double>& x, int r) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(knots.num_basis(), static_cast<Eigen::Index>(x.size()));
  if (r > knots.degree()) return out;
  for (std::size_t q = 0; q < x.size(); ++q) {
    const auto ev = bspline_eval_all(knots, r, x[q]);
    for (Eigen::Index j = 0; j < ev.values.cols(); ++j) {
      out(ev.first_active + j, static_cast<Eigen::Index>(q)) = ev.values(r, j);
    }
  }
  return out;
}

// Least-squares fit of g in the unconstrained space of spec, p + 3 Gauss points per element.
class TraceFitter {
 public:
  explicit TraceFitter(const SpaceSpec& spec)
      : rule_(make_quadrature(spec.breaks, spec.p + 3)), values_(sample_full(spec.knots, rule_.nodes, 0)) {
    Eigen::MatrixXd weighted = values_;
    for (Eigen::Index q = 0; q < weighted.cols(); ++q) weighted.col(q) *= rule_.weights[static_cast<std::size_t>(q)];
    weighted_ = weighted;
    lu_.compute(weighted * values_.transpose());
  }

  const std::vector<double>& nodes() const { return rule_.nodes; }

  Eigen::VectorXd fit(const Eigen::VectorXd& samples) const { return lu_.solve(weighted_ * samples); }

 private:
  QuadratureRule rule_;
  Eigen::MatrixXd values_;
  Eigen::MatrixXd weighted_;
  Eigen::FullPivLU<Eigen::MatrixXd> lu_;
};

}  // namespace

double CorrectionSpline::derivative(double x, int r) const { return spline_derivative(knots, coeffs, x, r); }

Eigen::MatrixXd hermite_map(const KnotVector& knots) {
  const int p = knots.degree();
  const int n_el = knots.num_elements();
  if (n_el <= p + 1) {
    throw ConfigError("hermite_map: needs more than p + 1 elements (p = " + std::to_string(p) +
                      ", n_el = " + std::to_string(n_el) + ")");
  }
  const int k = p / 2;
  const int nb = knots.num_basis();
  Eigen::MatrixXd map = Eigen::MatrixXd::Zero(nb, 2 * (k + 1));
  for (int side = 0; side < 2; ++side) {
    const double z = side == 0 ? 0.0 : 1.0;
    const int first = side == 0 ? 0 : nb - (p + 1);
    const auto ev = bspline_eval_all(knots, p, z);
    if (ev.first_active != first) throw NumericalError("hermite_map: unexpected active B-splines at the boundary");
    // rows: derivative orders 0..p; columns: the p + 1 boundary B-splines
    // derivative rows grow like h^-r; equilibrate before factoring
    const Eigen::VectorXd row_scale = ev.values.cwiseAbs().rowwise().maxCoeff().cwiseInverse();
    Eigen::FullPivLU<Eigen::MatrixXd> lu(row_scale.asDiagonal() * ev.values);
    if (!lu.isInvertible()) throw NumericalError("hermite_map: singular endpoint Taylor system");
    for (int m = 0; m <= k; ++m) {
      Eigen::VectorXd rhs = Eigen::VectorXd::Zero(p + 1);
      rhs(2 * m) = row_scale(2 * m);
      map.block(first, side * (k + 1) + m, p + 1, 1) = lu.solve(rhs);
    }
  }
  return map;
}

CorrectionSpline hermite_correction_1d(const SpaceSpec& spec, const Eigen::VectorXd& left,
                                       const Eigen::VectorXd& right) {
  const int k = spec.p / 2;
  if (left.size() != k + 1 || right.size() != k + 1) {
    throw ConfigError("hermite_correction_1d: expected " + std::to_string(k + 1) + " even derivatives per endpoint");
  }
  Eigen::VectorXd data(2 * (k + 1));
  data << left, right;
  return {spec.knots, hermite_map(spec.knots) * data};
}

CorrectionSpline hermite_correction_1d(const SpaceSpec& spec, const ManufacturedProblem1D& prob) {
  require_dirichlet(spec, "hermite_correction_1d");
  if (!prob.f_deriv) throw ConfigError("hermite_correction_1d: problem '" + prob.name + "' has no load derivatives");
  const int k = spec.p / 2;
  Eigen::VectorXd left = Eigen::VectorXd::Zero(k + 1);
  Eigen::VectorXd right = Eigen::VectorXd::Zero(k + 1);
  for (int m = 1; m <= k; ++m) {
    left(m) = -prob.f_deriv(2 * m - 2, 0.0);
    right(m) = -prob.f_deriv(2 * m - 2, 1.0);
  }
  return hermite_correction_1d(spec, left, right);
}

PoissonSolution1D solve_poisson_1d(const SpaceSpec& spec, const ManufacturedProblem1D& prob, bool correct) {
  require_dirichlet(spec, "solve_poisson_1d");
  PoissonSolution1D sol;
  Eigen::VectorXd b = assemble_load(spec, prob.f);
  if (correct) {
    sol.correction = hermite_correction_1d(spec, prob);
    const auto& s = *sol.correction;
    b -= assemble_derivative_load(spec, [&s](double x) { return s.derivative(x, 1); });
  }
  sol.coeffs = solve_spd(assemble_stiffness(spec), b);
  if (prob.u && prob.du) {
    Offset offset;
    if (sol.correction) {
      const auto& s = *sol.correction;
      offset = [&s](double x) { return std::pair{s.derivative(x, 0), s.derivative(x, 1)}; };
    }
    sol.error = function_error(spec, sol.coeffs, prob.u, prob.du, offset);
  }
  return sol;
}

double TensorCorrection::derivative(double x1, double x2, int r1, int r2) const {
  if (r1 > knots1.degree() || r2 > knots2.degree()) return 0.0;
  const auto e1 = bspline_eval_all(knots1, r1, x1);
  const auto e2 = bspline_eval_all(knots2, r2, x2);
  double v = 0.0;
  for (Eigen::Index a = 0; a < e1.values.cols(); ++a) {
    for (Eigen::Index b = 0; b < e2.values.cols(); ++b) {
      v += coeffs(e1.first_active + a, e2.first_active + b) * e1.values(r1, a) * e2.values(r2, b);
    }
  }
  return v;
}

double trace_from_load(const ManufacturedProblem2D& prob, int a1, int a2, double z, double x2) {
  if (!prob.f_deriv) throw ConfigError("trace_from_load: problem '" + prob.name + "' has no load derivatives");
  if (a1 % 2 != 0) throw ConfigError("trace_from_load: normal derivative order must be even");
  double v = 0.0;
  double sign = -1.0;
  for (int r = 1; r <= a1 / 2; ++r) {
    v += sign * prob.f_deriv(a1 - 2 * r, a2 + 2 * (r - 1), z, x2);
    sign = -sign;
  }
  return v;
}

TensorCorrection boundary_correction_2d(const SpaceSpec& spec1, const SpaceSpec& spec2,
                                        const ManufacturedProblem2D& prob, TraceSource source) {
  require_dirichlet(spec1, "boundary_correction_2d");
  require_dirichlet(spec2, "boundary_correction_2d");
  if (source == TraceSource::ExactSolution && !prob.u_deriv) {
    throw ConfigError("boundary_correction_2d: problem '" + prob.name + "' has no exact solution");
  }
  // d^a1/dx1 d^a2/dx2 u at (x1, x2), where x1 is on an edge x1 = const (a1 even)
  const auto partial = [&](int a1, int a2, double x1, double x2) {
    return source == TraceSource::ExactSolution ? prob.u_deriv(a1, a2, x1, x2)
                                                : trace_from_load(prob, a1, a2, x1, x2);
  };
  // same with the roles of the directions swapped
  const auto partial_t = [&](int a2, int a1, double x2, double x1) {
    if (source == TraceSource::ExactSolution) return prob.u_deriv(a1, a2, x1, x2);
    ManufacturedProblem2D swapped;
    swapped.f_deriv = [&prob](int b1, int b2, double y1, double y2) { return prob.f_deriv(b2, b1, y2, y1); };
    swapped.name = prob.name;
    return trace_from_load(swapped, a2, a1, x2, x1);
  };

  const Eigen::MatrixXd h1 = hermite_map(spec1.knots);
  const Eigen::MatrixXd h2 = hermite_map(spec2.knots);
  const int k1 = spec1.p / 2;
  const int k2 = spec2.p / 2;
  const auto order = [](int m, int k) { return 2 * (m % (k + 1)); };
  const auto endpoint = [](int m, int k) { return m <= k ? 0.0 : 1.0; };

  const TraceFitter fit1(spec1);
  const TraceFitter fit2(spec2);

  // traces on x1 = 0, 1 fitted in x2
  Eigen::MatrixXd d1 = Eigen::MatrixXd::Zero(2 * (k1 + 1), spec2.knots.num_basis());
  for (int m = 0; m < d1.rows(); ++m) {
    const int a = order(m, k1);
    if (a == 0) continue;
    Eigen::VectorXd samples(static_cast<Eigen::Index>(fit2.nodes().size()));
    for (Eigen::Index q = 0; q < samples.size(); ++q) {
      samples(q) = partial(a, 0, endpoint(m, k1), fit2.nodes()[static_cast<std::size_t>(q)]);
    }
    d1.row(m) = fit2.fit(samples).transpose();
  }
  // traces on x2 = 0, 1 fitted in x1
  Eigen::MatrixXd d2 = Eigen::MatrixXd::Zero(2 * (k2 + 1), spec1.knots.num_basis());
  for (int m = 0; m < d2.rows(); ++m) {
    const int a = order(m, k2);
    if (a == 0) continue;
    Eigen::VectorXd samples(static_cast<Eigen::Index>(fit1.nodes().size()));
    for (Eigen::Index q = 0; q < samples.size(); ++q) {
      samples(q) = partial_t(a, 0, endpoint(m, k2), fit1.nodes()[static_cast<std::size_t>(q)]);
    }
    d2.row(m) = fit1.fit(samples).transpose();
  }
  // corner data
  Eigen::MatrixXd corner = Eigen::MatrixXd::Zero(2 * (k1 + 1), 2 * (k2 + 1));
  for (int m1 = 0; m1 < corner.rows(); ++m1) {
    for (int m2 = 0; m2 < corner.cols(); ++m2) {
      const int a1 = order(m1, k1);
      const int a2 = order(m2, k2);
      if (a1 == 0 || a2 == 0) continue;
      corner(m1, m2) = partial(a1, a2, endpoint(m1, k1), endpoint(m2, k2));
    }
  }
  TensorCorrection s{spec1.knots, spec2.knots, {}};
  s.coeffs = h1 * d1 + d2.transpose() * h2.transpose() - h1 * corner * h2.transpose();
  return s;
}

FastDiagonalization::FastDiagonalization(const SpaceSpec& spec1, const SpaceSpec& spec2)
    : s1_(assemble_stiffness(spec1).to_dense()),
      m1_(assemble_mass(spec1).to_dense()),
      s2_(assemble_stiffness(spec2).to_dense()),
      m2_(assemble_mass(spec2).to_dense()) {
  auto e1 = generalized_eigen_sym(s1_, m1_);
  auto e2 = generalized_eigen_sym(s2_, m2_);
  u1_ = std::move(e1.vectors);
  u2_ = std::move(e2.vectors);
  lambda1_ = std::move(e1.values);
  lambda2_ = std::move(e2.values);
}

Eigen::MatrixXd FastDiagonalization::solve(const Eigen::MatrixXd& b) const {
  if (b.rows() != u1_.rows() || b.cols() != u2_.rows()) throw ConfigError("FastDiagonalization: wrong load shape");
  Eigen::MatrixXd x = u1_.transpose() * b * u2_;
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      const double d = lambda1_(i) + lambda2_(j);
      if (!(d > 0.0)) throw NumericalError("FastDiagonalization: singular operator");
      x(i, j) /= d;
    }
  }
  return u1_ * x * u2_.transpose();
}

Eigen::MatrixXd FastDiagonalization::apply(const Eigen::MatrixXd& c) const {
  return s1_ * c * m2_ + m1_ * c * s2_;
}

PoissonSolution2D solve_poisson_2d(const SpaceSpec& spec1, const SpaceSpec& spec2, const ManufacturedProblem2D& prob,
                                   bool correct, TraceSource source) {
  require_dirichlet(spec1, "solve_poisson_2d");
  require_dirichlet(spec2, "solve_poisson_2d");
  const auto q1 = sample_basis(spec1, spec1.p + 3);
  const auto q2 = sample_basis(spec2, spec2.p + 3);
  const auto& x1 = q1.rule.nodes;
  const auto& x2 = q2.rule.nodes;
  const auto nq1 = static_cast<Eigen::Index>(x1.size());
  const auto nq2 = static_cast<Eigen::Index>(x2.size());

  Eigen::MatrixXd fw(nq1, nq2);
  for (Eigen::Index i = 0; i < nq1; ++i) {
    for (Eigen::Index j = 0; j < nq2; ++j) {
      fw(i, j) = prob.f(x1[static_cast<std::size_t>(i)], x2[static_cast<std::size_t>(j)]) *
                 q1.rule.weights[static_cast<std::size_t>(i)] * q2.rule.weights[static_cast<std::size_t>(j)];
    }
  }
  Eigen::MatrixXd b = q1.values * fw * q2.values.transpose();

  PoissonSolution2D sol;
  if (correct) {
    sol.correction = boundary_correction_2d(spec1, spec2, prob, source);
    const auto full1 = unconstrained(spec1);
    const auto full2 = unconstrained(spec2);
    const Eigen::MatrixXd sb1 = assemble_stiffness(full1).to_dense();
    const Eigen::MatrixXd mb1 = assemble_mass(full1).to_dense();
    const Eigen::MatrixXd sb2 = assemble_stiffness(full2).to_dense();
    const Eigen::MatrixXd mb2 = assemble_mass(full2).to_dense();
    const auto& e1 = spec1.extraction.entries();
    const auto& e2 = spec2.extraction.entries();
    const auto& cs = sol.correction->coeffs;
    b -= e1 * (sb1 * cs * mb2 + mb1 * cs * sb2) * e2.transpose();
  }
  const FastDiagonalization fd(spec1, spec2);
  sol.coeffs = fd.solve(b);

  if (prob.u_deriv) {
    Eigen::MatrixXd u = q1.values.transpose() * sol.coeffs * q2.values;
    Eigen::MatrixXd u_1 = q1.derivs.transpose() * sol.coeffs * q2.values;
    Eigen::MatrixXd u_2 = q1.values.transpose() * sol.coeffs * q2.derivs;
    if (sol.correction) {
      const auto& cs = sol.correction->coeffs;
      const auto w1 = sample_full(spec1.knots, x1, 0);
      const auto w2 = sample_full(spec2.knots, x2, 0);
      const auto dw1 = sample_full(spec1.knots, x1, 1);
      const auto dw2 = sample_full(spec2.knots, x2, 1);
      u += w1.transpose() * cs * w2;
      u_1 += dw1.transpose() * cs * w2;
      u_2 += w1.transpose() * cs * dw2;
    }
    double l2 = 0.0;
    double h1 = 0.0;
    for (Eigen::Index i = 0; i < nq1; ++i) {
      for (Eigen::Index j = 0; j < nq2; ++j) {
        const double a = x1[static_cast<std::size_t>(i)];
        const double c = x2[static_cast<std::size_t>(j)];
        const double w = q1.rule.weights[static_cast<std::size_t>(i)] * q2.rule.weights[static_cast<std::size_t>(j)];
        const double e0 = prob.u_deriv(0, 0, a, c) - u(i, j);
        const double e1 = prob.u_deriv(1, 0, a, c) - u_1(i, j);
        const double e2 = prob.u_deriv(0, 1, a, c) - u_2(i, j);
        l2 += w * e0 * e0;
        h1 += w * (e1 * e1 + e2 * e2);
      }
    }
    sol.error = ErrorNorms{std::sqrt(l2), std::sqrt(h1)};
  }
  return sol;
}

}  // namespace ofspline
