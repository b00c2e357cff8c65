#include "ofspline/assembly.hpp"

#include "ofspline/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace ofspline {

GaussRule gauss_legendre(int m) {
  if (m < 1 || m > 32) throw ConfigError("gauss_legendre: m = " + std::to_string(m) + " outside [1, 32]");
  GaussRule rule;
  rule.nodes.assign(static_cast<std::size_t>(m), 0.0);
  rule.weights.assign(static_cast<std::size_t>(m), 0.0);
  const auto legendre = [m](double x) {
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= m; ++k) {
      const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = pk;
    }
    if (m == 1) p0 = 1.0;
    return std::pair{p1, m * (x * p1 - p0) / (x * x - 1.0)};
  };
  for (int i = 0; i < (m + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
    for (int iter = 0; iter < 100; ++iter) {
      const auto [pm, dpm] = legendre(x);
      const double dx = pm / dpm;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double dp = legendre(x).second;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[static_cast<std::size_t>(i)] = -x;
    rule.nodes[static_cast<std::size_t>(m - 1 - i)] = x;
    rule.weights[static_cast<std::size_t>(i)] = w;
    rule.weights[static_cast<std::size_t>(m - 1 - i)] = w;
  }
  if (m % 2 == 1) rule.nodes[static_cast<std::size_t>(m / 2)] = 0.0;
  return rule;
}

QuadratureRule make_quadrature(const std::vector<double>& breaks, int points_per_element) {
  const auto g = gauss_legendre(points_per_element);
  QuadratureRule q;
  q.points_per_element = points_per_element;
  for (std::size_t e = 0; e + 1 < breaks.size(); ++e) {
    const double a = breaks[e];
    const double b = breaks[e + 1];
    const double half = 0.5 * (b - a);
    for (std::size_t k = 0; k < g.nodes.size(); ++k) {
      q.nodes.push_back(a + half * (g.nodes[k] + 1.0));
      q.weights.push_back(half * g.weights[k]);
      q.element.push_back(static_cast<int>(e));
    }
  }
  return q;
}

SymBandMatrix::SymBandMatrix(int order, int bandwidth)
    : order_(order),
      bandwidth_(std::min(bandwidth, std::max(order - 1, 0))),
      data_(static_cast<std::size_t>(order) * static_cast<std::size_t>(bandwidth_ + 1), 0.0) {}

double SymBandMatrix::operator()(int i, int j) const {
  if (i < j) std::swap(i, j);
  if (i - j > bandwidth_) return 0.0;
  return data_[static_cast<std::size_t>(j) * static_cast<std::size_t>(bandwidth_ + 1) +
               static_cast<std::size_t>(i - j)];
}

void SymBandMatrix::add(int i, int j, double value) {
  if (i < j) std::swap(i, j);
  if (i - j > bandwidth_) throw NumericalError("SymBandMatrix::add: entry outside the band");
  data_[static_cast<std::size_t>(j) * static_cast<std::size_t>(bandwidth_ + 1) +
        static_cast<std::size_t>(i - j)] += value;
}

Eigen::MatrixXd SymBandMatrix::to_dense() const {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(order_, order_);
  for (int j = 0; j < order_; ++j) {
    for (int i = j; i <= std::min(order_ - 1, j + bandwidth_); ++i) {
      a(i, j) = a(j, i) = (*this)(i, j);
    }
  }
  return a;
}

Eigen::VectorXd SymBandMatrix::multiply(const Eigen::VectorXd& x) const {
  Eigen::VectorXd y = Eigen::VectorXd::Zero(order_);
  for (int j = 0; j < order_; ++j) {
    y(j) += (*this)(j, j) * x(j);
    for (int i = j + 1; i <= std::min(order_ - 1, j + bandwidth_); ++i) {
      const double v = (*this)(i, j);
      y(i) += v * x(j);
      y(j) += v * x(i);
    }
  }
  return y;
}

double SymBandMatrix::frobenius_norm() const {
  double s = 0.0;
  for (int j = 0; j < order_; ++j) {
    for (int i = j; i <= std::min(order_ - 1, j + bandwidth_); ++i) {
      const double v = (*this)(i, j);
      s += (i == j ? 1.0 : 2.0) * v * v;
    }
  }
  return std::sqrt(s);
}

Eigen::VectorXd solve_spd(const SymBandMatrix& a, const Eigen::VectorXd& b) {
  const int n = a.order();
  const int w = a.bandwidth();
  if (b.size() != n) throw ConfigError("solve_spd: right-hand side has the wrong length");
  // lower band factor: l(i, j) stored at (j, i - j)
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, w + 1);
  for (int j = 0; j < n; ++j) {
    double d = a(j, j);
    for (int k = std::max(0, j - w); k < j; ++k) d -= l(k, j - k) * l(k, j - k);
    if (!(d > 0.0)) throw NumericalError("solve_spd: matrix is not positive definite");
    d = std::sqrt(d);
    l(j, 0) = d;
    for (int i = j + 1; i <= std::min(n - 1, j + w); ++i) {
      double s = a(i, j);
      for (int k = std::max(0, i - w); k < j; ++k) s -= l(k, i - k) * l(k, j - k);
      l(j, i - j) = s / d;
    }
  }
  Eigen::VectorXd x = b;
  for (int i = 0; i < n; ++i) {
    for (int k = std::max(0, i - w); k < i; ++k) x(i) -= l(k, i - k) * x(k);
    x(i) /= l(i, 0);
  }
  for (int i = n - 1; i >= 0; --i) {
    for (int k = i + 1; k <= std::min(n - 1, i + w); ++k) x(i) -= l(i, k - i) * x(k);
    x(i) /= l(i, 0);
  }
  return x;
}

int coupling_bandwidth(const SpaceSpec& spec) {
  const auto& e = spec.extraction;
  int band = 0;
  for (int i = 0; i < e.rows(); ++i) {
    const auto [lo_i, hi_i] = e.row_support(i);
    for (int j = i + 1; j < e.rows(); ++j) {
      const auto [lo_j, hi_j] = e.row_support(j);
      if (lo_j <= hi_i + spec.p && lo_i <= hi_j + spec.p) band = std::max(band, j - i);
    }
  }
  return band;
}

namespace {

// Reduced basis values and derivatives on one quadrature point, restricted to
// the rows touched by the active B-splines.
struct LocalBasis {
  std::vector<int> rows;
  Eigen::MatrixXd vals;  // (r + 1) x rows.size()
};

LocalBasis local_basis(const SpaceSpec& spec, double x, int r, std::vector<int>& slot) {
  const auto ev = bspline_eval_all(spec.knots, r, x);
  LocalBasis lb;
  for (int j = 0; j < ev.values.cols(); ++j) {
    for (const auto& [row, coeff] : spec.extraction.column(ev.first_active + j)) {
      (void)coeff;
      if (slot[static_cast<std::size_t>(row)] < 0) {
        slot[static_cast<std::size_t>(row)] = static_cast<int>(lb.rows.size());
        lb.rows.push_back(row);
      }
    }
  }
  lb.vals = Eigen::MatrixXd::Zero(r + 1, static_cast<Eigen::Index>(lb.rows.size()));
  for (int j = 0; j < ev.values.cols(); ++j) {
    for (const auto& [row, coeff] : spec.extraction.column(ev.first_active + j)) {
      lb.vals.col(slot[static_cast<std::size_t>(row)]) += coeff * ev.values.col(j);
    }
  }
  for (const int row : lb.rows) slot[static_cast<std::size_t>(row)] = -1;
  return lb;
}

SymBandMatrix assemble_bilinear(const SpaceSpec& spec, int order) {
  SymBandMatrix a(spec.n, coupling_bandwidth(spec));
  const auto q = make_quadrature(spec.breaks, spec.p + 1);
  std::vector<int> slot(static_cast<std::size_t>(spec.n), -1);
  for (std::size_t k = 0; k < q.nodes.size(); ++k) {
    const auto lb = local_basis(spec, q.nodes[k], order, slot);
    const auto row = lb.vals.row(order);
    for (std::size_t a_i = 0; a_i < lb.rows.size(); ++a_i) {
      for (std::size_t b_i = 0; b_i <= a_i; ++b_i) {
        const int i = lb.rows[a_i];
        const int j = lb.rows[b_i];
        const double v = q.weights[k] * row(static_cast<Eigen::Index>(a_i)) * row(static_cast<Eigen::Index>(b_i));
        a.add(i, j, v);
      }
    }
  }
  return a;
}

}  // namespace

SymBandMatrix assemble_mass(const SpaceSpec& spec) { return assemble_bilinear(spec, 0); }

SymBandMatrix assemble_stiffness(const SpaceSpec& spec) {
  if (spec.p < 1) throw ConfigError("assemble_stiffness: degree must be >= 1");
  return assemble_bilinear(spec, 1);
}

Eigen::VectorXd assemble_load(const SpaceSpec& spec, const ScalarFunction& f) {
  Eigen::VectorXd b = Eigen::VectorXd::Zero(spec.n);
  const auto q = make_quadrature(spec.breaks, spec.p + 3);
  std::vector<int> slot(static_cast<std::size_t>(spec.n), -1);
  for (std::size_t k = 0; k < q.nodes.size(); ++k) {
    const double fw = f(q.nodes[k]) * q.weights[k];
    if (fw == 0.0) continue;
    const auto lb = local_basis(spec, q.nodes[k], 0, slot);
    for (std::size_t a = 0; a < lb.rows.size(); ++a) b(lb.rows[a]) += fw * lb.vals(0, static_cast<Eigen::Index>(a));
  }
  return b;
}

Eigen::VectorXd assemble_derivative_load(const SpaceSpec& spec, const ScalarFunction& g) {
  Eigen::VectorXd b = Eigen::VectorXd::Zero(spec.n);
  const auto q = make_quadrature(spec.breaks, spec.p + 3);
  std::vector<int> slot(static_cast<std::size_t>(spec.n), -1);
  for (std::size_t k = 0; k < q.nodes.size(); ++k) {
    const double gw = g(q.nodes[k]) * q.weights[k];
    if (gw == 0.0) continue;
    const auto lb = local_basis(spec, q.nodes[k], 1, slot);
    for (std::size_t a = 0; a < lb.rows.size(); ++a) b(lb.rows[a]) += gw * lb.vals(1, static_cast<Eigen::Index>(a));
  }
  return b;
}

SampledBasis sample_basis(const SpaceSpec& spec, int points_per_element) {
  SampledBasis s;
  s.rule = make_quadrature(spec.breaks, points_per_element);
  const auto nq = static_cast<Eigen::Index>(s.rule.nodes.size());
  s.values = Eigen::MatrixXd::Zero(spec.n, nq);
  s.derivs = Eigen::MatrixXd::Zero(spec.n, nq);
  std::vector<int> slot(static_cast<std::size_t>(spec.n), -1);
  for (Eigen::Index k = 0; k < nq; ++k) {
    const auto lb = local_basis(spec, s.rule.nodes[static_cast<std::size_t>(k)], 1, slot);
    for (std::size_t a = 0; a < lb.rows.size(); ++a) {
      s.values(lb.rows[a], k) = lb.vals(0, static_cast<Eigen::Index>(a));
      s.derivs(lb.rows[a], k) = lb.vals(1, static_cast<Eigen::Index>(a));
    }
  }
  return s;
}

ErrorNorms function_error(const SpaceSpec& spec, const Eigen::VectorXd& coeffs, const ScalarFunction& exact,
                          const ScalarFunction& exact_d1, const Offset& offset) {
  if (coeffs.size() != spec.n) throw ConfigError("function_error: coefficient vector has the wrong length");
  const auto q = make_quadrature(spec.breaks, spec.p + 3);
  std::vector<int> slot(static_cast<std::size_t>(spec.n), -1);
  double l2 = 0.0;
  double h1 = 0.0;
  for (std::size_t k = 0; k < q.nodes.size(); ++k) {
    const double x = q.nodes[k];
    const auto lb = local_basis(spec, x, 1, slot);
    double u = 0.0;
    double du = 0.0;
    for (std::size_t a = 0; a < lb.rows.size(); ++a) {
      u += coeffs(lb.rows[a]) * lb.vals(0, static_cast<Eigen::Index>(a));
      du += coeffs(lb.rows[a]) * lb.vals(1, static_cast<Eigen::Index>(a));
    }
    if (offset) {
      const auto [v, dv] = offset(x);
      u += v;
      du += dv;
    }
    const double e0 = exact(x) - u;
    const double e1 = exact_d1(x) - du;
    l2 += q.weights[k] * e0 * e0;
    h1 += q.weights[k] * e1 * e1;
  }
  return {std::sqrt(l2), std::sqrt(h1)};
}

}  // namespace ofspline
