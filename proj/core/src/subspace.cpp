#include "ofspline/subspace.hpp"

#include "ofspline/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ofspline {

std::string_view to_string(BoundaryType bc) {
  switch (bc) {
    case BoundaryType::Dirichlet: return "dirichlet";
    case BoundaryType::Neumann: return "neumann";
    case BoundaryType::Mixed: return "mixed";
  }
  return "?";
}

std::string_view to_string(SpaceKind kind) {
  switch (kind) {
    case SpaceKind::Full: return "full";
    case SpaceKind::Optimal: return "optimal";
    case SpaceKind::ReducedUniform: return "reduced";
  }
  return "?";
}

ExtractionMatrix::ExtractionMatrix(Eigen::MatrixXd entries) : entries_(std::move(entries)) {
  columns_.resize(static_cast<std::size_t>(entries_.cols()));
  row_support_.assign(static_cast<std::size_t>(entries_.rows()), {-1, -1});
  for (int c = 0; c < entries_.cols(); ++c) {
    for (int r = 0; r < entries_.rows(); ++r) {
      const double v = entries_(r, c);
      if (v == 0.0) continue;
      columns_[static_cast<std::size_t>(c)].emplace_back(r, v);
      auto& [lo, hi] = row_support_[static_cast<std::size_t>(r)];
      if (lo < 0) lo = c;
      hi = c;
    }
  }
}

namespace {

// Knot layout of an optimal space: xi_i = (i - shift) / inverse_spacing.
struct OptimalLayout {
  int n_el;
  double inverse_spacing;
  double shift;
};

OptimalLayout optimal_layout(int p, int n, BoundaryType bc) {
  const bool odd = (p % 2) == 1;
  switch (bc) {
    case BoundaryType::Dirichlet:
      return odd ? OptimalLayout{n + 1, n + 1.0, 0.0} : OptimalLayout{n + 2, n + 1.0, 0.5};
    case BoundaryType::Neumann:
      return odd ? OptimalLayout{n + 1, static_cast<double>(n), 0.5}
                 : OptimalLayout{n, static_cast<double>(n), 0.0};
    case BoundaryType::Mixed:
      return odd ? OptimalLayout{n + 1, n + 0.5, 0.0} : OptimalLayout{n + 1, n + 0.5, 0.5};
  }
  throw ConfigError("unknown boundary type");
}

// Column `col` of the periodic blocks [I | 0 | -J | 0] (left) and
// [0 | -J | 0 | I] (right), or [I | -J] and [-J | I] without the zero columns.
double left_block(int row, int col, int m, bool zero_columns) {
  if (zero_columns) {
    if (col < m) return row == col ? 1.0 : 0.0;
    if (col == m || col == 2 * m + 1) return 0.0;
    return row == m - 1 - (col - m - 1) ? -1.0 : 0.0;
  }
  if (col < m) return row == col ? 1.0 : 0.0;
  return row == m - 1 - (col - m) ? -1.0 : 0.0;
}

double right_block(int row, int col, int m, bool zero_columns) {
  if (zero_columns) {
    if (col == 0 || col == m + 1) return 0.0;
    if (col <= m) return row == m - 1 - (col - 1) ? -1.0 : 0.0;
    return row == col - m - 2 ? 1.0 : 0.0;
  }
  if (col < m) return row == m - 1 - col ? -1.0 : 0.0;
  return row == col - m ? 1.0 : 0.0;
}

void require_degree(int p) {
  if (p < 1) throw ConfigError("degree must be >= 1, got " + std::to_string(p));
}

}  // namespace

double optimal_grid_size(int n, BoundaryType bc) {
  switch (bc) {
    case BoundaryType::Dirichlet: return 1.0 / (n + 1);
    case BoundaryType::Neumann: return 1.0 / n;
    case BoundaryType::Mixed: return 2.0 / (2 * n + 1);
  }
  throw ConfigError("unknown boundary type");
}

std::vector<double> optimal_breaks(int p, int n, BoundaryType bc) {
  require_degree(p);
  if (n < 1) throw ConfigError("optimal_breaks: dimension must be >= 1");
  const auto layout = optimal_layout(p, n, bc);
  std::vector<double> breaks{0.0};
  for (int i = 1; i < layout.n_el; ++i) breaks.push_back((i - layout.shift) / layout.inverse_spacing);
  breaks.push_back(1.0);
  return breaks;
}

Eigen::MatrixXd build_extraction(SpaceKind kind, int p, int n_el) {
  require_degree(p);
  int m = 0;
  int side = 0;
  bool zero_columns = true;
  switch (kind) {
    case SpaceKind::Optimal:
      if (p % 2 == 1) {
        m = n_el - 1;
        side = (p + 1) / 2;
      } else {
        m = n_el - 2;
        side = p / 2 + 1;
      }
      break;
    case SpaceKind::ReducedUniform:
      if (p % 2 == 1) throw ConfigError("reduced uniform space requires an even degree");
      m = n_el;
      side = p / 2;
      zero_columns = false;
      break;
    case SpaceKind::Full:
      throw ConfigError("build_extraction: no closed-form tiling for the full space");
  }
  if (m < 1) throw ConfigError("build_extraction: too few elements (" + std::to_string(n_el) + ")");

  const int period = zero_columns ? 2 * m + 2 : 2 * m;
  Eigen::MatrixXd e = Eigen::MatrixXd::Zero(m, n_el + p);
  for (int j = 1; j <= side; ++j) {
    const int col_left = side - j;
    const int col_right = side + m + j - 1;
    const int from_right_edge = period - 1 - (j - 1) % period;
    const int from_left_edge = (j - 1) % period;
    for (int r = 0; r < m; ++r) {
      e(r, col_left) = left_block(r, from_right_edge, m, zero_columns);
      e(r, col_right) = right_block(r, from_left_edge, m, zero_columns);
    }
  }
  for (int r = 0; r < m; ++r) e(r, side + r) = 1.0;
  return e;
}

std::vector<std::pair<int, int>> boundary_constraints(SpaceKind kind, int p, BoundaryType bc) {
  std::vector<std::pair<int, int>> out;
  switch (kind) {
    case SpaceKind::Full:
      throw ConfigError("the full space carries no derivative constraints");
    case SpaceKind::ReducedUniform:
      for (int a = 0; a <= p - 1; a += 2) {
        out.emplace_back(a, 0);
        out.emplace_back(a, 1);
      }
      return out;
    case SpaceKind::Optimal:
      for (int a = 0; a <= p; ++a) {
        const bool even = (a % 2) == 0;
        switch (bc) {
          case BoundaryType::Dirichlet:
            if (even) {
              out.emplace_back(a, 0);
              out.emplace_back(a, 1);
            }
            break;
          case BoundaryType::Neumann:
            if (!even) {
              out.emplace_back(a, 0);
              out.emplace_back(a, 1);
            }
            break;
          case BoundaryType::Mixed:
            out.emplace_back(a, even ? 0 : 1);
            break;
        }
      }
      return out;
  }
  return out;
}

Eigen::MatrixXd nullspace_extraction(const KnotVector& knots,
                                     const std::vector<std::pair<int, int>>& constraints) {
  const int num = knots.num_basis();
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(constraints.size()), num);
  int k = 0;
  for (const auto& [order, end] : constraints) {
    const auto ev = bspline_eval_all(knots, order, end == 0 ? 0.0 : 1.0);
    for (int j = 0; j < ev.values.cols(); ++j) c(k, ev.first_active + j) = ev.values(order, j);
    const double scale = c.row(k).cwiseAbs().maxCoeff();
    if (scale > 0.0) {
      c.row(k) /= scale;
      ++k;
    }
  }
  c.conservativeResize(k, num);

  std::vector<bool> constrained(static_cast<std::size_t>(num), false);
  for (int j = 0; j < num; ++j) constrained[j] = (c.col(j).array() != 0.0).any();

  // Reduced row echelon form with complete pivoting.
  std::vector<int> pivot_col;
  std::vector<bool> is_pivot(static_cast<std::size_t>(num), false);
  constexpr double tol = 1e-10;
  int rank = 0;
  for (; rank < c.rows(); ++rank) {
    double best = 0.0;
    int bi = -1;
    int bj = -1;
    for (int i = rank; i < c.rows(); ++i) {
      for (int j = 0; j < num; ++j) {
        if (!is_pivot[j] && std::abs(c(i, j)) > best) {
          best = std::abs(c(i, j));
          bi = i;
          bj = j;
        }
      }
    }
    if (best < tol) break;
    c.row(rank).swap(c.row(bi));
    c.row(rank) /= c(rank, bj);
    for (int i = 0; i < c.rows(); ++i) {
      if (i != rank && c(i, bj) != 0.0) c.row(i) -= c(i, bj) * c.row(rank);
    }
    pivot_col.push_back(bj);
    is_pivot[bj] = true;
  }

  Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(num - rank, num);
  std::vector<int> touched;
  int row = 0;
  for (int f = 0; f < num; ++f) {
    if (is_pivot[f]) continue;
    basis(row, f) = 1.0;
    bool boundary = constrained[f];
    for (int i = 0; i < rank; ++i) {
      const double v = -c(i, f);
      if (std::abs(v) > tol) {
        basis(row, pivot_col[i]) = v;
        boundary = true;
      }
    }
    if (boundary) touched.push_back(row);
    ++row;
  }

  // Modified Gram-Schmidt over the rows that mix constrained B-splines.
  for (std::size_t a = 0; a < touched.size(); ++a) {
    auto va = basis.row(touched[a]);
    for (std::size_t b = 0; b < a; ++b) va -= va.dot(basis.row(touched[b])) * basis.row(touched[b]);
    const double norm = va.norm();
    if (norm < tol) throw NumericalError("nullspace_extraction: dependent boundary rows");
    va /= norm;
    for (int j = 0; j < num; ++j) {
      if (std::abs(va(j)) < 1e-15) va(j) = 0.0;
    }
  }
  return basis;
}

SpaceSpec make_space(SpaceKind kind, int p, int n, BoundaryType bc) {
  require_degree(p);
  if (n < 1) throw ConfigError("make_space: dimension must be >= 1");

  SpaceSpec s;
  s.kind = kind;
  s.p = p;
  s.n = n;
  s.bc = bc;

  Eigen::MatrixXd e;
  switch (kind) {
    case SpaceKind::Full: {
      const int dropped = bc == BoundaryType::Dirichlet ? 2 : (bc == BoundaryType::Mixed ? 1 : 0);
      s.n_el = n - p + dropped;
      if (s.n_el <= 2) break;
      s.knots = KnotVector::open_uniform(p, s.n_el);
      s.h = 1.0 / s.n_el;
      const int num = s.n_el + p;
      const int first = (bc == BoundaryType::Neumann) ? 0 : 1;
      e = Eigen::MatrixXd::Zero(n, num);
      for (int r = 0; r < n; ++r) e(r, first + r) = 1.0;
      break;
    }
    case SpaceKind::Optimal: {
      const auto layout = optimal_layout(p, n, bc);
      s.n_el = layout.n_el;
      if (s.n_el <= 2) break;
      s.knots = KnotVector::uniform(p, s.n_el, layout.inverse_spacing, layout.shift);
      s.h = optimal_grid_size(n, bc);
      e = bc == BoundaryType::Dirichlet ? build_extraction(kind, p, s.n_el)
                                        : nullspace_extraction(s.knots, boundary_constraints(kind, p, bc));
      break;
    }
    case SpaceKind::ReducedUniform: {
      if (bc != BoundaryType::Dirichlet) {
        throw ConfigError("reduced uniform space is only defined for Dirichlet conditions");
      }
      if (p % 2 == 1) {
        throw ConfigError("reduced uniform space requires an even degree (odd degrees coincide with the optimal space)");
      }
      s.n_el = n;
      if (s.n_el <= 2) break;
      s.knots = KnotVector::uniform(p, s.n_el, static_cast<double>(s.n_el), 0.0);
      s.h = 1.0 / s.n_el;
      e = build_extraction(kind, p, s.n_el);
      break;
    }
  }
  if (s.n_el <= 2) {
    throw ConfigError("make_space: dimension " + std::to_string(n) + " gives " + std::to_string(s.n_el) +
                      " elements; at least 3 are required");
  }
  if (e.rows() != n) {
    throw NumericalError("make_space: extraction has " + std::to_string(e.rows()) + " rows, expected " +
                         std::to_string(n));
  }
  s.breaks = s.knots.breaks();
  s.extraction = ExtractionMatrix(std::move(e));
  return s;
}

SpaceSpec make_space_from_elements(SpaceKind kind, int p, int n_el) {
  require_degree(p);
  if (kind == SpaceKind::Full) throw ConfigError("make_space_from_elements: full spaces are built by dimension");
  auto e = build_extraction(kind, p, n_el);
  SpaceSpec s;
  s.kind = kind;
  s.p = p;
  s.n = static_cast<int>(e.rows());
  s.bc = BoundaryType::Dirichlet;
  s.n_el = n_el;
  if (kind == SpaceKind::ReducedUniform) {
    s.knots = KnotVector::uniform(p, n_el, static_cast<double>(n_el), 0.0);
    s.h = 1.0 / n_el;
  } else if (p % 2 == 1) {
    s.knots = KnotVector::uniform(p, n_el, static_cast<double>(n_el), 0.0);
    s.h = optimal_grid_size(s.n, s.bc);
  } else {
    s.knots = KnotVector::uniform(p, n_el, static_cast<double>(n_el - 1), 0.5);
    s.h = optimal_grid_size(s.n, s.bc);
  }
  s.breaks = s.knots.breaks();
  s.extraction = ExtractionMatrix(std::move(e));
  return s;
}

const ExtractionMatrix& extraction_matrix(const SpaceSpec& spec) { return spec.extraction; }

SpaceSpec unconstrained(const SpaceSpec& spec) {
  SpaceSpec s = spec;
  const int num = spec.knots.num_basis();
  s.n = num;
  s.extraction = ExtractionMatrix(Eigen::MatrixXd::Identity(num, num));
  return s;
}

Eigen::MatrixXd eval_reduced_basis(const SpaceSpec& spec, double x, int r) {
  const auto ev = bspline_eval_all(spec.knots, r, x);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(r + 1, spec.n);
  for (int j = 0; j < ev.values.cols(); ++j) {
    for (const auto& [row, coeff] : spec.extraction.column(ev.first_active + j)) {
      out.col(row) += coeff * ev.values.col(j);
    }
  }
  return out;
}

double boundary_residuals(const SpaceSpec& spec) {
  const auto constraints = boundary_constraints(spec.kind, spec.p, spec.bc);
  int max_order = 0;
  for (const auto& c : constraints) max_order = std::max(max_order, c.first);

  Eigen::VectorXd scale = Eigen::VectorXd::Zero(max_order + 1);
  for (std::size_t e = 0; e + 1 < spec.breaks.size(); ++e) {
    for (const double t : {0.25, 0.5, 0.75}) {
      const double x = spec.breaks[e] + t * (spec.breaks[e + 1] - spec.breaks[e]);
      const auto vals = eval_reduced_basis(spec, x, max_order);
      for (int a = 0; a <= max_order; ++a) scale(a) = std::max(scale(a), vals.row(a).cwiseAbs().maxCoeff());
    }
  }

  double worst = 0.0;
  for (const auto& [order, end] : constraints) {
    const auto vals = eval_reduced_basis(spec, end == 0 ? 0.0 : 1.0, order);
    const double denom = scale(order) > 0.0 ? scale(order) : 1.0;
    worst = std::max(worst, vals.row(order).cwiseAbs().maxCoeff() / denom);
  }
  return worst;
}

}  // namespace ofspline
