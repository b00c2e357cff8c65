#pragma once

// Trial spaces for the Laplace eigenproblem on [0, 1]:
//  - Full: maximally smooth splines on uniform breaks with open knots,
//    boundary B-splines dropped according to the boundary type;
//  - Optimal: splines on degree-dependent break sequences whose even
//    (Dirichlet), odd (Neumann) or even-left/odd-right (mixed) derivatives up
//    to order p vanish at the ends;
//  - ReducedUniform: Dirichlet splines on uniform breaks with even
//    derivatives up to order p - 1 vanishing (even p only).
// Every space is described by an extraction matrix E: basis_k = sum_c E(k, c) N_c,
// where N_c are the n_el + p B-splines of the space's knot vector.

#include "ofspline/spline_core.hpp"

#include <Eigen/Dense>

#include <string_view>
#include <utility>
#include <vector>

namespace ofspline {

enum class BoundaryType { Dirichlet = 0, Neumann = 1, Mixed = 2 };
enum class SpaceKind { Full, Optimal, ReducedUniform };

std::string_view to_string(BoundaryType bc);
std::string_view to_string(SpaceKind kind);

/// n x (n_el + p) coefficient matrix with a column-wise sparse view for assembly.
class ExtractionMatrix {
 public:
  ExtractionMatrix() = default;
  explicit ExtractionMatrix(Eigen::MatrixXd entries);

  const Eigen::MatrixXd& entries() const noexcept { return entries_; }
  int rows() const noexcept { return static_cast<int>(entries_.rows()); }
  int cols() const noexcept { return static_cast<int>(entries_.cols()); }
  double operator()(int row, int col) const { return entries_(row, col); }

  /// Nonzero (row, value) pairs of a column.
  const std::vector<std::pair<int, double>>& column(int col) const {
    return columns_[static_cast<std::size_t>(col)];
  }
  /// First and last column with a nonzero entry in `row`.
  std::pair<int, int> row_support(int row) const { return row_support_[static_cast<std::size_t>(row)]; }

 private:
  Eigen::MatrixXd entries_;
  std::vector<std::vector<std::pair<int, double>>> columns_;
  std::vector<std::pair<int, int>> row_support_;
};

struct SpaceSpec {
  SpaceKind kind = SpaceKind::Full;
  int p = 1;
  int n = 0;  // dimension
  BoundaryType bc = BoundaryType::Dirichlet;
  int n_el = 0;
  double h = 0.0;  // interior grid size
  std::vector<double> breaks;
  KnotVector knots{0, 1, {0.0, 1.0}};
  ExtractionMatrix extraction;
};

/// Break sequence of the optimal space of degree p, dimension n and boundary type bc.
std::vector<double> optimal_breaks(int p, int n, BoundaryType bc);

/// Grid size h^opt_{p,n,bc}: 1/(n+1), 1/n or 2/(2n+1).
double optimal_grid_size(int n, BoundaryType bc);

/// Fully resolved trial space of dimension n.
SpaceSpec make_space(SpaceKind kind, int p, int n, BoundaryType bc);

/// Dirichlet Optimal or ReducedUniform space on n_el elements; accepts every
/// n_el for which build_extraction does.
SpaceSpec make_space_from_elements(SpaceKind kind, int p, int n_el);

/// Closed-form extraction for the Dirichlet Optimal and ReducedUniform spaces
/// on n_el elements (exchange-matrix tiling). Accepts any n_el with a nonempty
/// central block.
Eigen::MatrixXd build_extraction(SpaceKind kind, int p, int n_el);

/// Extraction onto the subspace of B-splines of `knots` whose derivatives listed
/// in `constraints` ((order, endpoint 0 or 1) pairs) vanish: pivoted elimination
/// for the null space, then the rows touching constrained B-splines are
/// orthonormalized.
Eigen::MatrixXd nullspace_extraction(const KnotVector& knots,
                                     const std::vector<std::pair<int, int>>& constraints);

/// Derivative constraints (order, endpoint) defining a reduced space.
std::vector<std::pair<int, int>> boundary_constraints(SpaceKind kind, int p, BoundaryType bc);

/// Returns the spec's extraction matrix.
const ExtractionMatrix& extraction_matrix(const SpaceSpec& spec);

/// Same knots and breaks, identity extraction over all n_el + p B-splines.
SpaceSpec unconstrained(const SpaceSpec& spec);

/// (r + 1) x n matrix; row d holds the d-th derivatives of all basis functions at x.
Eigen::MatrixXd eval_reduced_basis(const SpaceSpec& spec, double x, int r);

/// Largest |d^a basis_k(z)| over constrained (a, z), relative to the largest
/// interior magnitude of the same order. Rejects Full spaces.
double boundary_residuals(const SpaceSpec& spec);

}  // namespace ofspline
