#pragma once

#include "abreu/field.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <optional>
#include <span>

namespace abreu {

using SparseMatrix = Eigen::SparseMatrix<double>;

// v -> A^{ij} v_ij with the coefficient matrix A frozen at every node,
// split into the interior block (N x N) and the boundary-hit block (N x H):
// L v = interior * v_interior + boundary * v_hits.
struct NondivergenceOperator {
  SparseMatrix interior;
  SparseMatrix boundary;
};

// Structural pattern depends only on the grid, so factorizations can reuse
// one symbolic analysis across coefficient fields.
NondivergenceOperator assemble_nondivergence(const Grid& grid, std::span<const Sym2> coefficients);

// Discrete Laplacian (A = I) with the same pattern.
NondivergenceOperator assemble_laplacian(const Grid& grid);

// Negative off-diagonal entries break the M-matrix sign pattern of the
// assembled operator; cross-derivative terms produce them.
struct SignAudit {
  std::size_t negative_off_diagonal = 0;
  std::size_t positive_off_diagonal = 0;
  std::size_t non_negative_diagonal = 0;
  bool m_matrix_pattern() const noexcept { return negative_off_diagonal == 0 && non_negative_diagonal == 0; }
};
SignAudit audit_signs(const SparseMatrix& interior);

enum class LinearBackend { Auto, Direct, BiCgStab };

// Sparse direct LU with the symbolic analysis cached across factorizations
// of matrices sharing a pattern; stabilized BiCG with a diagonal
// preconditioner for grids above `direct_limit` unknowns when Auto.
class LinearSolver {
 public:
  explicit LinearSolver(LinearBackend backend = LinearBackend::Auto, std::size_t direct_limit = 250000);

  void factorize(const SparseMatrix& matrix);
  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;
  bool direct() const noexcept { return use_direct_; }
  // Hager-Higham estimate of the 1-norm condition number (direct backend only).
  std::optional<double> condition_estimate() const;

 private:
  LinearBackend backend_;
  std::size_t direct_limit_;
  bool use_direct_ = true;
  bool analyzed_ = false;
  std::vector<int> pattern_outer_;
  std::vector<int> pattern_inner_;
  double norm1_ = 0.0;
  Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu_;
  Eigen::BiCGSTAB<SparseMatrix, Eigen::DiagonalPreconditioner<double>> bicg_;
};

Eigen::VectorXd to_vector(std::span<const double> values);
std::vector<double> to_std(const Eigen::VectorXd& v);

}  // namespace abreu
