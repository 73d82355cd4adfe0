#include "abreu/linear.hpp"

#include "abreu/error.hpp"

#include <algorithm>
#include <cmath>

namespace abreu {

NondivergenceOperator assemble_nondivergence(const Grid& grid, std::span<const Sym2> coefficients) {
  const auto n = static_cast<Eigen::Index>(grid.size());
  const auto nh = static_cast<Eigen::Index>(grid.hit_count());
  std::vector<Eigen::Triplet<double>> inner, outer;
  inner.reserve(grid.size() * 9);
  outer.reserve(grid.hit_count());

  for (std::size_t node = 0; node < grid.size(); ++node) {
    const Sym2& a = coefficients[node];
    const auto row = static_cast<Eigen::Index>(node);
    double diag = 0.0;
    for (int k = 0; k < kAxisCount; ++k) {
      const auto axis = static_cast<Axis>(k);
      const double scale = axis == Axis::X ? a.xx : axis == Axis::Y ? a.yy : axis == Axis::Diagonal ? a.xy : -a.xy;
      const SecondDifference d = second_difference(grid, node, axis);
      diag += scale * d.center;
      for (const auto& [w, t] : {std::pair{d.forward, d.forward_target}, std::pair{d.backward, d.backward_target}}) {
        if (t.is_node())
          inner.emplace_back(row, t.node, scale * w);
        else
          outer.emplace_back(row, t.hit, scale * w);
      }
    }
    inner.emplace_back(row, row, diag);
  }

  NondivergenceOperator op{SparseMatrix(n, n), SparseMatrix(n, nh)};
  op.interior.setFromTriplets(inner.begin(), inner.end());
  op.boundary.setFromTriplets(outer.begin(), outer.end());
  op.interior.makeCompressed();
  op.boundary.makeCompressed();
  return op;
}

NondivergenceOperator assemble_laplacian(const Grid& grid) {
  const std::vector<Sym2> identity(grid.size(), Sym2::identity());
  return assemble_nondivergence(grid, identity);
}

SignAudit audit_signs(const SparseMatrix& interior) {
  SignAudit audit;
  for (Eigen::Index col = 0; col < interior.outerSize(); ++col) {
    for (SparseMatrix::InnerIterator it(interior, col); it; ++it) {
      if (it.row() == it.col()) {
        if (it.value() >= 0.0) ++audit.non_negative_diagonal;
      } else if (it.value() < 0.0) {
        ++audit.negative_off_diagonal;
      } else if (it.value() > 0.0) {
        ++audit.positive_off_diagonal;
      }
    }
  }
  return audit;
}

LinearSolver::LinearSolver(LinearBackend backend, std::size_t direct_limit)
    : backend_(backend), direct_limit_(direct_limit) {}

void LinearSolver::factorize(const SparseMatrix& matrix) {
  use_direct_ = backend_ == LinearBackend::Direct ||
                (backend_ == LinearBackend::Auto && static_cast<std::size_t>(matrix.rows()) <= direct_limit_);
  norm1_ = 0.0;
  for (Eigen::Index col = 0; col < matrix.outerSize(); ++col) {
    double s = 0.0;
    for (SparseMatrix::InnerIterator it(matrix, col); it; ++it) s += std::abs(it.value());
    norm1_ = std::max(norm1_, s);
  }

  if (!use_direct_) {
    bicg_.setTolerance(1e-15);
    bicg_.setMaxIterations(std::max<Eigen::Index>(1000, 4 * matrix.rows()));
    bicg_.compute(matrix);
    if (bicg_.info() != Eigen::Success) throw Error(ErrorKind::LinearSolve, "BiCGSTAB setup failed");
    return;
  }

  const std::vector<int> outer(matrix.outerIndexPtr(), matrix.outerIndexPtr() + matrix.outerSize() + 1);
  const std::vector<int> inner(matrix.innerIndexPtr(), matrix.innerIndexPtr() + matrix.nonZeros());
  if (!analyzed_ || outer != pattern_outer_ || inner != pattern_inner_) {
    lu_.analyzePattern(matrix);
    pattern_outer_ = outer;
    pattern_inner_ = inner;
    analyzed_ = true;
  }
  lu_.factorize(matrix);
  if (lu_.info() != Eigen::Success)
    throw Error(ErrorKind::LinearSolve, "sparse LU factorization failed: " + lu_.lastErrorMessage());
}

Eigen::VectorXd LinearSolver::solve(const Eigen::VectorXd& rhs) const {
  if (use_direct_) {
    Eigen::VectorXd x = lu_.solve(rhs);
    if (lu_.info() != Eigen::Success) throw Error(ErrorKind::LinearSolve, "sparse LU solve failed");
    return x;
  }
  Eigen::VectorXd x = bicg_.solve(rhs);
  if (bicg_.info() != Eigen::Success) throw Error(ErrorKind::LinearSolve, "BiCGSTAB did not converge");
  return x;
}

std::optional<double> LinearSolver::condition_estimate() const {
  if (!use_direct_ || !analyzed_) return std::nullopt;
  auto& lu = const_cast<Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>>&>(lu_);
  const Eigen::Index n = static_cast<Eigen::Index>(pattern_outer_.size()) - 1;
  Eigen::VectorXd x = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  double estimate = 0.0;
  for (int it = 0; it < 5; ++it) {
    const Eigen::VectorXd y = lu.solve(x);
    estimate = y.lpNorm<1>();
    const Eigen::VectorXd xi = y.unaryExpr([](double v) { return v >= 0.0 ? 1.0 : -1.0; });
    const Eigen::VectorXd z = lu.transpose().solve(xi);
    Eigen::Index j = 0;
    const double zmax = z.cwiseAbs().maxCoeff(&j);
    if (zmax <= z.dot(x)) break;
    x.setZero();
    x(j) = 1.0;
  }
  return norm1_ * estimate;
}

Eigen::VectorXd to_vector(std::span<const double> values) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) v(static_cast<Eigen::Index>(i)) = values[i];
  return v;
}

std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace abreu
