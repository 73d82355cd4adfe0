#include "abreu/ma_solver.hpp"

#include "abreu/error.hpp"
#include "abreu/lma_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace abreu {
namespace {

void validate(const MAProblem& problem) {
  if (!problem.grid) throw Error(ErrorKind::InvalidInput, "Monge-Ampere problem without grid");
  if (problem.g.grid_ptr() != problem.grid)
    throw Error(ErrorKind::InvalidInput, "right-hand side lives on a different grid");
  if (!problem.phi) throw Error(ErrorKind::InvalidInput, "Monge-Ampere problem without boundary data");
  if (!(problem.g.min() > 0.0)) {
    std::ostringstream msg;
    msg << "right-hand side must be strictly positive (min g = " << problem.g.min() << ")";
    throw Error(ErrorKind::InvalidInput, msg.str());
  }
}

double sup_norm(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// eps * max_i sum_j |J_ij| |u_j| over interior and boundary columns.
double residual_floor(const NondivergenceOperator& jac, const ScalarField& u) {
  std::vector<double> row_sum(u.size(), 0.0);
  for (Eigen::Index col = 0; col < jac.interior.outerSize(); ++col)
    for (SparseMatrix::InnerIterator it(jac.interior, col); it; ++it)
      row_sum[static_cast<std::size_t>(it.row())] += std::abs(it.value()) * std::abs(u[static_cast<std::size_t>(col)]);
  for (Eigen::Index col = 0; col < jac.boundary.outerSize(); ++col)
    for (SparseMatrix::InnerIterator it(jac.boundary, col); it; ++it)
      row_sum[static_cast<std::size_t>(it.row())] +=
          std::abs(it.value()) * std::abs(u.boundary(static_cast<std::size_t>(col)));
  return 8.0 * std::numeric_limits<double>::epsilon() * *std::max_element(row_sum.begin(), row_sum.end());
}

std::vector<Sym2> linearization(const HessianField& hess, double eps_c) {
  std::vector<Sym2> out(hess.size());
  for (std::size_t n = 0; n < hess.size(); ++n) out[n] = cofactor(clamp_eigenvalues(hess[n], eps_c));
  return out;
}

}  // namespace

Sym2 clamp_eigenvalues(const Sym2& h, double floor) {
  if (h.min_eigenvalue() >= floor) return h;
  const Eigen::SelfAdjointEigenSolver<Mat2> eig(h.matrix());
  Eigen::Vector2d lambda = eig.eigenvalues();
  lambda = lambda.cwiseMax(floor);
  return Sym2::from(eig.eigenvectors() * lambda.asDiagonal() * eig.eigenvectors().transpose());
}

ScalarField ma_residual(const ScalarField& u, const ScalarField& g) {
  if (u.grid_ptr() != g.grid_ptr()) throw Error(ErrorKind::InvalidInput, "u and g live on different grids");
  const HessianField hess = discrete_hessian(u);
  std::vector<double> r(u.size());
  for (std::size_t n = 0; n < r.size(); ++n) r[n] = hess[n].det() - g[n];
  return ScalarField(u.grid_ptr(), std::move(r));
}

ScalarField initial_guess(const MAProblem& problem, LinearSolver* workspace) {
  validate(problem);
  const Grid& grid = *problem.grid;
  const NondivergenceOperator lap = assemble_laplacian(grid);
  std::vector<double> hits;
  hits.reserve(grid.hit_count());
  for (const auto& hit : grid.hits()) hits.push_back(problem.phi(hit.point));
  Eigen::VectorXd rhs(static_cast<Eigen::Index>(grid.size()));
  for (std::size_t n = 0; n < grid.size(); ++n) rhs(static_cast<Eigen::Index>(n)) = 2.0 * std::sqrt(problem.g[n]);
  rhs -= lap.boundary * to_vector(hits);

  LinearSolver local;
  LinearSolver& solver = workspace ? *workspace : local;
  solver.factorize(lap.interior);
  return ScalarField(problem.grid, to_std(solver.solve(rhs)), std::move(hits), problem.phi);
}

MAResult solve_ma(const MAProblem& problem, const MASolveOptions& options, const ScalarField* warm_start,
                  LinearSolver* workspace) {
  validate(problem);
  if (!(options.newton_tol > 0.0) || !(options.eps_c > 0.0))
    throw Error(ErrorKind::InvalidInput, "newton_tol and eps_c must be positive");

  LinearSolver local(options.backend);
  LinearSolver& solver = workspace ? *workspace : local;
  const Grid& grid = *problem.grid;

  ScalarField u = [&] {
    if (!warm_start) return initial_guess(problem, &solver);
    if (warm_start->grid_ptr() != problem.grid) throw Error(ErrorKind::InvalidInput, "warm start on a different grid");
    return ScalarField::with_trace(problem.grid, std::vector<double>(warm_start->values().begin(), warm_start->values().end()),
                                   problem.phi);
  }();

  MAReport report;
  HessianField hess = discrete_hessian(u);
  std::vector<double> residual(u.size());
  auto eval_residual = [&](const HessianField& hf, std::vector<double>& out) {
    for (std::size_t n = 0; n < out.size(); ++n) out[n] = hf[n].det() - problem.g[n];
    return sup_norm(out);
  };
  double norm = eval_residual(hess, residual);
  report.residual_history.push_back(norm);

  for (int iter = 0;; ++iter) {
    const NondivergenceOperator jac = assemble_nondivergence(grid, linearization(hess, options.eps_c));
    report.residual_floor = residual_floor(jac, u);
    if (norm <= options.newton_tol) break;
    if (iter >= options.max_newton_iters) {
      std::ostringstream msg;
      msg << "Newton did not reach residual " << options.newton_tol << " in " << options.max_newton_iters
          << " iterations (last " << norm << ")";
      throw NonConvergenceError(msg.str(), report.residual_history);
    }

    solver.factorize(jac.interior);
    const Eigen::VectorXd step = solver.solve(-to_vector(residual));

    const bool was_convex = hess.min_eigenvalue() > 0.0;
    double t = 1.0;
    bool accepted = false, convexity_blocked = false;
    std::vector<double> trial_values(u.size());
    std::vector<double> trial_residual(u.size());
    for (int bt = 0; bt <= options.max_backtracks; ++bt) {
      for (std::size_t n = 0; n < u.size(); ++n) trial_values[n] = u[n] + t * step(static_cast<Eigen::Index>(n));
      ScalarField trial(problem.grid, trial_values, std::vector<double>(u.boundary_values().begin(), u.boundary_values().end()),
                        problem.phi);
      HessianField trial_hess = discrete_hessian(trial);
      const double trial_norm = eval_residual(trial_hess, trial_residual);
      const bool convex_ok = !was_convex || trial_hess.min_eigenvalue() > 0.0;
      if (trial_norm <= (1.0 - options.armijo * t) * norm && convex_ok) {
        u = std::move(trial);
        hess = std::move(trial_hess);
        residual.swap(trial_residual);
        norm = trial_norm;
        accepted = true;
        break;
      }
      convexity_blocked = convexity_blocked || (!convex_ok && trial_norm <= (1.0 - options.armijo * t) * norm);
      t *= options.backtrack_factor;
      ++report.backtracks;
    }
    if (!accepted) {
      // A stalled line search at the rounding level of the residual is convergence.
      if (norm <= report.residual_floor) break;
      if (convexity_blocked)
        throw Error(ErrorKind::ConvexityFailure, "line search cannot decrease the residual while keeping u convex");
      std::ostringstream msg;
      msg << "line search failed after " << options.max_backtracks << " backtracks at residual " << norm;
      throw NonConvergenceError(msg.str(), report.residual_history);
    }
    ++report.iterations;
    report.residual_history.push_back(norm);
  }

  report.min_hessian_eigenvalue = hess.min_eigenvalue();
  if (!(report.min_hessian_eigenvalue > 0.0)) {
    std::ostringstream msg;
    msg << "converged iterate is not convex (min Hessian eigenvalue " << report.min_hessian_eigenvalue << ")";
    throw Error(ErrorKind::ConvexityFailure, msg.str());
  }
  return {std::move(u), std::move(report)};
}

}  // namespace abreu
