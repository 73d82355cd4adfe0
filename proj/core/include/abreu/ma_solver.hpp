#pragma once

#include "abreu/field.hpp"
#include "abreu/linear.hpp"

#include <vector>

namespace abreu {

// det D^2 u = g in Omega, u = phi on the boundary, u uniformly convex.
struct MAProblem {
  GridPtr grid;
  ScalarField g;       // strictly positive at every node
  PointFunction phi;   // boundary data

  double lambda() const { return g.min(); }
  double Lambda() const { return g.max(); }
};

struct MASolveOptions {
  double newton_tol = 1e-10;
  int max_newton_iters = 50;
  double backtrack_factor = 0.5;
  int max_backtracks = 30;
  double armijo = 1e-4;
  // Hessian eigenvalues are clamped below at eps_c before forming the
  // cofactor used in the Newton linearization.
  double eps_c = 1e-10;
  LinearBackend backend = LinearBackend::Auto;
};

struct MAReport {
  int iterations = 0;
  std::vector<double> residual_history;
  double min_hessian_eigenvalue = 0.0;
  // Rounding level of the residual evaluation, 8 eps max_i sum_j |J_ij| |u_j|.
  // A stalled line search below this level counts as converged.
  double residual_floor = 0.0;
  int backtracks = 0;
};

struct MAResult {
  ScalarField u;
  MAReport report;
};

// Throws NonConvergenceError (with the residual history) when max iterations
// are exhausted or the line search stalls, Error(ConvexityFailure) when no
// step keeps the iterate convex.
MAResult solve_ma(const MAProblem& problem, const MASolveOptions& options = {},
                  const ScalarField* warm_start = nullptr, LinearSolver* workspace = nullptr);

// Poisson start: Laplace(u0) = 2 sqrt(g), u0 = phi on the boundary.
ScalarField initial_guess(const MAProblem& problem, LinearSolver* workspace = nullptr);

// det(discrete_hessian(u)) - g at every node.
ScalarField ma_residual(const ScalarField& u, const ScalarField& g);

// Smallest allowed eigenvalue floor applied to H; identity on positive-definite input.
Sym2 clamp_eigenvalues(const Sym2& h, double floor);

}  // namespace abreu
