#pragma once

#include "abreu/lma_solver.hpp"
#include "abreu/ma_solver.hpp"

#include <optional>
#include <vector>

namespace abreu {

// U^{ij} w_ij = f, w = (det D^2 u)^(theta - 1), u = phi and w = psi on the boundary.
struct ProblemData {
  GridPtr grid;
  double theta = 0.0;
  ScalarField f;
  PointFunction phi;
  PointFunction psi;
  double p = 2.0;  // integrability exponent reported for f
};

struct CoupledOptions {
  double outer_tol = 1e-8;
  int max_outer_iters = 200;
  double sigma = 0.5;
  MASolveOptions ma;
  LMAOptions lma;
};

struct SolveReport {
  int outer_iterations = 0;
  std::vector<double> update_history;  // ||w^{k+1} - w^k||_inf
  int newton_iterations = 0;           // summed over all Monge-Ampere solves
  double ma_residual = 0.0;
  double lma_residual = 0.0;
  double w_min = 0.0;
  double w_max = 0.0;
  double psi_min = 0.0;
  double min_hessian_eigenvalue = 0.0;
  bool f_nonpositive = true;  // hypothesis f <= 0 holds at every node
  double f_lp_norm = 0.0;
  bool monotone_updates = true;
  SignAudit signs;
  std::optional<double> condition_estimate;
  double wall_time_seconds = 0.0;
};

struct CoupledSolution {
  ScalarField u;
  ScalarField w;
  SolveReport report;
};

// Node-wise (det D^2 u)^(theta - 1); hits get the power of the determinant
// extrapolated by a one-sided local fit. Throws ConvexityFailure on det <= 0.
ScalarField w_from_u(const ScalarField& u, double theta);
// Node-wise w^(1 / (theta - 1)). Throws InvalidState on w <= 0.
ScalarField g_from_w(const ScalarField& w, double theta);

// Checks theta in [0, 1/2), psi > 0 on the boundary and a shared grid.
void validate_problem(const ProblemData& data);

CoupledSolution solve_system(const ProblemData& data, const CoupledOptions& options = {});

// -(1/3) U^{ij} w_ij at every node.
ScalarField affine_mean_curvature(const ScalarField& u, const ScalarField& w);

}  // namespace abreu
