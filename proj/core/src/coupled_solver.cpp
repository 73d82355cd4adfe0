#include "abreu/coupled_solver.hpp"

#include "abreu/error.hpp"
#include "abreu/local_fit.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <cmath>
#include <sstream>

namespace abreu {

ScalarField w_from_u(const ScalarField& u, double theta) {
  const HessianField hess = discrete_hessian(u);
  const Grid& grid = u.grid();
  std::vector<double> det(hess.size());
  for (std::size_t n = 0; n < det.size(); ++n) {
    det[n] = hess[n].det();
    if (!(det[n] > 0.0) || !(hess[n].trace() > 0.0)) {
      std::ostringstream msg;
      msg << "Hessian not positive definite at node " << n << " (det " << det[n] << ")";
      throw Error(ErrorKind::ConvexityFailure, msg.str());
    }
  }
  const ScalarField det_field(u.grid_ptr(), det);
  std::vector<double> boundary(grid.hit_count());
  for (std::size_t k = 0; k < boundary.size(); ++k) {
    const BoundaryHit& hit = grid.hits()[k];
    double d = det[static_cast<std::size_t>(hit.node)];
    if (grid.size() >= 6) {
      try {
        const double fitted = local_quadratic_fit(det_field, hit.point).value;
        if (fitted > 0.0) d = fitted;
      } catch (const Error&) {
      }
    }
    boundary[k] = std::pow(d, theta - 1.0);
  }
  std::vector<double> values(det.size());
  for (std::size_t n = 0; n < det.size(); ++n) values[n] = std::pow(det[n], theta - 1.0);
  return ScalarField(u.grid_ptr(), std::move(values), std::move(boundary));
}

ScalarField g_from_w(const ScalarField& w, double theta) {
  std::vector<double> values(w.size());
  for (std::size_t n = 0; n < w.size(); ++n) {
    if (!(w[n] > 0.0)) {
      std::ostringstream msg;
      msg << "w must be positive to define det D^2 u (w = " << w[n] << " at node " << n << ")";
      throw Error(ErrorKind::InvalidState, msg.str());
    }
    values[n] = std::pow(w[n], 1.0 / (theta - 1.0));
  }
  return ScalarField(w.grid_ptr(), std::move(values));
}

void validate_problem(const ProblemData& data) {
  if (!data.grid) throw Error(ErrorKind::InvalidInput, "problem without grid");
  if (!(data.theta >= 0.0 && data.theta < 0.5)) {
    std::ostringstream msg;
    msg << "theta must lie in [0, 1/2), got " << data.theta;
    throw Error(ErrorKind::InvalidInput, msg.str());
  }
  if (data.f.grid_ptr() != data.grid) throw Error(ErrorKind::InvalidInput, "forcing lives on a different grid");
  if (!data.phi || !data.psi) throw Error(ErrorKind::InvalidInput, "boundary data phi and psi are required");
  if (!(data.p >= 1.0)) throw Error(ErrorKind::InvalidInput, "integrability exponent p must be >= 1");
  for (double v : data.f.values())
    if (!std::isfinite(v)) throw Error(ErrorKind::InvalidInput, "forcing has non-finite values");
  const Domain& dom = data.grid->domain();
  double psi_min = std::numeric_limits<double>::infinity();
  for (const Point& q : dom.boundary_samples(256)) psi_min = std::min(psi_min, data.psi(q));
  for (const auto& hit : data.grid->hits()) psi_min = std::min(psi_min, data.psi(hit.point));
  if (!(psi_min > 0.0)) {
    std::ostringstream msg;
    msg << "psi must be positive on the boundary (min " << psi_min << ")";
    throw Error(ErrorKind::InvalidInput, msg.str());
  }
}

CoupledSolution solve_system(const ProblemData& data, const CoupledOptions& options) {
  validate_problem(data);
  if (!(options.outer_tol > 0.0) || !(options.sigma > 0.0 && options.sigma <= 1.0) || options.max_outer_iters < 1)
    throw Error(ErrorKind::InvalidInput, "need outer_tol > 0, 0 < sigma <= 1 and max_outer_iters >= 1");

  const auto start = std::chrono::steady_clock::now();
  const GridPtr& grid = data.grid;
  SolveReport report;
  report.f_nonpositive = data.f.max() <= 0.0;
  report.f_lp_norm = lp_norm(data.f, data.p);
  report.psi_min = std::numeric_limits<double>::infinity();
  for (const auto& hit : grid->hits()) report.psi_min = std::min(report.psi_min, data.psi(hit.point));

  LinearSolver workspace(options.ma.backend);

  // Harmonic extension of psi.
  std::vector<double> psi_hits;
  for (const auto& hit : grid->hits()) psi_hits.push_back(data.psi(hit.point));
  const NondivergenceOperator lap = assemble_laplacian(*grid);
  workspace.factorize(lap.interior);
  const Eigen::VectorXd w0 = workspace.solve(-(lap.boundary * to_vector(psi_hits)));
  ScalarField w(grid, to_std(w0), psi_hits, data.psi);

  std::optional<MAResult> ma;
  std::optional<LMAResult> lma;
  for (;;) {
    ma = solve_ma(MAProblem{grid, g_from_w(w, data.theta), data.phi}, options.ma, ma ? &ma->u : nullptr, &workspace);
    report.newton_iterations += ma->report.iterations;
    lma = solve_lma(LMAProblem::from(cofactor_field(ma->u), data.f, data.psi), options.lma, &workspace);

    std::vector<double> next(w.size());
    double delta = 0.0;
    for (std::size_t n = 0; n < w.size(); ++n) {
      next[n] = (1.0 - options.sigma) * w[n] + options.sigma * lma->v[n];
      delta = std::max(delta, std::abs(next[n] - w[n]));
    }
    if (!report.update_history.empty() && delta > report.update_history.back()) report.monotone_updates = false;
    report.update_history.push_back(delta);
    ++report.outer_iterations;
    w = ScalarField(grid, std::move(next), psi_hits, data.psi);
    if (delta <= options.outer_tol) break;
    if (report.outer_iterations >= options.max_outer_iters) {
      std::ostringstream msg;
      msg << "outer iteration did not reach " << options.outer_tol << " in " << options.max_outer_iters
          << " iterations (last update " << delta << ")";
      throw NonConvergenceError(msg.str(), report.update_history);
    }
  }

  // Re-solve u against the returned w so both residuals refer to the same pair.
  const ScalarField g = g_from_w(w, data.theta);
  ma = solve_ma(MAProblem{grid, g, data.phi}, options.ma, &ma->u, &workspace);
  report.newton_iterations += ma->report.iterations;
  report.ma_residual = ma->report.residual_history.back();
  report.min_hessian_eigenvalue = ma->report.min_hessian_eigenvalue;
  report.lma_residual = lma_residual(w, cofactor_field(ma->u), data.f).max_abs();
  report.signs = lma->report.signs;
  report.condition_estimate = lma->report.condition_estimate;
  report.w_min = w.min();
  report.w_max = w.max();
  report.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {std::move(ma->u), std::move(w), std::move(report)};
}

ScalarField affine_mean_curvature(const ScalarField& u, const ScalarField& w) {
  if (u.grid_ptr() != w.grid_ptr()) throw Error(ErrorKind::InvalidInput, "u and w live on different grids");
  const HessianField hu = discrete_hessian(u);
  const HessianField hw = discrete_hessian(w);
  std::vector<double> out(u.size());
  for (std::size_t n = 0; n < out.size(); ++n) out[n] = -cofactor(hu[n]).contract(hw[n]) / 3.0;
  return ScalarField(u.grid_ptr(), std::move(out));
}

}  // namespace abreu
