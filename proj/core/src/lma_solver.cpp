#include "abreu/lma_solver.hpp"

#include "abreu/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace abreu {

Sym2 cofactor(const Sym2& h) { return Sym2{h.yy, -h.xy, h.xx}; }

CofactorField cofactor_field(const HessianField& hessian) {
  CofactorField out{hessian.grid, std::vector<Sym2>(hessian.size())};
  for (std::size_t n = 0; n < hessian.size(); ++n) out.values[n] = cofactor(hessian[n]);
  return out;
}

CofactorField cofactor_field(const ScalarField& u) { return cofactor_field(discrete_hessian(u)); }

std::vector<Point> cofactor_divergence(const CofactorField& cof) {
  const Grid& grid = *cof.grid;
  const double h = grid.spacing();
  std::vector<Point> out(cof.size(), Point::Zero());
  for (std::size_t n = 0; n < cof.size(); ++n) {
    if (!grid.full_stencil(n)) continue;
    const auto& e = cof[static_cast<std::size_t>(grid.arm(n, Arm::East).node)];
    const auto& w = cof[static_cast<std::size_t>(grid.arm(n, Arm::West).node)];
    const auto& no = cof[static_cast<std::size_t>(grid.arm(n, Arm::North).node)];
    const auto& s = cof[static_cast<std::size_t>(grid.arm(n, Arm::South).node)];
    out[n] = Point((e.xx - w.xx + no.xy - s.xy) / (2 * h), (e.xy - w.xy + no.yy - s.yy) / (2 * h));
  }
  return out;
}

LMAProblem LMAProblem::from(CofactorField U, ScalarField g, PointFunction psi) {
  LMAProblem p{std::move(U), std::move(g), std::move(psi)};
  if (!p.U.values.empty()) {
    p.lambda_det = p.Lambda_det = p.U[0].det();
    for (const auto& m : p.U.values) {
      p.lambda_det = std::min(p.lambda_det, m.det());
      p.Lambda_det = std::max(p.Lambda_det, m.det());
    }
  }
  return p;
}

ScalarField lma_residual(const ScalarField& v, const CofactorField& U, const ScalarField& g) {
  if (v.grid_ptr() != U.grid || g.grid_ptr() != U.grid)
    throw Error(ErrorKind::InvalidInput, "v, U and g must share a grid");
  const HessianField hess = discrete_hessian(v);
  std::vector<double> r(v.size());
  for (std::size_t n = 0; n < r.size(); ++n) r[n] = U[n].contract(hess[n]) - g[n];
  return ScalarField(v.grid_ptr(), std::move(r));
}

LMAResult solve_lma(const LMAProblem& problem, const LMAOptions& options, LinearSolver* workspace) {
  if (!problem.U.grid) throw Error(ErrorKind::InvalidInput, "cofactor field without grid");
  if (problem.g.grid_ptr() != problem.U.grid) throw Error(ErrorKind::InvalidInput, "g lives on a different grid");
  if (problem.U.size() != problem.U.grid->size()) throw Error(ErrorKind::InvalidInput, "cofactor field size mismatch");
  if (!problem.psi) throw Error(ErrorKind::InvalidInput, "linearized problem without boundary data");
  const Grid& grid = *problem.U.grid;

  LMAReport report;
  report.min_cofactor_eigenvalue = report.max_cofactor_eigenvalue = problem.U.size() ? problem.U[0].min_eigenvalue() : 0.0;
  for (std::size_t n = 0; n < problem.U.size(); ++n) {
    const double lo = problem.U[n].min_eigenvalue();
    if (!(lo > 0.0) || !std::isfinite(problem.U[n].max_eigenvalue())) {
      std::ostringstream msg;
      msg << "cofactor matrix is not positive definite at node " << n << " (" << grid.node(n).x() << ", "
          << grid.node(n).y() << "), min eigenvalue " << lo;
      throw DegenerateOperatorError(msg.str(), static_cast<int>(n));
    }
    report.min_cofactor_eigenvalue = std::min(report.min_cofactor_eigenvalue, lo);
    report.max_cofactor_eigenvalue = std::max(report.max_cofactor_eigenvalue, problem.U[n].max_eigenvalue());
  }

  const NondivergenceOperator op = assemble_nondivergence(grid, problem.U.values);
  report.signs = audit_signs(op.interior);

  std::vector<double> hits;
  hits.reserve(grid.hit_count());
  for (const auto& hit : grid.hits()) hits.push_back(problem.psi(hit.point));
  const Eigen::VectorXd rhs = to_vector(problem.g.values()) - op.boundary * to_vector(hits);

  LinearSolver local(options.backend);
  LinearSolver& solver = workspace ? *workspace : local;
  solver.factorize(op.interior);
  ScalarField v(problem.U.grid, to_std(solver.solve(rhs)), std::move(hits), problem.psi);
  if (options.estimate_condition) report.condition_estimate = solver.condition_estimate();

  report.residual = lma_residual(v, problem.U, problem.g).max_abs();
  // Relative to the scale of the right-hand side so large forcing does not fail on rounding alone.
  const double scale = std::max({1.0, problem.g.max_abs(), rhs.lpNorm<Eigen::Infinity>()});
  if (!(report.residual <= options.tol * scale)) {
    std::ostringstream msg;
    msg << "linearized solve residual " << report.residual << " exceeds tolerance " << options.tol;
    throw Error(ErrorKind::LinearSolve, msg.str());
  }
  return {std::move(v), report};
}

}  // namespace abreu
