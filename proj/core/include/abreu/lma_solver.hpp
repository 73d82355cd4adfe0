#pragma once

#include "abreu/field.hpp"
#include "abreu/linear.hpp"

#include <optional>
#include <vector>

namespace abreu {

// [[a, b], [b, c]] -> [[c, -b], [-b, a]]; det is preserved in 2D.
Sym2 cofactor(const Sym2& h);

struct CofactorField {
  GridPtr grid;
  std::vector<Sym2> values;

  std::size_t size() const noexcept { return values.size(); }
  const Sym2& operator[](std::size_t i) const { return values[i]; }
};

CofactorField cofactor_field(const HessianField& hessian);
CofactorField cofactor_field(const ScalarField& u);

// Discrete divergence of each row of U by centered first differences of the
// cofactor entries, evaluated at full-stencil nodes only (zero elsewhere).
std::vector<Point> cofactor_divergence(const CofactorField& cof);

struct LMAProblem {
  CofactorField U;
  ScalarField g;
  PointFunction psi;
  double lambda_det = 0.0;  // recorded min / max of det D^2 u
  double Lambda_det = 0.0;

  // Fills lambda_det / Lambda_det from det U.
  static LMAProblem from(CofactorField U, ScalarField g, PointFunction psi);
};

struct LMAOptions {
  double tol = 1e-10;
  LinearBackend backend = LinearBackend::Auto;
  bool estimate_condition = true;
};

struct LMAReport {
  double residual = 0.0;
  SignAudit signs;
  std::optional<double> condition_estimate;
  double min_cofactor_eigenvalue = 0.0;
  double max_cofactor_eigenvalue = 0.0;
};

struct LMAResult {
  ScalarField v;
  LMAReport report;
};

// Throws DegenerateOperatorError naming the first node where U is not
// positive definite, Error(LinearSolve) when the solve misses `tol`.
LMAResult solve_lma(const LMAProblem& problem, const LMAOptions& options = {}, LinearSolver* workspace = nullptr);

// U^11 v_xx + 2 U^12 v_xy + U^22 v_yy - g at every node.
ScalarField lma_residual(const ScalarField& v, const CofactorField& U, const ScalarField& g);

}  // namespace abreu
