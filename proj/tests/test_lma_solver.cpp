#include "support.hpp"

#include "abreu/lma_solver.hpp"
#include "abreu/oracle.hpp"

#include <random>

using namespace abreu;

namespace {

CofactorField constant_cofactor(const GridPtr& g, Sym2 U) { return CofactorField{g, std::vector<Sym2>(g->size(), U)}; }

CofactorField exact_cofactor(const GridPtr& g, const ExactSolution& s) {
  CofactorField c{g, {}};
  for (std::size_t n = 0; n < g->size(); ++n) c.values.push_back(cofactor(s.hessian(g->node(n))));
  return c;
}

}  // namespace

TEST_CASE("cofactor examples") {
  CHECK(cofactor(Sym2{2, 0, 3}) == Sym2{3, 0, 2});
  CHECK(cofactor(Sym2::identity()) == Sym2::identity());
  const Sym2 m{1, 2, 1};
  CHECK(cofactor(m) == Sym2{1, -2, 1});
  CHECK(cofactor(m).det() == -3.0);
  CHECK(m.det() == -3.0);
}

TEST_CASE("cofactor preserves det and equals det(H) H^-1") {
  std::mt19937_64 rng(5);
  auto c = [&] { return static_cast<double>(rng() % 20001) / 1000.0 - 10.0; };
  for (int k = 0; k < 200; ++k) {
    const Sym2 h{c(), c(), c()};
    const Sym2 u = cofactor(h);
    CHECK(u.det() == h.det());
    if (std::abs(h.det()) > 1e-3) {
      const Mat2 expect = h.det() * h.matrix().inverse();
      CHECK((u.matrix() - expect).norm() <= 1e-12 * (1.0 + expect.norm()));
    }
  }
}

TEST_CASE("U = I, g = 0, psi = x1 gives v = x1") {
  const GridPtr g = test::disk_grid(1.0 / 16);
  const PointFunction x1 = [](const Point& p) { return p.x(); };
  const LMAResult r = solve_lma(LMAProblem::from(constant_cofactor(g, Sym2::identity()),
                                                 ScalarField::sample(g, [](const Point&) { return 0.0; }), x1));
  CHECK(test::max_error(r.v, x1) <= 1e-10);
  CHECK(r.report.residual <= 1e-10);
}

TEST_CASE("U = diag(b, a), g = 2b, psi = x1^2 gives v = x1^2") {
  const double a = 3.0, b = 0.5;
  const GridPtr g = test::disk_grid(1.0 / 16);
  const PointFunction sq = [](const Point& p) { return p.x() * p.x(); };
  const LMAResult r =
      solve_lma(LMAProblem::from(constant_cofactor(g, Sym2{b, 0, a}), ScalarField::sample(g, [&](const Point&) { return 2 * b; }), sq));
  CHECK(test::max_error(r.v, sq) <= 1e-10);
}

TEST_CASE("manufactured polynomial v* converges at second order") {
  const ExactSolution s = fixture("radial", 0.25);
  const Polynomial2 v({{3, 0, 1.0}, {1, 2, 1.0}, {0, 2, -0.5}, {4, 0, 0.25}});
  const PointFunction vstar = [&](const Point& p) { return v(p); };
  std::vector<double> errors;
  for (double h : {1.0 / 16, 1.0 / 32, 1.0 / 64}) {
    const GridPtr g = test::disk_grid(h);
    const CofactorField U = exact_cofactor(g, s);
    const ScalarField rhs = ScalarField::sample(g, [&](const Point& p) { return cofactor(s.hessian(p)).contract(v.hessian(p)); });
    errors.push_back(test::max_error(solve_lma(LMAProblem::from(U, rhs, vstar)).v, vstar));
  }
  CHECK(test::order(errors[1], errors[2]) >= 1.5);
}

TEST_CASE("lma_residual examples") {
  const GridPtr g = test::disk_grid(1.0 / 16);
  const CofactorField U{g, std::vector<Sym2>(g->size(), Sym2{2.0, 0.3, 1.0})};
  const ScalarField zero = ScalarField::sample(g, [](const Point&) { return 0.0; });
  const ScalarField res1 = lma_residual(ScalarField::sample(g, [](const Point& p) { return p.x(); }), U, zero);
  const ScalarField res2 = lma_residual(ScalarField::sample(g, [](const Point& p) { return 0.5 * p.squaredNorm(); }),
                                        constant_cofactor(g, Sym2::identity()),
                                        ScalarField::sample(g, [](const Point&) { return 2.0; }));
  CHECK(res1.max_abs() <= 1e-12);
  CHECK(res2.max_abs() <= 1e-11);
}

TEST_CASE("converged solve meets the residual tolerance") {
  const ExactSolution s = fixture("radial_mild", 0.25);
  const GridPtr g = test::disk_grid(1.0 / 32);
  const LMAProblem p = LMAProblem::from(cofactor_field(ScalarField::sample(g, s.u_function())),
                                        ScalarField::sample(g, s.f_function()), s.w_function());
  const LMAResult r = solve_lma(p);
  CHECK(lma_residual(r.v, p.U, p.g).max_abs() <= 1e-10 * std::max(1.0, p.g.max_abs()) * 10);
  CHECK(r.report.condition_estimate.has_value());
  CHECK(p.lambda_det > 0.0);
}

TEST_CASE("discrete cofactor divergence vanishes at second order") {
  // Polynomial fixtures of degree 4 have exact discrete Hessians; use exp.
  const PointFunction u = [](const Point& p) { return std::exp(0.5 * p.squaredNorm()); };
  std::vector<double> div;
  for (double h : {1.0 / 16, 1.0 / 32, 1.0 / 64}) {
    const GridPtr g = test::disk_grid(h);
    const CofactorField U = cofactor_field(ScalarField::sample(g, u));
    const std::vector<Point> d = cofactor_divergence(U);
    double m = 0.0;
    for (std::size_t n = 0; n < g->size(); ++n)
      if (g->full_stencil(n) && g->node(n).norm() < 0.8) m = std::max(m, d[n].lpNorm<Eigen::Infinity>());
    div.push_back(m);
  }
  CHECK(div[2] < div[1]);
  CHECK(test::order(div[1], div[2]) >= 1.5);
}

TEST_CASE("discrete maximum principle with g >= 0") {
  const double h = 1.0 / 32;
  const GridPtr g = test::disk_grid(h);
  const ExactSolution s = fixture("radial", 0.0);
  const PointFunction psi = [](const Point& p) { return 1.0 + 0.3 * p.x() - 0.2 * p.y() * p.y(); };
  const LMAResult r = solve_lma(LMAProblem::from(exact_cofactor(g, s),
                                                 ScalarField::sample(g, [](const Point& p) { return 1.0 + p.x() * p.x(); }), psi));
  double max_psi = -1e300;
  for (const Point& b : g->domain().boundary_samples(512)) max_psi = std::max(max_psi, psi(b));
  CHECK(r.v.max() <= max_psi + 10 * h * h);
}

TEST_CASE("det U matches det D^2u and bounds lambda_det") {
  const GridPtr g = test::disk_grid(1.0 / 32);
  const ScalarField u = ScalarField::sample(g, fixture("radial", 0.25).u_function());
  const HessianField H = discrete_hessian(u);
  const CofactorField U = cofactor_field(H);
  const LMAProblem p = LMAProblem::from(U, ScalarField::sample(g, [](const Point&) { return 0.0; }), [](const Point&) { return 1.0; });
  for (std::size_t n = 0; n < g->size(); ++n) {
    CHECK(U.values[n].det() == H[n].det());
    CHECK(U.values[n].det() >= p.lambda_det);
  }
}

TEST_CASE("indefinite coefficient names the node") {
  const GridPtr g = test::disk_grid(1.0 / 8);
  CofactorField U = constant_cofactor(g, Sym2::identity());
  U.values[7] = Sym2{1.0, 0.0, -1.0};
  try {
    solve_lma(LMAProblem::from(U, ScalarField::sample(g, [](const Point&) { return 0.0; }), [](const Point&) { return 1.0; }));
    FAIL("expected a degenerate operator");
  } catch (const DegenerateOperatorError& e) {
    CHECK(e.node() == 7);
  }
}
