#include "support.hpp"

#include "abreu/lma_solver.hpp"
#include "abreu/regularity.hpp"

using namespace abreu;

namespace {

ScalarField laplace(const GridPtr& g, const PointFunction& psi) {
  return solve_lma(LMAProblem::from(CofactorField{g, std::vector<Sym2>(g->size(), Sym2::identity())},
                                    ScalarField::sample(g, [](const Point&) { return 0.0; }), psi))
      .v;
}

}  // namespace

TEST_CASE("constant field is degenerate") {
  const HolderEstimate e = fit_holder_exponent(ScalarField::sample(test::disk_grid(1.0 / 32), [](const Point&) { return 2.0; }));
  CHECK(e.degenerate);
}

TEST_CASE("|x|^beta recovers beta within 0.05 on a 1/64 grid") {
  const GridPtr g = test::disk_grid(1.0 / 64);
  for (double beta : {0.25, 0.5, 0.75}) {
    const HolderEstimate e =
        fit_holder_exponent(ScalarField::sample(g, [&](const Point& p) { return std::pow(std::abs(p.x()), beta); }));
    CHECK(e.exponent == doctest::Approx(beta).epsilon(0.05 / beta));
    CHECK(e.r_squared >= 0.0);
    CHECK(e.r_squared <= 1.0);
  }
}

TEST_CASE("smooth quadratic saturates near 1 at scales >= 4h") {
  HolderOptions o;
  o.min_scale_cells = 4;
  const HolderEstimate e = fit_holder_exponent(
      ScalarField::sample(test::disk_grid(1.0 / 64), [](const Point& p) { return 0.5 * p.squaredNorm() + p.x(); }), o);
  CHECK(e.exponent >= 0.95);
  CHECK(e.exponent <= 1.05);
}

TEST_CASE("too few pairs") {
  CHECK(test::kind_of([] { fit_holder_exponent(ScalarField::sample(test::disk_grid(0.25), [](const Point& p) { return p.x(); })); }) ==
        ErrorKind::InsufficientData);
}

TEST_CASE("boundary thresholds") {
  CHECK(boundary_threshold(1.0) == doctest::Approx(1.0 / 3.0));
  CHECK(boundary_threshold(2.0 / 3.0) == doctest::Approx(0.25));
  double prev = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double t = boundary_threshold(k / 100.0);
    CHECK(t > prev);
    prev = t;
  }
}

TEST_CASE("harmonic extension of smooth data is Lipschitz at the boundary") {
  const GridPtr g = test::disk_grid(1.0 / 64);
  const ScalarField v = laplace(g, [](const Point& p) { return p.x(); });
  const BoundaryHolderResult r = boundary_holder_check(v, 1.0, g->domain().boundary_samples(64));
  CHECK(r.exponent >= 0.95);
  CHECK(r.pass);
}

TEST_CASE("harmonic extensions of |x1| and |x1|^(1/2) pass their thresholds") {
  const GridPtr g = test::disk_grid(1.0 / 64);
  const auto samples = g->domain().boundary_samples(64);
  const BoundaryHolderResult lip = boundary_holder_check(laplace(g, [](const Point& p) { return std::abs(p.x()); }), 1.0, samples);
  CHECK(lip.threshold == doctest::Approx(1.0 / 3.0));
  CHECK(lip.pass);
  const BoundaryHolderResult half =
      boundary_holder_check(laplace(g, [](const Point& p) { return std::sqrt(std::abs(p.x())); }), 0.5, samples);
  CHECK(half.threshold == doctest::Approx(0.2));
  CHECK(half.pass);
}

TEST_CASE("boundary check needs a trace and resolution") {
  const GridPtr g = test::disk_grid(1.0 / 16);
  const ScalarField bare(g, std::vector<double>(g->size(), 1.0));
  CHECK(test::kind_of([&] { boundary_holder_check(bare, 1.0, g->domain().boundary_samples(8)); }) == ErrorKind::IncompleteData);
  const GridPtr coarse = test::disk_grid(0.25);
  CHECK(test::kind_of([&] {
          boundary_holder_check(ScalarField::sample(coarse, [](const Point& p) { return p.x(); }), 1.0,
                                coarse->domain().boundary_samples(8));
        }) == ErrorKind::InsufficientResolution);
}

TEST_CASE("minimum principle: trivial pass, positive forcing skipped") {
  const double h = 1.0 / 32;
  const GridPtr g = test::disk_grid(h);
  const PointFunction one = [](const Point&) { return 1.0; };
  const ScalarField w = ScalarField::sample(g, one);
  const MinPrincipleResult ok = min_principle_check(w, one, ScalarField::sample(g, [](const Point&) { return 0.0; }));
  CHECK(ok.status == CheckStatus::Pass);
  CHECK(ok.margin == doctest::Approx(0.0).scale(1.0));
  CHECK(ok.tolerance == doctest::Approx(10 * h * h));
  const MinPrincipleResult skip = min_principle_check(w, one, ScalarField::sample(g, one));
  CHECK(skip.status == CheckStatus::Skip);
  CHECK(skip.hypothesis_violated);
}

TEST_CASE("minimum principle for Laplace with g = f <= 0") {
  const double h = 1.0 / 32;
  const GridPtr g = test::disk_grid(h);
  const PointFunction psi = [](const Point& p) { return 1.0 + 0.5 * p.x() * p.y(); };
  for (double amp : {0.0, 1.0, 5.0}) {
    const ScalarField f = ScalarField::sample(g, [&](const Point& p) { return -amp * (1.0 + p.x() * p.x()); });
    const ScalarField v = solve_lma(LMAProblem::from(CofactorField{g, std::vector<Sym2>(g->size(), Sym2::identity())}, f, psi)).v;
    const MinPrincipleResult r = min_principle_check(v, psi, f, g->domain().boundary_samples(256));
    CHECK(r.status == CheckStatus::Pass);
    CHECK(r.margin >= -10 * h * h);
  }
}

TEST_CASE("ABP exponent") {
  CHECK(abp_exponent(0.25) == 2.0 / 3.0);
  CHECK(abp_exponent(0.0) == 0.5);
  for (int k = 0; k < 100; ++k) CHECK(abp_exponent(0.5 * k / 100.0) < 1.0);
}

TEST_CASE("ABP chain with f = 0 reduces to the maximum principle") {
  const GridPtr g = test::disk_grid(1.0 / 32);
  const PointFunction one = [](const Point&) { return 1.0; };
  const BoundsReport b =
      abp_chain_report(ScalarField::sample(g, one), ScalarField::sample(g, [](const Point&) { return 0.0; }), one, 0.25, 2.0);
  CHECK(b.chain_holds);
  CHECK(b.fitted_constant == 0.0);
  CHECK(b.abp_exponent == 2.0 / 3.0);
  CHECK(b.max_w == doctest::Approx(1.0));
}

TEST_CASE("Sobolev monitor: quadratic and quartic") {
  const GridPtr g = test::disk_grid(1.0 / 16);
  const ScalarField q = ScalarField::sample(g, [](const Point& p) { return p.x() * p.x() + p.x() * p.y(); });
  const ScalarField x4 = ScalarField::sample(g, [](const Point& p) { return std::pow(p.x(), 4); });
  std::size_t checked = 0;
  for (std::size_t n = 0; n < g->size(); ++n) {
    if (std::isnan(centered_difference(q, n, 4, 4))) continue;  // full 5x5 block
    ++checked;
    for (int a = 0; a <= 4; ++a)
      for (int b = 0; a + b <= 4; ++b)
        if (a + b >= 3) CHECK(std::abs(centered_difference(q, n, a, b)) <= 1e-6);
    CHECK(centered_difference(x4, n, 4, 0) == doctest::Approx(24.0).epsilon(1e-6));
  }
  CHECK(checked > 0);
  const SobolevTable t = sobolev_monitor(q, 2.0);
  CHECK(t.rows.size() == 5);
  CHECK(t.rows[3].norm <= 1e-6);
  CHECK(t.rows[4].norm <= 1e-6);
  CHECK(t.coverage > 0.5);
}
