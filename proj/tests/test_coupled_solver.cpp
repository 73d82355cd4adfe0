#include "support.hpp"

#include "abreu/coupled_solver.hpp"
#include "abreu/oracle.hpp"

#include <random>

using namespace abreu;

namespace {

const PointFunction half_r2 = [](const Point& p) { return 0.5 * p.squaredNorm(); };
const PointFunction one = [](const Point&) { return 1.0; };

ProblemData trivial(const GridPtr& g, double theta) {
  return ProblemData{g, theta, ScalarField::sample(g, [](const Point&) { return 0.0; }), half_r2, one};
}

ProblemData manufactured(const GridPtr& g, const ExactSolution& s) {
  return ProblemData{g, s.theta, ScalarField::sample(g, s.f_function()), s.u_function(), s.w_function()};
}

}  // namespace

TEST_CASE("w_from_u examples") {
  const GridPtr g = test::disk_grid(1.0 / 16);
  const ScalarField det4 = ScalarField::sample(g, [](const Point& p) { return p.squaredNorm(); });
  const ScalarField det1 = ScalarField::sample(g, half_r2);
  CHECK(w_from_u(det4, 0.0).min() == doctest::Approx(0.25).epsilon(1e-10));
  CHECK(w_from_u(det4, 0.0).max() == doctest::Approx(0.25).epsilon(1e-10));
  CHECK(w_from_u(det4, 0.25).max() == doctest::Approx(std::pow(4.0, -0.75)).epsilon(1e-10));
  CHECK(w_from_u(det4, 0.25).max() == doctest::Approx(0.35355).epsilon(1e-5));
  for (double theta : {0.0, 0.1, 0.25, 0.45}) {
    const ScalarField w = w_from_u(det1, theta);
    CHECK(w.min() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(w.max() == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("g_from_w examples and errors") {
  const GridPtr g = test::disk_grid(1.0 / 16);
  CHECK(g_from_w(ScalarField::sample(g, [](const Point&) { return 0.25; }), 0.0).max() == doctest::Approx(4.0).epsilon(1e-13));
  CHECK(g_from_w(ScalarField::sample(g, one), 0.3).max() == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(test::kind_of([&] { g_from_w(ScalarField::sample(g, [](const Point& p) { return p.x(); }), 0.25); }) ==
        ErrorKind::InvalidState);
  CHECK(test::kind_of([&] { w_from_u(ScalarField::sample(g, [](const Point& p) { return -p.squaredNorm(); }), 0.25); }) ==
        ErrorKind::ConvexityFailure);
  CHECK(test::kind_of([&] { w_from_u(ScalarField::sample(g, [](const Point& p) { return p.x() * p.x() - p.y() * p.y(); }), 0.25); }) ==
        ErrorKind::ConvexityFailure);
}

TEST_CASE("w/g conversions are inverse to 1e-13 on [1e-6, 1e6]") {
  const GridPtr g = test::disk_grid(1.0 / 16);
  std::mt19937_64 rng(17);
  std::vector<double> vals(g->size());
  for (double& v : vals) v = std::pow(10.0, static_cast<double>(rng() % 12001) / 1000.0 - 6.0);
  const ScalarField w(g, vals, std::vector<double>(g->hit_count(), 1.0));
  for (double theta : {0.0, 0.25, 0.49}) {
    // g = w^(1/(theta-1)) then back: w = g^(theta-1).
    const ScalarField det = g_from_w(w, theta);
    for (std::size_t n = 0; n < g->size(); ++n)
      CHECK(std::pow(det[n], theta - 1.0) == doctest::Approx(vals[n]).epsilon(1e-13));
  }
}

TEST_CASE("round trip g_from_w(w_from_u(u)) equals det D^2u") {
  const GridPtr g = test::disk_grid(1.0 / 32);
  const ScalarField u = ScalarField::sample(g, fixture("radial", 0.25).u_function());
  const HessianField H = discrete_hessian(u);
  const ScalarField back = g_from_w(w_from_u(u, 0.25), 0.25);
  for (std::size_t n = 0; n < g->size(); ++n) CHECK(back[n] == doctest::Approx(H[n].det()).epsilon(1e-13));
}

TEST_CASE("trivial fixed point for theta in {0, 1/4}") {
  const GridPtr g = test::disk_grid(1.0 / 32);
  for (double theta : {0.0, 0.25}) {
    const CoupledSolution s = solve_system(trivial(g, theta));
    CHECK(s.report.outer_iterations <= 2);
    CHECK(test::max_error(s.u, half_r2) <= 1e-8);
    CHECK(test::max_error(s.w, one) <= 1e-8);
    CHECK(!s.report.update_history.empty());
    CHECK(s.report.f_nonpositive);
  }
}

TEST_CASE("invalid problem data") {
  const GridPtr g = test::disk_grid(1.0 / 16);
  CHECK(test::kind_of([&] { solve_system(trivial(g, 0.6)); }) == ErrorKind::InvalidInput);
  CHECK(test::kind_of([&] { solve_system(trivial(g, 0.5)); }) == ErrorKind::InvalidInput);
  CHECK(test::kind_of([&] { solve_system(trivial(g, -0.1)); }) == ErrorKind::InvalidInput);
  ProblemData bad = trivial(g, 0.25);
  bad.psi = [](const Point& p) { return p.x(); };
  CHECK(test::kind_of([&] { solve_system(bad); }) == ErrorKind::InvalidInput);
  CoupledOptions o;
  o.sigma = 0.0;
  CHECK(test::kind_of([&] { solve_system(trivial(g, 0.25), o); }) == ErrorKind::InvalidInput);
}

TEST_CASE("manufactured radial_mild fixture") {
  const ExactSolution s = fixture("radial_mild", 0.25);
  std::vector<double> eu, ew;
  for (double h : {1.0 / 16, 1.0 / 32}) {
    const CoupledSolution sol = solve_system(manufactured(test::disk_grid(h), s));
    eu.push_back(test::max_error(sol.u, s.u_function()));
    ew.push_back(test::max_error(sol.w, s.w_function()));
    CHECK(sol.report.f_nonpositive);
    CHECK(sol.report.monotone_updates);
    CHECK(sol.report.w_min >= sol.report.psi_min - 10 * h * h);
    const auto& hist = sol.report.update_history;
    for (std::size_t k = 1; k < hist.size(); ++k) CHECK(hist[k] <= hist[k - 1]);
  }
  CHECK(test::order(eu[0], eu[1]) >= 1.5);
  CHECK(test::order(ew[0], ew[1]) >= 1.5);
}

TEST_CASE("theta -> 0 limit matches the theta = 0 path") {
  const GridPtr g = test::disk_grid(1.0 / 16);
  const CoupledSolution a = solve_system(manufactured(g, fixture("radial_mild", 0.0)));
  const CoupledSolution b = solve_system(manufactured(g, fixture("radial_mild", 1e-13)));
  for (std::size_t n = 0; n < g->size(); ++n) {
    CHECK(std::abs(a.u[n] - b.u[n]) <= 1e-10);
    CHECK(std::abs(a.w[n] - b.w[n]) <= 1e-10);
  }
}

TEST_CASE("outer non-convergence carries the history") {
  CoupledOptions o;
  o.max_outer_iters = 1;
  try {
    solve_system(manufactured(test::disk_grid(1.0 / 16), fixture("radial", 0.25)), o);
    FAIL("expected non-convergence");
  } catch (const NonConvergenceError& e) {
    CHECK(e.history().size() == 1);
  }
}

TEST_CASE("positive forcing is flagged, not refused") {
  const GridPtr g = test::disk_grid(1.0 / 16);
  ProblemData d = trivial(g, 0.25);
  d.f = ScalarField::sample(g, [](const Point&) { return 0.1; });
  const CoupledSolution s = solve_system(d);
  CHECK(!s.report.f_nonpositive);
}

TEST_CASE("affine mean curvature") {
  const GridPtr g = test::disk_grid(1.0 / 16);
  const ScalarField u = ScalarField::sample(g, fixture("radial", 0.25).u_function());
  CHECK(affine_mean_curvature(u, ScalarField::sample(g, [](const Point&) { return 2.5; })).max_abs() <= 1e-10);

  // U = I and w = 3|x|^2/4 give L[u] = 3, so H_A = -1.
  const ScalarField para = ScalarField::sample(g, half_r2);
  const ScalarField w = ScalarField::sample(g, [](const Point& p) { return 0.75 * p.squaredNorm(); });
  const ScalarField H = affine_mean_curvature(para, w);
  CHECK(H.min() == doctest::Approx(-1.0).epsilon(1e-10));
  CHECK(H.max() == doctest::Approx(-1.0).epsilon(1e-10));

  const ExactSolution s = fixture("radial_mild", 0.25);
  const ProblemData d = manufactured(test::disk_grid(1.0 / 16), s);
  const CoupledSolution sol = solve_system(d);
  const ScalarField HA = affine_mean_curvature(sol.u, sol.w);
  for (std::size_t n = 0; n < HA.size(); ++n) CHECK(HA[n] == doctest::Approx(-d.f[n] / 3.0).epsilon(1e-6).scale(1.0));
}
