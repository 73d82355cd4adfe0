#include "support.hpp"

#include "abreu/csv.hpp"
#include "abreu/local_fit.hpp"

#include <filesystem>
#include <random>

using namespace abreu;

TEST_CASE("x^2 has u_xx = 2 at full-stencil nodes") {
  const GridPtr g = test::disk_grid(0.1);
  const HessianField H = discrete_hessian(ScalarField::sample(g, [](const Point& p) { return p.x() * p.x(); }));
  for (std::size_t n = 0; n < g->size(); ++n)
    if (g->full_stencil(n)) CHECK(H[n].xx == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("xy has u_xy = 1 at full-stencil nodes") {
  const GridPtr g = test::disk_grid(0.1);
  const HessianField H = discrete_hessian(ScalarField::sample(g, [](const Point& p) { return p.x() * p.y(); }));
  for (std::size_t n = 0; n < g->size(); ++n)
    if (g->full_stencil(n)) CHECK(H[n].xy == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("x^4 at x = 0.5, h = 0.1 carries the Taylor remainder h^2 u''''/12") {
  // (u(x+h) - 2u(x) + u(x-h))/h^2 = 12x^2 + 2h^2 exactly for x^4.
  const GridPtr g = test::disk_grid(0.1);
  const int n = g->index_of(5, 0);
  REQUIRE(n >= 0);
  const ScalarField u = ScalarField::sample(g, [](const Point& p) { return std::pow(p.x(), 4); });
  const double uxx = discrete_hessian_at(u, static_cast<std::size_t>(n)).xx;
  CHECK(uxx == doctest::Approx(3.0 + 2.0 * 0.01).epsilon(1e-10));
}

TEST_CASE("discrete Hessian is exact on random quadratics, including cut cells") {
  std::mt19937_64 rng(11);
  auto coef = [&] { return static_cast<double>(rng() % 2001) / 1000.0 - 1.0; };
  const auto d = std::make_shared<const Domain>(Domain::ellipse(Point(0.05, -0.1), 1.3, 0.9, 0.5));
  const GridPtr g = Grid::build(d, 1.0 / 24.0);
  for (int trial = 0; trial < 10; ++trial) {
    const double a = coef(), b = coef(), c = coef(), dx = coef(), dy = coef(), e = coef();
    const ScalarField q = ScalarField::sample(g, [&](const Point& p) {
      return a * p.x() * p.x() + b * p.x() * p.y() + c * p.y() * p.y() + dx * p.x() + dy * p.y() + e;
    });
    const HessianField H = discrete_hessian(q);
    for (std::size_t n = 0; n < g->size(); ++n) {
      const double tol = g->full_stencil(n) ? 1e-10 : 1e-7;
      CHECK(H[n].xx == doctest::Approx(2 * a).epsilon(tol).scale(1.0));
      CHECK(H[n].xy == doctest::Approx(b).epsilon(tol).scale(1.0));
      CHECK(H[n].yy == doctest::Approx(2 * c).epsilon(tol).scale(1.0));
    }
  }
}

TEST_CASE("Hessian needs boundary values near the boundary") {
  const GridPtr g = test::disk_grid(0.25);
  const ScalarField no_trace(g, std::vector<double>(g->size(), 0.0));
  CHECK(test::kind_of([&] { discrete_hessian(no_trace); }) == ErrorKind::IncompleteData);
}

TEST_CASE("discrete gradient is exact on quadratics") {
  const GridPtr g = test::disk_grid(1.0 / 16);
  const ScalarField q = ScalarField::sample(g, [](const Point& p) { return p.x() * p.x() - 3 * p.x() * p.y() + 2 * p.y(); });
  for (std::size_t n = 0; n < g->size(); ++n) {
    const Point p = g->node(n);
    const Point grad = discrete_gradient(q, n);
    CHECK(grad.x() == doctest::Approx(2 * p.x() - 3 * p.y()).epsilon(1e-8).scale(1.0));
    CHECK(grad.y() == doctest::Approx(-3 * p.x() + 2).epsilon(1e-8).scale(1.0));
  }
}

TEST_CASE("quadrature weights sum to the domain area") {
  for (double h : {1.0 / 8, 1.0 / 32}) {
    const auto w = quadrature_weights(*test::disk_grid(h));
    double total = 0.0;
    for (double x : w) total += x;
    CHECK(total == doctest::Approx(M_PI).epsilon(1e-4));
  }
}

TEST_CASE("Lp norm of the constant 1 is area^(1/p)") {
  const GridPtr g = test::disk_grid(1.0 / 32);
  const ScalarField one = ScalarField::sample(g, [](const Point&) { return 1.0; });
  CHECK(lp_norm(one, 2.0) == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-4));
  CHECK(lp_norm(one, 1.0) == doctest::Approx(M_PI).epsilon(1e-4));
}

TEST_CASE("local quadratic fit and interpolation are exact on quadratics") {
  const GridPtr g = test::disk_grid(1.0 / 16);
  auto q = [](const Point& p) { return 0.5 * p.x() * p.x() + p.x() * p.y() - p.y() + 0.25; };
  const ScalarField f = ScalarField::sample(g, q);
  for (const Point& p : {Point(0.013, -0.4), Point(0.95, 0.1), Point(-0.5, 0.77)}) {
    CHECK(interpolate(f, p) == doctest::Approx(q(p)).epsilon(1e-9));
    const LocalFit fit = local_quadratic_fit(f, p);
    CHECK(fit.hessian.xx == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(fit.hessian.xy == doctest::Approx(1.0).epsilon(1e-7));
  }
  CHECK(test::kind_of([&] { interpolate(f, Point(1.5, 0.0)); }) == ErrorKind::OutOfDomain);
}

TEST_CASE("field CSV round-trips bit-for-bit") {
  const GridPtr g = Grid::build(std::make_shared<const Domain>(Domain::ellipse(Point::Zero(), 1.0, 0.7, 0.3)), 0.1);
  const ScalarField f = ScalarField::sample(g, [](const Point& p) { return std::exp(p.x()) / 3.0 + std::sin(p.y()); });
  const auto path = std::filesystem::temp_directory_path() / "abreu_field_roundtrip.csv";
  write_field_csv(path, f);
  const ScalarField back = read_field_csv(path, g);
  for (std::size_t n = 0; n < f.size(); ++n) CHECK(back[n] == f[n]);
  REQUIRE(back.has_boundary());
  for (std::size_t k = 0; k < g->hit_count(); ++k) CHECK(back.boundary(k) == f.boundary(k));
  std::filesystem::remove(path);
  CHECK(test::kind_of([&] { read_field_csv("/nonexistent/abreu.csv", g); }) == ErrorKind::Io);
}

TEST_CASE("field CSV round-trip with hits shared between arms") {
  const GridPtr g = test::disk_grid(1.0 / 16);
  const ScalarField f = ScalarField::sample(g, [](const Point& p) { return p.x() + 2.0 * p.y(); });
  const auto path = std::filesystem::temp_directory_path() / "abreu_field_shared_hits.csv";
  write_field_csv(path, f);
  const ScalarField back = read_field_csv(path, g);
  std::filesystem::remove(path);
  REQUIRE(back.has_boundary());
  for (std::size_t k = 0; k < g->hit_count(); ++k) CHECK(back.boundary(k) == f.boundary(k));
}
