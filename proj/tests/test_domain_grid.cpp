#include "support.hpp"

#include <random>
#include <set>

using namespace abreu;

TEST_CASE("unit disk has interior tangent radius 1") {
  const Domain d = Domain::disk(Point::Zero(), 1.0);
  CHECK(d.rho() == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(d.outer_radius() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(d.diameter() == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("ellipse (2,1) has rho = b^2/a") {
  const Domain d = Domain::ellipse(Point::Zero(), 2.0, 1.0);
  CHECK(d.rho() == doctest::Approx(0.5).epsilon(1e-4));
  CHECK(d.min_curvature() == doctest::Approx(0.25).epsilon(1e-4));  // a / b^2 at the minor-axis ends
}

TEST_CASE("degenerate ellipse is rejected") {
  CHECK(test::kind_of([] { Domain::ellipse(Point::Zero(), 1.0, 0.0); }) == ErrorKind::InvalidDomain);
  CHECK(test::kind_of([] { Domain::disk(Point::Zero(), -1.0); }) == ErrorKind::InvalidDomain);
}

TEST_CASE("non-convex level function is rejected") {
  // x^2 - y^2 - 1 has an indefinite Hessian.
  const Polynomial2 saddle({{2, 0, 1.0}, {0, 2, -1.0}, {0, 0, -0.5}});
  CHECK(test::kind_of([&] { Domain::polynomial_level_set(saddle, Point::Zero()); }) == ErrorKind::InvalidDomain);
}

TEST_CASE("every boundary sample admits the interior tangent disk of radius rho") {
  for (const Domain& d : {Domain::disk(Point(0.3, -0.2), 1.5), Domain::ellipse(Point::Zero(), 2.0, 1.0, 0.4),
                          Domain::polynomial_level_set(Polynomial2({{2, 0, 1.0}, {0, 2, 2.0}, {4, 0, 1.0}, {0, 0, -1.0}}),
                                                       Point::Zero())}) {
    for (const Point& b : d.boundary_samples(64)) {
      const Point c = b + d.rho() * (1.0 - 1e-9) * d.inner_normal(b);
      CHECK(d.distance_to_boundary(c) >= d.rho() * (1.0 - 1e-3));
      CHECK(d.curvature(b) > 0.0);
    }
  }
}

TEST_CASE("unit disk, h = 0.5 has 9 interior nodes") { CHECK(test::disk_grid(0.5)->size() == 9); }

TEST_CASE("unit disk, h = 3 keeps the origin") {
  const GridPtr g = test::disk_grid(3.0);
  REQUIRE(g->size() == 1);
  CHECK(g->node(0).norm() == 0.0);
}

TEST_CASE("non-positive spacing and empty grids are errors") {
  CHECK(test::kind_of([] { test::disk_grid(0.0); }) == ErrorKind::InvalidInput);
  CHECK(test::kind_of([] { Grid::build(std::make_shared<const Domain>(Domain::disk(Point(0.5, 0.5), 0.1)), 1.0); }) ==
        ErrorKind::EmptyGrid);
}

TEST_CASE("ellipse (2,1), h = 0.25 node count matches brute-force enumeration") {
  const auto d = std::make_shared<const Domain>(Domain::ellipse(Point::Zero(), 2.0, 1.0));
  const double h = 0.25;
  std::size_t count = 0;
  for (int i = -20; i <= 20; ++i)
    for (int j = -20; j <= 20; ++j) {
      const double x = i * h, y = j * h;
      if (x * x / 4.0 + y * y < 1.0) ++count;
    }
  CHECK(Grid::build(d, h)->size() == count);
}

TEST_CASE("index map is a bijection onto 0..N-1") {
  const GridPtr g = Grid::build(std::make_shared<const Domain>(Domain::ellipse(Point(0.1, 0.05), 1.3, 0.8, 0.3)), 0.05);
  std::set<std::pair<int, int>> seen;
  for (std::size_t n = 0; n < g->size(); ++n) {
    const auto [i, j] = g->lattice(n);
    CHECK(g->index_of(i, j) == static_cast<int>(n));
    CHECK(seen.insert({i, j}).second);
  }
}

TEST_CASE("every arm ends at a node or a hit with fraction in (0, 1]") {
  const auto d = std::make_shared<const Domain>(Domain::ellipse(Point::Zero(), 1.2, 0.9, 0.7));
  const GridPtr g = Grid::build(d, 1.0 / 32.0);
  for (std::size_t n = 0; n < g->size(); ++n)
    for (int a = 0; a < kArmCount; ++a) {
      const ArmTarget& t = g->arm(n, static_cast<Arm>(a));
      CHECK((t.is_node() != (t.hit >= 0)));
      CHECK(t.fraction > 0.0);
      CHECK(t.fraction <= 1.0);
    }
  for (const BoundaryHit& hit : g->hits()) CHECK(std::abs(d->defining_function(hit.point)) < 1e-10);
}

TEST_CASE("refinement at least quadruples the node count") {
  const auto d = std::make_shared<const Domain>(Domain::ellipse(Point::Zero(), 1.5, 1.0, 0.2));
  for (double h : {1.0 / 16, 1.0 / 32, 1.0 / 64}) {
    const double coarse = static_cast<double>(Grid::build(d, h)->size());
    const double fine = static_cast<double>(Grid::build(d, h / 2)->size());
    CHECK(fine >= 3.9 * coarse);  // 4x asymptotically; boundary layer costs a few percent at h = 1/16
  }
}

TEST_CASE("closest boundary point and distance agree on the disk") {
  const Domain d = Domain::disk(Point::Zero(), 1.0);
  std::mt19937_64 rng(3);
  for (int k = 0; k < 50; ++k) {
    const Point p(static_cast<double>(rng() % 1400) / 1000.0 - 0.7, static_cast<double>(rng() % 1400) / 1000.0 - 0.7);
    CHECK(d.distance_to_boundary(p) == doctest::Approx(1.0 - p.norm()).epsilon(1e-4));
    CHECK(d.closest_boundary_point(p).norm() == doctest::Approx(1.0).epsilon(1e-6));
  }
}
